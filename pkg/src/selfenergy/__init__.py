"""Reduction and extrapolation of one-loop self-energy data for hydrogen-like ions."""

from .quantities import (
    ConstantsSet,
    StateLabel,
    UncertainValue,
    add_quadrature,
    exact,
    format_parenthesis,
    format_state,
    parse_state,
    scale,
)
from .reduction import (
    CoefficientSet,
    FSample,
    FSeries,
    MissingCoefficientError,
    RemainderKind,
    TruncationOrder,
    energy_to_f,
    extract_gse,
    extract_gse7,
    extract_magnifier,
    f_to_energy,
    prefactor,
    reconstruct_f,
    truncated_estimate,
)
from .extrap import (
    ConvergencePolicy,
    ExtrapolationResult,
    Grid,
    NonConvergentError,
    Tableau,
    cascade,
    estimate_limit,
    extrapolate,
    extrapolate_in_n,
    neville_at,
)
from .dataset import (
    TableFormatError,
    load_coefficients,
    load_constants,
    load_f_table,
    save_f_table,
    save_plotdata,
)

__version__ = "0.1.0"
