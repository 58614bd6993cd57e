"""Conversions between self-energy shifts and the reduced function F,
and extraction of expansion remainders.

The reduced self energy F is defined by factoring (alpha/pi) (Z alpha)^4 / n^3
times the electron rest energy out of the level shift.  For non-S states F
expands as

    F = A40 + (Z alpha)^2 { A61 ln[(Z alpha)^-2] + G(Z alpha) }
      = A40 + (Z alpha)^2 { A61 ln[(Z alpha)^-2] + A60 } + (Z alpha)^3 G7(Z alpha)

where G is the order-(Z alpha)^2 remainder and G7 the order-(Z alpha)^3 one;
the two are tied by G = A60 + (Z alpha) G7.  All maps below are affine in the
uncertain inputs, so first-order sigma propagation is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .quantities import (
    ConstantsSet,
    StateLabel,
    UncertainValue,
    add_quadrature,
    check_zalpha,
    scale,
    shift,
)

__all__ = [
    "CoefficientSet",
    "FSample",
    "FSeries",
    "RemainderKind",
    "TruncationOrder",
    "MissingCoefficientError",
    "prefactor",
    "f_to_energy",
    "energy_to_f",
    "extract_gse",
    "extract_gse7",
    "extract_magnifier",
    "extract_remainder",
    "reconstruct_f",
    "truncated_estimate",
    "TruncationBreakdown",
    "truncation_breakdown",
]


class MissingCoefficientError(LookupError):
    """A required expansion coefficient is absent from the coefficient set."""

    def __init__(self, state: StateLabel, name: str):
        self.state = state
        self.name = name
        super().__init__(f"coefficient {name} is not available for state {state}")


@dataclass(frozen=True)
class CoefficientSet:
    """Expansion coefficients for one state, with provenance.

    a60 and gse_limit are optional: absence means "not known", which is
    distinct from a value of zero.  gse_limit is an independently computed
    Z -> 0 limit of the order-(Z alpha)^2 remainder, used for consistency
    checks against extrapolated data.
    """

    state: StateLabel
    a40: UncertainValue
    a61: UncertainValue
    a60: UncertainValue | None = None
    gse_limit: UncertainValue | None = None
    source: str = ""

    def require_a60(self) -> UncertainValue:
        if self.a60 is None:
            raise MissingCoefficientError(self.state, "A60")
        return self.a60

    def require_gse_limit(self) -> UncertainValue:
        if self.gse_limit is None:
            raise MissingCoefficientError(self.state, "GSE0")
        return self.gse_limit


@dataclass(frozen=True)
class FSample:
    """One tabulated reduced self-energy value at nuclear charge z."""

    z: int
    f: UncertainValue

    def __post_init__(self) -> None:
        if self.z < 1:
            raise ValueError(f"nuclear charge must be >= 1, got {self.z}")


@dataclass(frozen=True)
class FSeries:
    """A per-state table of F samples, strictly increasing in Z."""

    state: StateLabel
    samples: tuple[FSample, ...]
    constants_label: str = ""

    def __post_init__(self) -> None:
        zs = [s.z for s in self.samples]
        for a, b in zip(zs, zs[1:]):
            if b <= a:
                raise ValueError(f"samples must be strictly increasing in Z, got {a} then {b}")

    def __len__(self) -> int:
        return len(self.samples)

    @staticmethod
    def from_pairs(state: StateLabel, rows: Sequence[tuple[int, UncertainValue]],
                   constants_label: str = "") -> "FSeries":
        return FSeries(state, tuple(FSample(z, f) for z, f in rows), constants_label)


class RemainderKind(str, Enum):
    """Which remainder of the expansion an operation works with."""

    GSE = "gse"            # order-(Z alpha)^2 remainder
    GSE7 = "gse7"          # order-(Z alpha)^3 remainder
    MAGNIFIER = "magnifier"  # A60 + (Z alpha) * GSE7, numerically equal to GSE


class TruncationOrder(str, Enum):
    TWO_TERM = "two_term"
    THREE_TERM = "three_term"


def prefactor(state: StateLabel, z: int, constants: ConstantsSet) -> float:
    """Hz per unit of F: (alpha/pi) (Z alpha)^4 / n^3 * m_e c^2 / h."""
    za = check_zalpha(z, constants)
    za2 = za * za  # explicit squaring keeps the (Z alpha)^4 scaling law exact
    return (constants.alpha / math.pi) * (za2 * za2) / state.n**3 * constants.electron_rest_frequency


def f_to_energy(f: UncertainValue, state: StateLabel, z: int,
                constants: ConstantsSet) -> UncertainValue:
    """Convert a reduced value F to the level shift in Hz."""
    return scale(f, prefactor(state, z, constants))


def energy_to_f(energy: UncertainValue, state: StateLabel, z: int,
                constants: ConstantsSet) -> UncertainValue:
    """Convert a level shift in Hz to the reduced value F."""
    return scale(energy, 1.0 / prefactor(state, z, constants))


def _require_non_s(state: StateLabel) -> None:
    if state.is_s_state:
        raise ValueError(
            f"state {state} is an S state; the expansion used here holds for non-S states only"
        )


def _log_term(za: float) -> float:
    return math.log(za**-2)


def extract_gse(f: UncertainValue, z: int, coeffs: CoefficientSet,
                constants: ConstantsSet) -> UncertainValue:
    """Order-(Z alpha)^2 remainder: (F - A40)/(Z alpha)^2 - A61 ln[(Z alpha)^-2]."""
    _require_non_s(coeffs.state)
    za = check_zalpha(z, constants)
    diff = add_quadrature(f, scale(coeffs.a40, -1.0))
    g = scale(diff, za**-2)
    return add_quadrature(g, scale(coeffs.a61, -_log_term(za)))


def extract_magnifier(f: UncertainValue, z: int, coeffs: CoefficientSet,
                      constants: ConstantsSet) -> UncertainValue:
    """The combined remainder A60 + (Z alpha) G7.

    Algebraically identical to extract_gse; kept as its own operation
    because it is extrapolated as a second, independent route.
    """
    return extract_gse(f, z, coeffs, constants)


def extract_gse7(f: UncertainValue, z: int, coeffs: CoefficientSet,
                 constants: ConstantsSet) -> UncertainValue:
    """Order-(Z alpha)^3 remainder: [F - A40 - (Z alpha)^2 (A61 ln + A60)]/(Z alpha)^3."""
    _require_non_s(coeffs.state)
    a60 = coeffs.require_a60()
    za = check_zalpha(z, constants)
    g = extract_gse(f, z, coeffs, constants)
    return scale(add_quadrature(g, scale(a60, -1.0)), 1.0 / za)


def extract_remainder(kind: RemainderKind, f: UncertainValue, z: int,
                      coeffs: CoefficientSet, constants: ConstantsSet) -> UncertainValue:
    if kind is RemainderKind.GSE:
        return extract_gse(f, z, coeffs, constants)
    if kind is RemainderKind.GSE7:
        return extract_gse7(f, z, coeffs, constants)
    return extract_magnifier(f, z, coeffs, constants)


def reconstruct_f(remainder: UncertainValue, kind: RemainderKind, z: int,
                  coeffs: CoefficientSet, constants: ConstantsSet) -> UncertainValue:
    """Rebuild F from a remainder value; exact inverse of the extractors."""
    _require_non_s(coeffs.state)
    za = check_zalpha(z, constants)
    log = _log_term(za)
    if kind is RemainderKind.GSE7:
        a60 = coeffs.require_a60()
        braces = add_quadrature(scale(coeffs.a61, log), a60)
        tail = add_quadrature(scale(braces, za**2), scale(remainder, za**3))
    else:  # GSE and MAGNIFIER share F = A40 + (Z a)^2 {A61 ln + r}
        braces = add_quadrature(scale(coeffs.a61, log), remainder)
        tail = scale(braces, za**2)
    return add_quadrature(coeffs.a40, tail)


def truncated_estimate(state: StateLabel, z: int, coeffs: CoefficientSet,
                       constants: ConstantsSet, order: TruncationOrder,
                       remainder_bound: float = 1.0) -> UncertainValue:
    """Perturbation estimate of the level shift from coefficients alone, in Hz.

    two_term keeps only A40 and charges (Z alpha)^2 * remainder_bound for the
    dropped remainder; three_term keeps A40 + (Z alpha)^2 (A61 ln + A60) and
    charges (Z alpha)^3 * remainder_bound.  Coefficient sigmas combine in
    quadrature with the bound term.
    """
    return truncation_breakdown(state, z, coeffs, constants, order, remainder_bound).energy


@dataclass(frozen=True)
class TruncationBreakdown:
    """A truncated estimate split into its reported components (all Hz)."""

    energy: UncertainValue
    central: float
    bound_sigma: float
    coefficient_sigma: float
    order: TruncationOrder


def truncation_breakdown(state: StateLabel, z: int, coeffs: CoefficientSet,
                         constants: ConstantsSet, order: TruncationOrder,
                         remainder_bound: float = 1.0) -> TruncationBreakdown:
    if remainder_bound < 0:
        raise ValueError(f"remainder bound must be >= 0, got {remainder_bound}")
    za = check_zalpha(z, constants)
    pref = prefactor(state, z, constants)
    if order is TruncationOrder.TWO_TERM:
        f_central = coeffs.a40
        bound_sigma = pref * za**2 * remainder_bound
    else:
        a60 = coeffs.require_a60()
        braces = add_quadrature(scale(coeffs.a61, _log_term(za)), a60)
        f_central = add_quadrature(coeffs.a40, scale(braces, za**2))
        bound_sigma = pref * za**3 * remainder_bound
    energy = scale(f_central, pref)
    coefficient_sigma = energy.sigma
    total = add_quadrature(energy, UncertainValue(0.0, bound_sigma))
    return TruncationBreakdown(
        energy=total,
        central=total.value,
        bound_sigma=bound_sigma,
        coefficient_sigma=coefficient_sigma,
        order=order,
    )
