"""End-to-end data reduction: tables in, limit estimates and plot records out.

These functions glue the remainder extraction to the extrapolation cascade
and back: extract the chosen remainder for every tabulated Z, slide the
window cascade toward the target, then rebuild F and the level shift there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .extrap import (
    ConvergencePolicy,
    ExtrapolationResult,
    Grid,
    Tableau,
    extrapolate,
    extrapolate_in_n,
)
from .quantities import ConstantsSet, StateLabel, UncertainValue, format_state
from .reduction import (
    CoefficientSet,
    FSeries,
    RemainderKind,
    extract_remainder,
    f_to_energy,
    reconstruct_f,
)

__all__ = [
    "SeriesExtrapolation",
    "VerifyReport",
    "remainder_grid",
    "extrapolate_series",
    "extrapolate_across_n",
    "verify_limit",
    "records_f_vs_z",
    "records_remainder_vs_z",
    "records_tableau",
]


def remainder_grid(series: FSeries, kind: RemainderKind, coeffs: CoefficientSet,
                   constants: ConstantsSet) -> Grid:
    """Per-sample remainder values of an F table, on the Z axis."""
    nodes = tuple(float(sample.z) for sample in series.samples)
    values = tuple(
        extract_remainder(kind, sample.f, sample.z, coeffs, constants)
        for sample in series.samples
    )
    return Grid(nodes=nodes, values=values, variable_label="Z")


@dataclass(frozen=True)
class SeriesExtrapolation:
    """Extrapolated remainder for one table, with the reconstructed shift."""

    state: StateLabel
    kind: RemainderKind
    target_label: str
    remainder: ExtrapolationResult
    f: UncertainValue | None         # None when the target is Z alpha -> 0
    energy: UncertainValue | None    # Hz; None when the target is Z alpha -> 0


def extrapolate_series(series: FSeries, kind: RemainderKind, coeffs: CoefficientSet,
                       constants: ConstantsSet, target_z: int | None = 1,
                       max_order: int | None = None,
                       policy: ConvergencePolicy | None = None) -> SeriesExtrapolation:
    """Extrapolate one table's remainder to Z = target_z, or to Z alpha -> 0.

    ``target_z=None`` targets the Z alpha -> 0 limit, where only the
    remainder itself is meaningful; otherwise F and the level shift are
    rebuilt at the target charge from the extrapolated remainder.
    """
    grid = remainder_grid(series, kind, coeffs, constants)
    target = 0.0 if target_z is None else float(target_z)
    result = extrapolate(grid, target, max_order, policy)
    if target_z is None:
        return SeriesExtrapolation(series.state, kind, "zalpha=0", result, None, None)
    f = reconstruct_f(result.estimate, kind, target_z, coeffs, constants)
    energy = f_to_energy(f, series.state, target_z, constants)
    return SeriesExtrapolation(series.state, kind, f"z={target_z}", result, f, energy)


def extrapolate_across_n(per_series: list[SeriesExtrapolation], target_state: StateLabel,
                         coeffs: CoefficientSet, constants: ConstantsSet, target_z: int = 1,
                         max_order: int | None = None,
                         policy: ConvergencePolicy | None = None) -> SeriesExtrapolation:
    """Second-stage extrapolation across principal quantum numbers.

    Takes same-(l, j) single-table results at a common target charge and
    extrapolates their remainders on 1/n to the target state's n, then
    rebuilds F and the shift with the target state's coefficients.
    """
    if len(per_series) < 2:
        raise ValueError("n-extrapolation needs at least two tables at distinct n")
    kinds = {r.kind for r in per_series}
    if len(kinds) != 1:
        raise ValueError("mixed remainder kinds in n-extrapolation")
    kind = kinds.pop()
    for r in per_series:
        if (r.state.l, r.state.j2) != (target_state.l, target_state.j2):
            raise ValueError(
                f"state {format_state(r.state)} has different (l, j) than the "
                f"target {format_state(target_state)}")
    points = [(r.state.n, r.remainder.estimate) for r in per_series]
    result = extrapolate_in_n(points, target_state.n, max_order, policy)
    f = reconstruct_f(result.estimate, kind, target_z, coeffs, constants)
    energy = f_to_energy(f, target_state, target_z, constants)
    return SeriesExtrapolation(target_state, kind, f"n={target_state.n}", result, f, energy)


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of the limit-consistency check of one table."""

    state: StateLabel
    extrapolated: UncertainValue
    limit: UncertainValue
    difference: float
    combined_sigma: float
    k: float
    consistent: bool
    result: ExtrapolationResult


def verify_limit(series: FSeries, coeffs: CoefficientSet, constants: ConstantsSet,
                 k: float = 2.0, max_order: int | None = None,
                 policy: ConvergencePolicy | None = None) -> VerifyReport:
    """Check that extrapolated remainder data reaches the independent limit.

    Extracts the order-x^2 remainder for every sample, extrapolates to
    Z alpha -> 0 and declares the table consistent when the distance to the
    independently calculated limit is at most k combined sigmas.
    """
    if k <= 0:
        raise ValueError(f"consistency factor k must be > 0, got {k}")
    limit = coeffs.require_gse_limit()
    run = extrapolate_series(series, RemainderKind.GSE, coeffs, constants,
                             target_z=None, max_order=max_order, policy=policy)
    estimate = run.remainder.estimate
    difference = abs(estimate.value - limit.value)
    combined = math.hypot(estimate.sigma, limit.sigma)
    return VerifyReport(
        state=series.state,
        extrapolated=estimate,
        limit=limit,
        difference=difference,
        combined_sigma=combined,
        k=k,
        consistent=difference <= k * combined,
        result=run.remainder,
    )


def records_f_vs_z(series_list: list[FSeries]) -> list[dict]:
    """Reduced self-energy curves, one labeled series per state."""
    rows = []
    for series in sorted(series_list, key=lambda s: format_state(s.state)):
        label = format_state(series.state)
        for sample in series.samples:
            rows.append({"state": label, "z": sample.z,
                         "f": sample.f.value, "sigma_f": sample.f.sigma})
    return rows


def records_remainder_vs_z(series: FSeries, coeffs: CoefficientSet,
                           constants: ConstantsSet,
                           limit: UncertainValue | None = None) -> list[dict]:
    """Remainder-vs-Z curve records, optionally with the limit line columns."""
    label = format_state(series.state)
    grid = remainder_grid(series, RemainderKind.GSE, coeffs, constants)
    rows = []
    for z, value in zip(grid.nodes, grid.values):
        row = {"state": label, "z": int(z), "gse": value.value, "sigma_gse": value.sigma}
        if limit is not None:
            row["limit"] = limit.value
            row["sigma_limit"] = limit.sigma
        rows.append(row)
    return rows


def records_tableau(tableau: Tableau, state: StateLabel) -> list[dict]:
    """One row per (order, window) pair of a cascade tableau."""
    label = format_state(state)
    rows = []
    for entry in tableau.entries():
        rows.append({
            "state": label,
            "variable": tableau.variable_label,
            "target": tableau.target,
            "order": entry.order,
            "window_start": entry.start,
            "mean_abscissa": entry.mean_abscissa,
            "estimate": entry.estimate.value,
            "sigma": entry.estimate.sigma,
        })
    return rows
