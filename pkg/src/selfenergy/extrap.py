"""Sliding-window polynomial extrapolation with uncertainty estimates.

The cascade takes a curve sampled on a grid and, for each window of k+1
successive nodes, evaluates the interpolating polynomial of that window at a
target abscissa outside (or inside) the data range.  Plotting each window's
value against the window's mean abscissa gives, order by order, flatter and
flatter curves whose innermost points estimate the limit at the target.

The limit estimate combines two error sources in quadrature:

* data_sigma - the input uncertainties pushed through the interpolation
  weights (exact, since interpolation is linear in the data), and
* order_sigma - the change of the innermost estimate from the previous
  order, which measures how far the order-by-order convergence has gone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .quantities import UncertainValue

__all__ = [
    "Grid",
    "TableauEntry",
    "Tableau",
    "ConvergencePolicy",
    "ExtrapolationResult",
    "NonConvergentError",
    "neville_at",
    "lagrange_weights",
    "cascade",
    "estimate_limit",
    "extrapolate",
    "extrapolate_in_n",
    "DEFAULT_MAX_ORDER",
]

DEFAULT_MAX_ORDER = 3


@dataclass(frozen=True)
class Grid:
    """Samples of a curve: strictly increasing abscissae with uncertain values."""

    nodes: tuple[float, ...]
    values: tuple[UncertainValue, ...]
    variable_label: str = "Z"

    def __post_init__(self) -> None:
        if len(self.nodes) != len(self.values):
            raise ValueError(f"{len(self.nodes)} nodes but {len(self.values)} values")
        if len(self.nodes) < 2:
            raise ValueError("a grid needs at least 2 nodes")
        for a, b in zip(self.nodes, self.nodes[1:]):
            if not b > a:
                raise ValueError(f"nodes must be strictly increasing, got {a} then {b}")

    def __len__(self) -> int:
        return len(self.nodes)

    def window(self, start: int, length: int) -> "Grid":
        return Grid(self.nodes[start:start + length],
                    self.values[start:start + length],
                    self.variable_label)


def lagrange_weights(nodes: Sequence[float], target: float) -> list[float]:
    """Weights w_i with p(target) = sum w_i y_i for the interpolating polynomial."""
    weights = []
    for i, xi in enumerate(nodes):
        w = 1.0
        for j, xj in enumerate(nodes):
            if j != i:
                w *= (target - xj) / (xi - xj)
        weights.append(w)
    return weights


def neville_at(grid: Grid, target: float) -> UncertainValue:
    """Value at ``target`` of the polynomial through all grid nodes.

    The central value comes from Neville's divided-difference recursion;
    the sigma is the exact linear propagation sqrt(sum w_i^2 sigma_i^2)
    through the Lagrange weights.
    """
    if not math.isfinite(target):
        raise ValueError(f"non-finite target {target!r}")
    x = grid.nodes
    p = [v.value for v in grid.values]
    n = len(p)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = ((target - x[i + m]) * p[i] + (x[i] - target) * p[i + 1]) / (x[i] - x[i + m])
    variance = sum(
        w * w * v.sigma * v.sigma
        for w, v in zip(lagrange_weights(x, target), grid.values)
    )
    return UncertainValue(p[0], math.sqrt(variance))


@dataclass(frozen=True)
class TableauEntry:
    """One window's extrapolated value, keyed by the window's mean abscissa."""

    order: int
    start: int  # index of the window's first node in the parent grid
    mean_abscissa: float
    estimate: UncertainValue


@dataclass(frozen=True)
class Tableau:
    """Cascade output: one column of window estimates per interpolation order."""

    target: float
    variable_label: str
    columns: tuple[tuple[TableauEntry, ...], ...]

    @property
    def orders(self) -> range:
        return range(1, len(self.columns) + 1)

    def column(self, order: int) -> tuple[TableauEntry, ...]:
        return self.columns[order - 1]

    def innermost(self, order: int) -> TableauEntry:
        """The window whose mean abscissa lies closest to the target."""
        return min(self.column(order), key=lambda e: abs(e.mean_abscissa - self.target))

    def entries(self):
        for column in self.columns:
            yield from column


def cascade(grid: Grid, target: float, max_order: int = DEFAULT_MAX_ORDER) -> Tableau:
    """Evaluate every window of k+1 successive nodes at ``target`` for k <= max_order.

    Column k holds N-k entries for N grid nodes, ordered by window position.
    """
    n = len(grid)
    if not 1 <= max_order <= n - 1:
        raise ValueError(f"max_order must be in 1..{n - 1} for {n} nodes, got {max_order}")
    columns = []
    for order in range(1, max_order + 1):
        column = []
        for start in range(n - order):
            window = grid.window(start, order + 1)
            column.append(TableauEntry(
                order=order,
                start=start,
                mean_abscissa=sum(window.nodes) / len(window.nodes),
                estimate=neville_at(window, target),
            ))
        columns.append(tuple(column))
    return Tableau(target=target, variable_label=grid.variable_label, columns=tuple(columns))


@dataclass(frozen=True)
class ConvergencePolicy:
    """Stopping rule for raising the interpolation order.

    The order keeps increasing while the innermost estimate moves by no more
    than ``growth_tolerance`` times its previous move; the first larger move
    is taken as the onset of noise amplification and the previous order is
    kept.  Two guards temper that walk:

    * cancellation guard - a move smaller than ``cancellation_floor`` times
      its predecessor (yet above rounding level, ``exactness_floor`` relative
      to the estimate scale) shrank far faster than any geometric convergence
      plausibly allows; it is treated as an accidental cancellation and the
      previous order is used instead.
    * divergence - when the moves grow by more than ``divergence_growth`` at
      every single order and end up more than ``divergence_sigma_factor``
      data sigmas wide, the cascade is amplifying structure, not noise, and
      no limit is quoted.
    """

    growth_tolerance: float = 3.0
    cancellation_floor: float = 0.01
    exactness_floor: float = 1e-12
    divergence_growth: float = 2.0
    divergence_sigma_factor: float = 5.0


class NonConvergentError(RuntimeError):
    """Order-to-order changes grew at every order; no limit can be quoted."""

    def __init__(self, message: str, tableau: Tableau):
        super().__init__(message)
        self.tableau = tableau


@dataclass(frozen=True)
class ExtrapolationResult:
    """A limit estimate with its two uncertainty components and full trace."""

    estimate: UncertainValue
    order_used: int
    data_sigma: float
    order_sigma: float
    trace: Tableau


def estimate_limit(tableau: Tableau, policy: ConvergencePolicy | None = None) -> ExtrapolationResult:
    """Pick the limit estimate from a cascade tableau.

    Uses the innermost window of the order chosen by ``policy``;
    order_sigma is that order's innermost change from the previous order.
    """
    policy = policy or ConvergencePolicy()
    inner = [tableau.innermost(k) for k in tableau.orders]
    if len(inner) == 1:
        # Single column: convergence cannot be assessed, data sigma only.
        entry = inner[0]
        return ExtrapolationResult(entry.estimate, 1, entry.estimate.sigma, 0.0, tableau)

    deltas = [abs(b.estimate.value - a.estimate.value) for a, b in zip(inner, inner[1:])]
    # deltas[i] is the move from order i+1 to order i+2.  A single growing
    # move is no evidence of divergence (it may follow an accidental
    # cancellation); demand sustained growth ending far beyond data noise.
    if (len(deltas) >= 3
            and all(b > policy.divergence_growth * a for a, b in zip(deltas, deltas[1:]))
            and deltas[-1] > policy.divergence_sigma_factor * inner[-1].estimate.sigma):
        raise NonConvergentError(
            "innermost estimates moved further apart at every order", tableau)

    chosen = 2
    for order in range(3, len(inner) + 1):
        current, previous = deltas[order - 2], deltas[order - 3]
        if current <= policy.growth_tolerance * previous:
            chosen = order          # still shrinking
        elif current * policy.cancellation_floor >= previous:
            chosen = order          # previous move was an accidental cancellation
        else:
            break                   # onset of noise amplification
    # moves at rounding level mean the data was reproduced exactly
    exact_floor = policy.exactness_floor * max(abs(e.estimate.value) for e in inner)
    while (chosen > 2
           and deltas[chosen - 2] > exact_floor
           and deltas[chosen - 2] < policy.cancellation_floor * deltas[chosen - 3]):
        chosen -= 1
    entry = inner[chosen - 1]
    order_sigma = deltas[chosen - 2]
    data_sigma = entry.estimate.sigma
    combined = UncertainValue(entry.estimate.value, math.hypot(data_sigma, order_sigma))
    return ExtrapolationResult(combined, chosen, data_sigma, order_sigma, tableau)


def extrapolate(grid: Grid, target: float, max_order: int | None = None,
                policy: ConvergencePolicy | None = None) -> ExtrapolationResult:
    """Cascade + limit selection in one call."""
    if max_order is None:
        max_order = min(DEFAULT_MAX_ORDER, len(grid) - 1)
    return estimate_limit(cascade(grid, target, max_order), policy)


def extrapolate_in_n(points: Sequence[tuple[int, UncertainValue]], target_n: int,
                     max_order: int | None = None,
                     policy: ConvergencePolicy | None = None) -> ExtrapolationResult:
    """Extrapolate across principal quantum numbers on the variable x = 1/n.

    Reduced quantities vary weakly with n, so low polynomial orders in 1/n
    capture the trend; raw level shifts (which carry the 1/n^3 factor)
    should be reduced first.
    """
    if target_n < 1:
        raise ValueError(f"target n must be >= 1, got {target_n}")
    seen = set()
    for n, _ in points:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if n in seen:
            raise ValueError(f"duplicate n = {n}")
        seen.add(n)
    if len(points) < 2:
        raise ValueError("need at least 2 distinct n values")
    ordered = sorted(points, key=lambda p: 1.0 / p[0])
    grid = Grid(
        nodes=tuple(1.0 / n for n, _ in ordered),
        values=tuple(v for _, v in ordered),
        variable_label="1/n",
    )
    return extrapolate(grid, 1.0 / target_n, max_order, policy)
