"""Render the pipeline's plot records to figure files.

Each function takes the same row dictionaries that the plot-data writers
emit, so a figure is always a faithful view of the delimited output next to
it.  The Agg backend keeps rendering headless.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_f_vs_z", "render_remainder_vs_z", "render_tableau_trace"]

_DPI = 150


def _by_series(rows: Sequence[Mapping], key: str = "state") -> dict[str, list[Mapping]]:
    series: dict[str, list[Mapping]] = {}
    for row in rows:
        series.setdefault(str(row[key]), []).append(row)
    return series


def render_f_vs_z(rows: Sequence[Mapping], path: str | Path) -> Path:
    """Reduced self-energy curves per state, with error bars."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for label, series in sorted(_by_series(rows).items()):
        z = [row["z"] for row in series]
        f = [row["f"] for row in series]
        err = [row["sigma_f"] for row in series]
        ax.errorbar(z, f, yerr=err, marker="o", markersize=3.5, capsize=2, label=label)
    ax.set_xlabel("nuclear charge number Z")
    ax.set_ylabel("reduced self energy F")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _save(fig, path)


def render_remainder_vs_z(rows: Sequence[Mapping], path: str | Path) -> Path:
    """Remainder against Z with the independent limit as a dashed line."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for label, series in sorted(_by_series(rows).items()):
        z = [row["z"] for row in series]
        g = [row["gse"] for row in series]
        err = [row["sigma_gse"] for row in series]
        ax.errorbar(z, g, yerr=err, marker="o", markersize=3.5, capsize=2, label=label)
        first = series[0]
        if "limit" in first:
            limit = float(first["limit"])
            sigma = float(first.get("sigma_limit", 0.0))
            ax.axhline(limit, linestyle="--", color="gray")
            if sigma:
                ax.axhspan(limit - sigma, limit + sigma, color="gray", alpha=0.15)
    ax.set_xlabel("nuclear charge number Z")
    ax.set_ylabel("self-energy remainder")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _save(fig, path)


def render_tableau_trace(rows: Sequence[Mapping], path: str | Path) -> Path:
    """Window estimates against window mean abscissa, one curve per order."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for order, series in sorted(_by_series(rows, key="order").items(), key=lambda kv: int(kv[0])):
        mean = [row["mean_abscissa"] for row in series]
        est = [row["estimate"] for row in series]
        err = [row["sigma"] for row in series]
        ax.errorbar(mean, est, yerr=err, marker="o", markersize=3.5, capsize=2,
                    label=f"order {order}")
    if rows:
        ax.axvline(float(rows[0]["target"]), linestyle=":", color="gray")
        ax.set_xlabel(f"window mean {rows[0]['variable']}")
    ax.set_ylabel("window estimate at target")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _save(fig, path)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
