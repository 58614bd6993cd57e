"""Command-line front end for the reduction/extrapolation pipeline.

Exit codes: 0 success, 2 validation or usage failure, 3 extrapolation did
not converge, 4 physics inconsistency (limit check failed but ran fine).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .dataset import (
    TableFormatError,
    load_coefficients,
    load_constants,
    load_f_table,
    save_plotdata,
)
from .extrap import ConvergencePolicy, NonConvergentError, cascade
from .pipeline import (
    SeriesExtrapolation,
    extrapolate_across_n,
    extrapolate_series,
    records_f_vs_z,
    records_remainder_vs_z,
    records_tableau,
    remainder_grid,
    verify_limit,
)
from .quantities import (
    StateLabel,
    UncertainValue,
    format_parenthesis,
    format_state,
    parse_state,
    scale,
)
from .reduction import (
    MissingCoefficientError,
    RemainderKind,
    TruncationOrder,
    energy_to_f,
    extract_remainder,
    f_to_energy,
    truncation_breakdown,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NONCONVERGENT = 3
EXIT_INCONSISTENT = 4


def _common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--constants", metavar="PATH", default=None,
                        help="constants file (default: bundled CODATA-2018 set)")
    parser.add_argument("--coefficients", metavar="PATH", default=None,
                        help="coefficient table (default: bundled table)")
    parser.add_argument("--format", choices=("text", "csv", "jsonl"), default="text",
                        help="output format for record-producing commands")
    parser.add_argument("--output", metavar="PATH", default=None,
                        help="write records to this file instead of stdout")
    parser.add_argument("--max-order", type=int, default=None, metavar="K",
                        help="highest interpolation order of the window cascade")
    parser.add_argument("--growth-tolerance", type=float, default=None, metavar="T",
                        help="allowed growth of order-to-order moves before stopping")
    parser.add_argument("--consistency-k", type=float, default=2.0, metavar="X",
                        help="sigma multiple for the limit consistency verdict")
    parser.add_argument("--allow-label-mismatch", action="store_true",
                        help="warn instead of failing on constants-label mismatches")
    parser.add_argument("--figure-dir", metavar="DIR", default=None,
                        help="also render matplotlib figures into this directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfenergy",
        description="Reduce, extrapolate and report one-loop self-energy data "
                    "for hydrogen-like ions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("convert", help="convert between F and the level shift")
    _common_options(p)
    p.add_argument("--state", required=True, help="spectroscopic label, e.g. 4P1/2")
    p.add_argument("--z", type=int, default=1, help="nuclear charge number (default 1)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--f", type=float, help="reduced value F to convert to a shift")
    group.add_argument("--energy-hz", type=float, help="level shift in Hz to convert to F")
    p.add_argument("--sigma", type=float, default=0.0, help="one-sigma uncertainty of the input")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("extract", help="compute expansion remainders from F values")
    _common_options(p)
    p.add_argument("--mode", choices=[k.value for k in RemainderKind], default="gse")
    p.add_argument("--table", metavar="PATH", help="F table to reduce row by row")
    p.add_argument("--state", help="state label for a single-value extraction")
    p.add_argument("--z", type=int, help="nuclear charge for a single-value extraction")
    p.add_argument("--f", type=float, help="reduced value F for a single-value extraction")
    p.add_argument("--sigma", type=float, default=0.0)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("estimate", help="perturbation estimate from coefficients alone")
    _common_options(p)
    p.add_argument("--state", required=True)
    p.add_argument("--z", type=int, default=1)
    p.add_argument("--order", choices=[o.value for o in TruncationOrder], required=True)
    p.add_argument("--bound", type=float, default=1.0,
                   help="one-sigma bound on the dropped remainder (default 1)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("extrapolate", help="extrapolate table remainders to a target")
    _common_options(p)
    p.add_argument("--table", action="append", required=True, metavar="PATH",
                   help="F table (repeat for n-extrapolation inputs)")
    p.add_argument("--target", default="z=1", metavar="T",
                   help="'z=K', 'zalpha=0' or 'n=N' (default z=1)")
    p.add_argument("--variable", action="append",
                   choices=[k.value for k in RemainderKind],
                   help="remainder to extrapolate; repeat to compare (default gse7)")
    p.set_defaults(func=cmd_extrapolate)

    p = sub.add_parser("verify-limit", help="check data against the independent Z->0 limit")
    _common_options(p)
    p.add_argument("--table", required=True, metavar="PATH")
    p.set_defaults(func=cmd_verify_limit)

    p = sub.add_parser("plotdata", help="emit plot records (and optional figures)")
    _common_options(p)
    p.add_argument("--table", action="append", required=True, metavar="PATH")
    p.add_argument("--mode", choices=("f_vs_z", "gse_vs_z", "tableau_trace"), required=True)
    p.add_argument("--target", default="z=1", metavar="T",
                   help="cascade target for tableau_trace (default z=1)")
    p.add_argument("--variable", choices=[k.value for k in RemainderKind], default="gse",
                   help="remainder variable for tableau_trace (default gse)")
    p.set_defaults(func=cmd_plotdata)

    return parser


class _Session:
    """Loaded inputs shared by the subcommands."""

    def __init__(self, args):
        self.args = args
        self.constants = load_constants(args.constants)
        self.coefficients = load_coefficients(args.coefficients)
        self.policy = (ConvergencePolicy(growth_tolerance=args.growth_tolerance)
                       if args.growth_tolerance is not None else None)

    def table(self, path: str):
        return load_f_table(path, expected_constants_label=self.constants.label,
                            strict_label=not self.args.allow_label_mismatch)

    def coeffs_for(self, state: StateLabel):
        try:
            return self.coefficients[state]
        except KeyError:
            raise MissingCoefficientError(state, "row") from None


def _fig_path(args, name: str) -> Path:
    safe = name.replace("/", "_")
    return Path(args.figure_dir) / f"{safe}.png"


def _emit_records(args, records: list[dict], fields: list[str]) -> None:
    if args.format == "text" and args.output is None:
        print(" ".join(fields))
        for row in records:
            print(" ".join(_cell(row[name]) for name in fields))
    else:
        fmt = "csv" if args.format == "text" else args.format
        if args.output is None:
            raise ValueError("--output is required for csv/jsonl records")
        save_plotdata(records, args.output, fmt=fmt, fields=fields)


def _cell(value) -> str:
    if value is None:
        return "-"
    return f"{value:.17g}" if isinstance(value, float) else str(value)


def _machine(u: UncertainValue) -> str:
    return f"value={u.value:.17g} sigma={u.sigma:.17g}"


def _khz(u: UncertainValue) -> str:
    return format_parenthesis(scale(u, 1e-3), "kHz")


def cmd_convert(args) -> int:
    session = _Session(args)
    state = parse_state(args.state)
    if args.f is not None:
        f = UncertainValue(args.f, args.sigma)
        energy = f_to_energy(f, state, args.z, session.constants)
    else:
        energy = UncertainValue(args.energy_hz, args.sigma)
        f = energy_to_f(energy, state, args.z, session.constants)
    print(f"state: {format_state(state)}  Z: {args.z}")
    print(f"F = {format_parenthesis(f)}  [{_machine(f)}]")
    print(f"energy = {_khz(energy)}  [hz: {_machine(energy)}]")
    return EXIT_OK


def cmd_extract(args) -> int:
    session = _Session(args)
    kind = RemainderKind(args.mode)
    if args.table:
        series = session.table(args.table)
        coeffs = session.coeffs_for(series.state)
        grid = remainder_grid(series, kind, coeffs, session.constants)
        label = format_state(series.state)
        records = [
            {"state": label, "z": int(z), kind.value: v.value, "sigma": v.sigma}
            for z, v in zip(grid.nodes, grid.values)
        ]
        _emit_records(args, records, ["state", "z", kind.value, "sigma"])
        return EXIT_OK
    if args.state is None or args.z is None or args.f is None:
        raise ValueError("extract needs either --table or --state/--z/--f")
    state = parse_state(args.state)
    coeffs = session.coeffs_for(state)
    value = extract_remainder(kind, UncertainValue(args.f, args.sigma), args.z,
                              coeffs, session.constants)
    print(f"state: {format_state(state)}  Z: {args.z}  variable: {kind.value}")
    print(f"{kind.value} = {format_parenthesis(value)}  [{_machine(value)}]")
    return EXIT_OK


def cmd_estimate(args) -> int:
    session = _Session(args)
    state = parse_state(args.state)
    coeffs = session.coeffs_for(state)
    breakdown = truncation_breakdown(state, args.z, coeffs, session.constants,
                                     TruncationOrder(args.order), args.bound)
    print(f"state: {format_state(state)}  Z: {args.z}  order: {args.order}  "
          f"bound: {args.bound:g}")
    print(f"energy = {_khz(breakdown.energy)}  [hz: {_machine(breakdown.energy)}]")
    print(f"central = {breakdown.central / 1e3:.17g} kHz")
    print(f"bound term = {breakdown.bound_sigma / 1e3:.17g} kHz")
    print(f"coefficient term = {breakdown.coefficient_sigma / 1e3:.17g} kHz")
    return EXIT_OK


def _parse_target(text: str) -> tuple[str, int]:
    key, _, value = text.partition("=")
    key = key.strip().lower()
    if key == "zalpha" and value.strip() == "0":
        return "zalpha", 0
    if key in ("z", "n"):
        number = int(value)
        if number < 1:
            raise ValueError(f"target {key} must be >= 1, got {number}")
        return key, number
    raise ValueError(f"cannot parse target {text!r}; expected z=K, zalpha=0 or n=N")


def _run_one(session, series, kind: RemainderKind, target_kind: str, target_value: int,
             max_order) -> SeriesExtrapolation:
    coeffs = session.coeffs_for(series.state)
    target_z = None if target_kind == "zalpha" else target_value
    return extrapolate_series(series, kind, coeffs, session.constants,
                              target_z=target_z, max_order=max_order,
                              policy=session.policy)


def _print_run(run: SeriesExtrapolation) -> None:
    result = run.remainder
    print(f"state: {format_state(run.state)}  variable: {run.kind.value}  "
          f"target: {run.target_label}")
    print(f"  remainder = {format_parenthesis(result.estimate)}  "
          f"[{_machine(result.estimate)}]")
    print(f"  order_used = {result.order_used}  data_sigma = {result.data_sigma:.17g}  "
          f"order_sigma = {result.order_sigma:.17g}")
    if run.f is not None:
        print(f"  F = {format_parenthesis(run.f)}  [{_machine(run.f)}]")
        print(f"  energy = {_khz(run.energy)}  [hz: {_machine(run.energy)}]")


def cmd_extrapolate(args) -> int:
    session = _Session(args)
    kinds = [RemainderKind(v) for v in (args.variable or ["gse7"])]
    target_kind, target_value = _parse_target(args.target)
    tables = [session.table(path) for path in args.table]
    tables.sort(key=lambda s: format_state(s.state))

    runs: dict[RemainderKind, SeriesExtrapolation] = {}
    trace_records: list[dict] = []
    trace_fields = ["state", "variable", "target", "order", "window_start",
                    "mean_abscissa", "estimate", "sigma"]
    for kind in kinds:
        try:
            if target_kind == "n":
                per_series = [
                    _run_one(session, series, kind, "z", 1, args.max_order)
                    for series in tables
                ]
                sample = tables[0].state
                target_state = StateLabel(target_value, sample.l, sample.j2)
                run = extrapolate_across_n(per_series, target_state,
                                           session.coeffs_for(target_state),
                                           session.constants, target_z=1,
                                           max_order=args.max_order, policy=session.policy)
            else:
                if len(tables) != 1:
                    raise ValueError("Z and Z-alpha targets take exactly one --table")
                run = _run_one(session, tables[0], kind, target_kind, target_value,
                               args.max_order)
        except NonConvergentError as exc:
            # the diagnostic still carries the full tableau: emit it for audit
            trace_records.extend(records_tableau(exc.tableau, tables[0].state))
            if args.output is not None:
                fmt = args.format if args.format != "text" else "csv"
                save_plotdata(trace_records, args.output, fmt=fmt, fields=trace_fields)
            print(f"error: {kind.value}: {exc}", file=sys.stderr)
            return EXIT_NONCONVERGENT
        runs[kind] = run
        _print_run(run)
        trace_records.extend(records_tableau(run.remainder.trace, run.state))
        if args.figure_dir:
            from . import figures
            rows = records_tableau(run.remainder.trace, run.state)
            figures.render_tableau_trace(
                rows, _fig_path(args, f"extrapolate_{kind.value}_{format_state(run.state)}"))

    if RemainderKind.GSE7 in runs and RemainderKind.MAGNIFIER in runs:
        a, b = runs[RemainderKind.GSE7], runs[RemainderKind.MAGNIFIER]
        ua = a.energy if a.energy is not None else a.remainder.estimate
        ub = b.energy if b.energy is not None else b.remainder.estimate
        difference = abs(ua.value - ub.value)
        combined = math.hypot(ua.sigma, ub.sigma)
        agrees = difference <= combined
        print(f"agreement gse7 vs magnifier: difference = {difference:.17g}  "
              f"combined_sigma = {combined:.17g}  "
              f"{'agree' if agrees else 'DISAGREE'}")

    if args.output is not None:
        fmt = args.format if args.format != "text" else "csv"
        save_plotdata(trace_records, args.output, fmt=fmt, fields=trace_fields)
    return EXIT_OK


def cmd_verify_limit(args) -> int:
    session = _Session(args)
    series = session.table(args.table)
    coeffs = session.coeffs_for(series.state)
    report = verify_limit(series, coeffs, session.constants, k=args.consistency_k,
                          max_order=args.max_order, policy=session.policy)
    records = records_remainder_vs_z(series, coeffs, session.constants, limit=report.limit)
    print(f"state: {format_state(series.state)}  consistency k = {report.k:g}")
    print(f"  extrapolated limit = {format_parenthesis(report.extrapolated)}  "
          f"[{_machine(report.extrapolated)}]")
    print(f"  independent limit  = {format_parenthesis(report.limit)}  "
          f"[{_machine(report.limit)}]")
    print(f"  |difference| = {report.difference:.17g}  "
          f"combined_sigma = {report.combined_sigma:.17g}")
    print(f"  verdict: {'consistent' if report.consistent else 'INCONSISTENT'}")
    if args.output is not None:
        fmt = args.format if args.format != "text" else "csv"
        save_plotdata(records, args.output, fmt=fmt,
                      fields=["state", "z", "gse", "sigma_gse", "limit", "sigma_limit"])
    if args.figure_dir:
        from . import figures
        figures.render_remainder_vs_z(
            records, _fig_path(args, f"verify_{format_state(series.state)}"))
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def cmd_plotdata(args) -> int:
    session = _Session(args)
    tables = [session.table(path) for path in args.table]
    tables.sort(key=lambda s: format_state(s.state))
    if args.mode == "f_vs_z":
        records = records_f_vs_z(tables)
        fields = ["state", "z", "f", "sigma_f"]
        for series in tables:
            values = [abs(s.f.value) for s in series.samples]
            spread = (max(values) - min(values)) / max(values)
            print(f"# {format_state(series.state)}: max relative F variation "
                  f"{100 * spread:.1f}% over Z = {series.samples[0].z}"
                  f"..{series.samples[-1].z}")
    elif args.mode == "gse_vs_z":
        records = []
        for series in tables:
            coeffs = session.coeffs_for(series.state)
            limit = coeffs.gse_limit
            records.extend(records_remainder_vs_z(series, coeffs, session.constants,
                                                  limit=limit))
        with_limit = any("limit" in row for row in records)
        fields = ["state", "z", "gse", "sigma_gse"] + (
            ["limit", "sigma_limit"] if with_limit else [])
        if with_limit:  # pad rows lacking a limit so the schema stays rectangular
            for row in records:
                row.setdefault("limit", None)
                row.setdefault("sigma_limit", None)
    else:  # tableau_trace
        target_kind, target_value = _parse_target(args.target)
        kind = RemainderKind(args.variable)
        records = []
        for series in tables:
            coeffs = session.coeffs_for(series.state)
            grid = remainder_grid(series, kind, coeffs, session.constants)
            max_order = args.max_order or min(4, len(grid) - 1)
            target = 0.0 if target_kind == "zalpha" else float(target_value)
            tableau = cascade(grid, target, max_order)
            records.extend(records_tableau(tableau, series.state))
        fields = ["state", "variable", "target", "order", "window_start",
                  "mean_abscissa", "estimate", "sigma"]
    _emit_records(args, records, fields)
    if args.figure_dir:
        from . import figures
        render = {"f_vs_z": figures.render_f_vs_z,
                  "gse_vs_z": figures.render_remainder_vs_z,
                  "tableau_trace": figures.render_tableau_trace}[args.mode]
        render(records, _fig_path(args, args.mode))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonConvergentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT
    except (TableFormatError, MissingCoefficientError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
