"""Line-oriented text formats for F-tables, coefficient tables and constants.

All formats use ``#`` comments and whitespace-separated columns; numbers are
written with 17 significant digits so that save/load round-trips are exact.
Every validation failure carries the offending file and line number.
"""

from __future__ import annotations

import shlex
import warnings
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .quantities import ConstantsSet, StateLabel, UncertainValue, format_state, parse_state
from .reduction import CoefficientSet, FSample, FSeries

__all__ = [
    "TableFormatError",
    "load_constants",
    "load_f_table",
    "save_f_table",
    "load_coefficients",
    "save_plotdata",
    "bundled_data_path",
    "BUNDLED_CONSTANTS",
    "BUNDLED_COEFFICIENTS",
]

BUNDLED_CONSTANTS = "constants_codata2018.txt"
BUNDLED_COEFFICIENTS = "coefficients_hydrogenic.txt"


class TableFormatError(ValueError):
    """A data file violated its format or an invariant; points at the line."""

    def __init__(self, path: str | Path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def bundled_data_path(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(str(resources.files("selfenergy").joinpath("data", name)))


def _content_lines(path: str | Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def load_constants(path: str | Path | None = None) -> ConstantsSet:
    """Read ``alpha``, ``me_c2_hz`` and ``label`` lines; None loads the bundled set."""
    if path is None:
        path = bundled_data_path(BUNDLED_CONSTANTS)
    entries: dict[str, str] = {}
    for lineno, line in _content_lines(path):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key not in ("alpha", "me_c2_hz", "label"):
            raise TableFormatError(path, lineno, f"unknown constants key {key!r}")
        if not rest:
            raise TableFormatError(path, lineno, f"missing value for {key!r}")
        if key in entries:
            raise TableFormatError(path, lineno, f"duplicate key {key!r}")
        entries[key] = rest
    for key in ("alpha", "me_c2_hz", "label"):
        if key not in entries:
            raise TableFormatError(path, 0, f"missing required key {key!r}")
    try:
        return ConstantsSet(
            alpha=float(entries["alpha"]),
            electron_rest_frequency=float(entries["me_c2_hz"]),
            label=entries["label"],
        )
    except ValueError as exc:
        raise TableFormatError(path, 0, str(exc)) from exc


def load_f_table(path: str | Path, expected_constants_label: str | None = None,
                 strict_label: bool = True) -> FSeries:
    """Load a reduced self-energy table.

    Header lines ``state: <label>`` and ``constants: <label>`` precede rows of
    ``Z F sigma_F``.  A constants label differing from
    ``expected_constants_label`` is an error, or a warning when
    ``strict_label`` is false.
    """
    state: StateLabel | None = None
    constants_label = ""
    samples: list[FSample] = []
    last_z = 0
    for lineno, line in _content_lines(path):
        if line.startswith("state:"):
            try:
                state = parse_state(line[len("state:"):].strip())
            except ValueError as exc:
                raise TableFormatError(path, lineno, str(exc)) from exc
            continue
        if line.startswith("constants:"):
            constants_label = line[len("constants:"):].strip()
            continue
        parts = line.split()
        if len(parts) != 3:
            raise TableFormatError(path, lineno, f"expected 'Z F sigma_F', got {line!r}")
        try:
            z = int(parts[0])
            f = float(parts[1])
            sigma = float(parts[2])
        except ValueError as exc:
            raise TableFormatError(path, lineno, str(exc)) from exc
        if z < 1:
            raise TableFormatError(path, lineno, f"Z must be >= 1, got {z}")
        if samples and z == last_z:
            raise TableFormatError(path, lineno, f"duplicate Z = {z}")
        if samples and z < last_z:
            raise TableFormatError(path, lineno, f"Z must increase, got {z} after {last_z}")
        if sigma < 0:
            raise TableFormatError(path, lineno, f"sigma_F must be >= 0, got {sigma}")
        samples.append(FSample(z, UncertainValue(f, sigma)))
        last_z = z
    if state is None:
        raise TableFormatError(path, 0, "missing 'state:' header")
    if not samples:
        raise TableFormatError(path, 0, "table has no data rows")
    if expected_constants_label is not None and constants_label != expected_constants_label:
        message = (f"table constants label {constants_label!r} does not match "
                   f"session constants {expected_constants_label!r}")
        if strict_label:
            raise TableFormatError(path, 0, message)
        warnings.warn(f"{path}: {message}")
    return FSeries(state=state, samples=tuple(samples), constants_label=constants_label)


def save_f_table(series: FSeries, path: str | Path, comment: str = "") -> None:
    """Write an F-table in the format read by load_f_table."""
    lines = []
    if comment:
        lines.extend(f"# {text}" for text in comment.splitlines())
    lines.append(f"state: {format_state(series.state)}")
    if series.constants_label:
        lines.append(f"constants: {series.constants_label}")
    lines.append("# Z F sigma_F")
    for sample in series.samples:
        lines.append(f"{sample.z} {sample.f.value:.17g} {sample.f.sigma:.17g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _coeff_field(token_value: str, token_sigma: str, path, lineno) -> UncertainValue | None:
    if token_value == "-" and token_sigma == "-":
        return None
    if "-" in (token_value, token_sigma) and (token_value == "-") != (token_sigma == "-"):
        raise TableFormatError(path, lineno,
                               "value and sigma must both be numbers or both '-'")
    try:
        value = float(token_value)
        sigma = float(token_sigma)
    except ValueError as exc:
        raise TableFormatError(path, lineno, str(exc)) from exc
    if sigma < 0:
        raise TableFormatError(path, lineno, f"sigma must be >= 0, got {sigma}")
    return UncertainValue(value, sigma)


def load_coefficients(path: str | Path | None = None) -> dict[StateLabel, CoefficientSet]:
    """Load per-state expansion coefficients.

    Rows are ``state A40 sA40 A61 sA61 A60 sA60 GSE0 sGSE0 "source"`` with
    ``-`` marking absent optional fields.  A40 and A61 are mandatory, as is a
    non-empty source citation.  None loads the bundled table.
    """
    if path is None:
        path = bundled_data_path(BUNDLED_COEFFICIENTS)
    table: dict[StateLabel, CoefficientSet] = {}
    for lineno, line in _content_lines(path):
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise TableFormatError(path, lineno, str(exc)) from exc
        if len(tokens) != 10:
            raise TableFormatError(
                path, lineno,
                f"expected 10 fields (state, 4 value/sigma pairs, source), got {len(tokens)}")
        try:
            state = parse_state(tokens[0])
        except ValueError as exc:
            raise TableFormatError(path, lineno, str(exc)) from exc
        if state in table:
            raise TableFormatError(path, lineno, f"duplicate state {tokens[0]}")
        a40 = _coeff_field(tokens[1], tokens[2], path, lineno)
        a61 = _coeff_field(tokens[3], tokens[4], path, lineno)
        a60 = _coeff_field(tokens[5], tokens[6], path, lineno)
        gse_limit = _coeff_field(tokens[7], tokens[8], path, lineno)
        source = tokens[9]
        if a40 is None or a61 is None:
            raise TableFormatError(path, lineno, "A40 and A61 are mandatory")
        if not source.strip():
            raise TableFormatError(path, lineno, "source citation must not be empty")
        table[state] = CoefficientSet(state=state, a40=a40, a61=a61, a60=a60,
                                      gse_limit=gse_limit, source=source)
    if not table:
        raise TableFormatError(path, 0, "coefficient table has no rows")
    return table


def _format_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    text = str(value)
    if "," in text or '"' in text:
        text = '"' + text.replace('"', '""') + '"'
    return text


def save_plotdata(records: Sequence[Mapping[str, object]], path: str | Path,
                  fmt: str = "csv", fields: Sequence[str] | None = None) -> None:
    """Write plot records deterministically as CSV or JSON lines.

    Floats are serialized with 17 significant digits, so identical records
    always produce byte-identical files.  ``fields`` fixes the column set and
    order; by default it comes from the first record (and is required for an
    empty record list in CSV, which still gets its header line).
    """
    if fields is None:
        if not records:
            raise ValueError("fields must be given for an empty record list")
        fields = list(records[0].keys())
    for record in records:
        if set(record.keys()) != set(fields):
            raise ValueError(f"record fields {sorted(record)} != header {sorted(fields)}")
    lines = []
    if fmt == "csv":
        lines.append(",".join(fields))
        for record in records:
            lines.append(",".join(_format_cell(record[name]) for name in fields))
    elif fmt == "jsonl":
        for record in records:
            cells = []
            for name in fields:
                value = record[name]
                if value is None:
                    cell = "null"
                elif isinstance(value, str):
                    cell = '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
                else:
                    cell = _format_cell(value)
                cells.append(f'"{name}":{cell}')
            lines.append("{" + ",".join(cells) + "}")
    else:
        raise ValueError(f"unknown plot-data format {fmt!r}")
    text = "\n".join(lines)
    Path(path).write_text(text + "\n" if text else "", encoding="utf-8")
