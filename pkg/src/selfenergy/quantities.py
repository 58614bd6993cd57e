"""Uncertain values, physical constants and spectroscopic state labels.

Everything here is an immutable value type with pure-function arithmetic,
so the rest of the package can pass these objects around freely.
Uncertainties are one-standard-deviation values combined in quadrature
(inputs are treated as uncorrelated).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN, ROUND_HALF_UP

__all__ = [
    "UncertainValue",
    "ConstantsSet",
    "StateLabel",
    "exact",
    "scale",
    "shift",
    "add_quadrature",
    "format_parenthesis",
    "parse_state",
    "format_state",
    "check_zalpha",
]

# Spectroscopic orbital letters: l = 0..20.  "j" is skipped by convention.
_ORBITAL_LETTERS = "SPDFGHIKLMNOQRTUVWXYZ"

_MINUS = "−"  # typographic minus used in human-readable output


@dataclass(frozen=True)
class UncertainValue:
    """A real value with a one-standard-deviation uncertainty."""

    value: float
    sigma: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.value) and math.isfinite(self.sigma)):
            raise ValueError(f"non-finite uncertain value {self.value!r} +- {self.sigma!r}")
        if self.sigma < 0:
            raise ValueError(f"negative sigma {self.sigma!r}")

    def __str__(self) -> str:
        return format_parenthesis(self)


def exact(value: float) -> UncertainValue:
    """An UncertainValue with zero uncertainty."""
    return UncertainValue(float(value), 0.0)


def scale(u: UncertainValue, c: float) -> UncertainValue:
    """Multiply by an exact constant; sigma scales by |c|."""
    if not math.isfinite(c):
        raise ValueError(f"non-finite scale factor {c!r}")
    return UncertainValue(c * u.value, abs(c) * u.sigma)


def shift(u: UncertainValue, c: float) -> UncertainValue:
    """Add an exact constant; sigma is unchanged."""
    return UncertainValue(u.value + c, u.sigma)


def add_quadrature(a: UncertainValue, b: UncertainValue) -> UncertainValue:
    """Sum of two uncorrelated uncertain values; sigmas combine in quadrature."""
    return UncertainValue(a.value + b.value, math.hypot(a.sigma, b.sigma))


def _sigma_display(sigma: float, two_digits_on_one: bool) -> tuple[int, int]:
    """Round sigma for display.

    Returns (digits, place) where ``digits`` is the integer printed in
    parentheses and ``place`` the decimal exponent of the last displayed
    digit, i.e. the rounded sigma equals digits * 10**place.
    """
    exponent = math.floor(math.log10(sigma))
    ndig = 2 if (two_digits_on_one and int(sigma / 10.0**exponent) == 1) else 1
    place = exponent - (ndig - 1)
    quantum = Decimal(1).scaleb(place)
    digits = int(Decimal(repr(sigma)).quantize(quantum, rounding=ROUND_HALF_UP).scaleb(-place))
    if digits >= 10**ndig:  # rounding carried into the next decade, e.g. 0.098 -> 0.10
        digits //= 10
        place += 1
    return digits, place


def format_parenthesis(
    u: UncertainValue,
    unit_label: str = "",
    two_digits_on_one: bool = True,
) -> str:
    """Render in parenthesis notation, e.g. ``-1404.240(2) kHz``.

    The uncertainty is rounded to one significant digit, or to two when its
    leading digit is 1 (set ``two_digits_on_one=False`` to force one digit).
    The value is rounded to the same decimal place and the parenthesis gives
    the uncertainty in units of the last displayed digit.  A zero sigma
    yields the plain value.  Negative numbers use a typographic minus.
    """
    if u.sigma == 0.0:
        text = repr(u.value)
    else:
        digits, place = _sigma_display(u.sigma, two_digits_on_one)
        quantum = Decimal(1).scaleb(place)
        value = Decimal(repr(u.value)).quantize(quantum, rounding=ROUND_HALF_EVEN)
        if value.is_zero() and value.is_signed():
            value = -value  # never display "-0.000"
        if place > 0:  # integer display: parenthesis counts ones, not 10**place
            digits *= 10**place
        text = f"{value:f}({digits})"
    text = text.replace("-", _MINUS)
    return f"{text} {unit_label}" if unit_label else text


@dataclass(frozen=True)
class ConstantsSet:
    """Fine-structure constant and electron rest energy as a frequency.

    ``electron_rest_frequency`` is m_e c^2 / h in Hz, so dimensionless
    reduced shifts convert directly to frequencies.  ``label`` names the
    dataset the numbers came from (e.g. a CODATA release).
    """

    alpha: float
    electron_rest_frequency: float
    label: str

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 0.01:
            raise ValueError(f"implausible fine-structure constant {self.alpha!r}")
        if not (math.isfinite(self.electron_rest_frequency) and self.electron_rest_frequency > 0):
            raise ValueError(f"electron rest frequency must be positive, got {self.electron_rest_frequency!r}")


def check_zalpha(z: int, constants: ConstantsSet) -> float:
    """Validate a nuclear charge number and return Z*alpha (< 1 required)."""
    if not isinstance(z, int) or isinstance(z, bool) or z < 1:
        raise ValueError(f"nuclear charge number must be a positive integer, got {z!r}")
    za = z * constants.alpha
    if za >= 1.0:
        raise ValueError(f"Z*alpha = {za:.4f} >= 1 is outside the bound-state domain (Z = {z})")
    return za


@dataclass(frozen=True)
class StateLabel:
    """Electron state (n, l, j) with j stored as the integer 2j."""

    n: int
    l: int
    j2: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l <= self.n - 1:
            raise ValueError(f"l = {self.l} is not in 0..n-1 for n = {self.n}")
        if abs(2 * self.l - self.j2) != 1:
            raise ValueError(f"j2 = {self.j2} is not 2l +- 1 for l = {self.l}")

    @property
    def is_s_state(self) -> bool:
        return self.l == 0

    def __str__(self) -> str:
        return format_state(self)


_STATE_RE = re.compile(
    r"""^\s*(?P<n>\d+)
        (?:(?P<letter>[A-Za-z])|\[(?P<lnum>\d+)\])
        (?P<j>\d+/2|\d+\.5|0\.5)
        \s*$""",
    re.VERBOSE,
)


def parse_state(text: str) -> StateLabel:
    """Parse spectroscopic notation like ``4P1/2`` or ``5G7/2``.

    The orbital letter is case-insensitive; j may be written as ``k/2`` or
    as a half-integer decimal.  States with l > 20 use a bracketed orbital
    number, e.g. ``30[25]51/2``.
    """
    m = _STATE_RE.match(text)
    if m is None:
        raise ValueError(f"malformed state label {text!r}")
    n = int(m.group("n"))
    if m.group("letter") is not None:
        letter = m.group("letter").upper()
        l = _ORBITAL_LETTERS.find(letter)
        if l < 0:
            raise ValueError(f"unknown orbital letter {letter!r} in {text!r}")
    else:
        l = int(m.group("lnum"))
    j = m.group("j")
    j2 = int(j[:-2]) if j.endswith("/2") else round(2 * float(j))
    return StateLabel(n=n, l=l, j2=j2)


def format_state(state: StateLabel) -> str:
    """Inverse of parse_state; always writes j as a fraction over 2."""
    if state.l < len(_ORBITAL_LETTERS):
        orbital = _ORBITAL_LETTERS[state.l]
    else:
        orbital = f"[{state.l}]"
    return f"{state.n}{orbital}{state.j2}/2"
