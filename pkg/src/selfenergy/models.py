"""Synthetic reduced self-energy models with known limits.

No numerical F tables are published alongside the coefficient literature, so
tests and bundled sample data use series generated from an explicit smooth
remainder model.  The model fixes the order-(Z alpha)^3 remainder as

    G7(x) = p0 + p1 x + p2 x^2
            + pole_amp / (1 + pole_scale x)
            + exp_amp * exp(-exp_scale x)

with x = Z alpha; everything else (F, the order-x^2 remainder, level shifts,
the Z -> 0 limit) follows from the expansion with the model's coefficient
set.  Because the model is known in closed form, every pipeline output has
an exact reference value.

The component shapes matter: all singularities sit well to the left of the
data window (the rational pole at x = -1/pole_scale, nothing else anywhere),
which is the regime where sliding-window polynomial extrapolation converges
geometrically and its order-to-order changes genuinely bound the remaining
error.  Terms singular at the origin (such as x ln x) converge too slowly
from a middle-Z window for the quoted uncertainties to cover them, so they
are deliberately not part of the random family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .quantities import ConstantsSet, StateLabel, UncertainValue
from .reduction import CoefficientSet, FSample, FSeries, prefactor

__all__ = [
    "RemainderModel",
    "SyntheticSeries",
    "random_remainder_model",
    "random_synthetic_series",
]


@dataclass(frozen=True)
class RemainderModel:
    """Closed-form G7 remainder used to manufacture F tables."""

    poly: tuple[float, ...] = (0.0,)
    pole_amp: float = 0.0
    pole_scale: float = 0.0
    exp_amp: float = 0.0
    exp_scale: float = 0.0

    def g7(self, x: float) -> float:
        value = 0.0
        for coefficient in reversed(self.poly):
            value = value * x + coefficient
        if self.pole_amp:
            value += self.pole_amp / (1.0 + self.pole_scale * x)
        if self.exp_amp:
            value += self.exp_amp * math.exp(-self.exp_scale * x)
        return value

    def g7_at_zero(self) -> float:
        head = self.poly[0] if self.poly else 0.0
        return head + self.pole_amp + self.exp_amp


@dataclass(frozen=True)
class SyntheticSeries:
    """A remainder model plus the coefficient set it is embedded in."""

    coeffs: CoefficientSet
    remainder: RemainderModel

    @property
    def state(self) -> StateLabel:
        return self.coeffs.state

    def a60_value(self) -> float:
        if self.coeffs.a60 is None:
            raise ValueError("synthetic series needs an A60 value")
        return self.coeffs.a60.value

    def gse(self, x: float) -> float:
        """Order-x^2 remainder A60 + x G7(x); its x -> 0 limit is A60."""
        return self.a60_value() + x * self.remainder.g7(x)

    def f(self, z: int, constants: ConstantsSet) -> float:
        x = z * constants.alpha
        braces = self.coeffs.a61.value * math.log(x**-2) + self.gse(x)
        return self.coeffs.a40.value + x**2 * braces

    def energy(self, z: int, constants: ConstantsSet) -> float:
        """Exact level shift of the underlying model in Hz."""
        return prefactor(self.state, z, constants) * self.f(z, constants)

    def f_series(self, z_values, constants: ConstantsSet, sigma_rel: float = 0.0,
                 rng: np.random.Generator | None = None) -> FSeries:
        """Sample the model on a Z grid, optionally with Gaussian noise.

        sigma_rel sets each point's one-sigma uncertainty relative to |F|;
        with a generator the stored values scatter accordingly, without one
        they sit exactly on the model (sigma columns still recorded).
        """
        samples = []
        for z in z_values:
            center = self.f(z, constants)
            sigma = abs(sigma_rel * center)
            value = center + rng.normal(0.0, sigma) if rng is not None and sigma else center
            samples.append(FSample(int(z), UncertainValue(value, sigma)))
        return FSeries(self.state, tuple(samples), "")

    def with_observed_limit(self, sigma_limit: float,
                            rng: np.random.Generator | None = None,
                            bias: float = 0.0) -> "SyntheticSeries":
        """Attach an 'independently calculated' Z -> 0 limit to the coefficients.

        The observed limit is the true A60 plus ``bias`` plus, when a
        generator is supplied, a Gaussian draw of width ``sigma_limit``.
        """
        observed = self.a60_value() + bias
        if rng is not None and sigma_limit:
            observed += rng.normal(0.0, sigma_limit)
        coeffs = replace(self.coeffs, gse_limit=UncertainValue(observed, sigma_limit))
        return replace(self, coeffs=coeffs)


def random_remainder_model(rng: np.random.Generator, scale: float = 1.0,
                           pole_scale_max: float = 1.0,
                           exp_scale_max: float = 1.5) -> RemainderModel:
    """Draw a random smooth remainder.

    Polynomial part of degree <= 2 with coefficients ~ U(-scale, scale), a
    rational component whose pole stays far left of the data window, and an
    entire exponential component.  The scale caps keep every component in
    the geometric-convergence regime of the window cascade.
    """
    poly = tuple(rng.uniform(-scale, scale, size=3))
    return RemainderModel(
        poly=poly,
        pole_amp=rng.uniform(-scale, scale),
        pole_scale=rng.uniform(0.0, pole_scale_max),
        exp_amp=rng.uniform(-scale, scale),
        exp_scale=rng.uniform(0.0, exp_scale_max),
    )


def random_synthetic_series(rng: np.random.Generator, state: StateLabel,
                            scale: float = 1.0) -> SyntheticSeries:
    """A random model embedded in a random (exact) coefficient set."""
    coeffs = CoefficientSet(
        state=state,
        a40=UncertainValue(rng.uniform(-0.2, 0.2)),
        a61=UncertainValue(rng.uniform(0.0, 1.0)),
        a60=UncertainValue(rng.uniform(-2.0, 2.0)),
        source="synthetic model",
    )
    return SyntheticSeries(coeffs=coeffs, remainder=random_remainder_model(rng, scale))
