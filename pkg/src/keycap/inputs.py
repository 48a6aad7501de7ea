"""Input distributions admissible under a peak-amplitude constraint.

A scheme is one of three families: a discrete distribution on finitely many
mass points, the continuous uniform law on [-A, A], or a zero-mean Gaussian
truncated to [-A, A]. All are immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

_PROB_SUM_TOL = 1e-12
_MIN_REL_GAP = 1e-9


@dataclass(frozen=True)
class DiscreteDistribution:
    """Mass points and probabilities, points strictly increasing."""

    points: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) != len(self.probs) or not self.points:
            raise ValueError("points and probs must be nonempty and equal-length")
        if any(p <= 0.0 for p in self.probs):
            raise ValueError("all probabilities must be positive")
        if abs(sum(self.probs) - 1.0) > _PROB_SUM_TOL:
            raise ValueError("probabilities must sum to 1 within 1e-12")
        scale = max(abs(x) for x in self.points) or 1.0
        gaps = np.diff(self.points)
        if len(gaps) and np.min(gaps) <= _MIN_REL_GAP * scale:
            raise ValueError("mass points must be strictly increasing and separated")

    @property
    def half_width(self) -> float:
        return max(abs(x) for x in self.points)

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.points, float), np.asarray(self.probs, float)

    def mirrored(self) -> "DiscreteDistribution":
        """The distribution of -X."""
        return DiscreteDistribution(
            tuple(-x for x in reversed(self.points)),
            tuple(reversed(self.probs)),
        )


@dataclass(frozen=True)
class DiscreteScheme:
    dist: DiscreteDistribution

    @property
    def half_width(self) -> float:
        return self.dist.half_width


@dataclass(frozen=True)
class UniformScheme:
    """Continuous uniform on [-amplitude, amplitude]."""

    amplitude: float

    def __post_init__(self):
        if self.amplitude <= 0.0:
            raise ValueError("amplitude must be positive")

    @property
    def half_width(self) -> float:
        return self.amplitude


@dataclass(frozen=True)
class TruncatedGaussianScheme:
    """Zero-mean Gaussian of scale sigma_x truncated to [-amplitude, amplitude]."""

    amplitude: float
    sigma_x: float

    def __post_init__(self):
        if self.amplitude <= 0.0:
            raise ValueError("amplitude must be positive")
        if self.sigma_x <= 0.0:
            raise ValueError("sigma_x must be positive")

    @property
    def half_width(self) -> float:
        return self.amplitude


InputScheme = Union[DiscreteScheme, UniformScheme, TruncatedGaussianScheme]


def maxentropic_scheme(amplitude: float, num_points: int) -> DiscreteScheme:
    """Uniform probabilities over num_points equally spaced points spanning
    [-amplitude, amplitude], endpoints included."""
    if num_points < 2:
        raise ValueError("need at least two mass points")
    points = np.linspace(-amplitude, amplitude, num_points)
    probs = np.full(num_points, 1.0 / num_points)
    return DiscreteScheme(DiscreteDistribution(tuple(points), tuple(probs)))


def two_point_scheme(amplitude: float) -> DiscreteScheme:
    """Equal masses at the interval extremes."""
    return maxentropic_scheme(amplitude, 2)


def point_mass_scheme(location: float = 0.0) -> DiscreteScheme:
    return DiscreteScheme(DiscreteDistribution((location,), (1.0,)))


def scheme_variance(scheme: InputScheme) -> float:
    """Input variance E[X^2] - E[X]^2 of a scheme (exact, closed form)."""
    if isinstance(scheme, DiscreteScheme):
        x, p = scheme.dist.as_arrays()
        m = float(p @ x)
        return float(p @ (x - m) ** 2)
    if isinstance(scheme, UniformScheme):
        return scheme.amplitude**2 / 3.0
    if isinstance(scheme, TruncatedGaussianScheme):
        # var of N(0, s^2) truncated to [-A, A]: s^2 * (1 - 2a phi(a)/Z)
        # with a = A/s and Z = Phi(a) - Phi(-a)
        a = scheme.amplitude / scheme.sigma_x
        phi_a = math.exp(-0.5 * a * a) / math.sqrt(2.0 * math.pi)
        z = math.erf(a / math.sqrt(2.0))
        return scheme.sigma_x**2 * (1.0 - 2.0 * a * phi_a / z)
    raise TypeError(f"not an input scheme: {scheme!r}")
