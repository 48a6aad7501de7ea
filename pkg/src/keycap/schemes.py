"""Suboptimal input schemes evaluated through the unified rate pipeline.

Three families trade optimality for tractability: equally spaced equal-mass
points (with the point count K selectable), the continuous uniform law, and
a truncated Gaussian whose scale can be optimized or set to the heuristic
sigma_x = A.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from .channel import ChannelParams, secret_key_rate
from .inputs import (
    DiscreteScheme,
    InputScheme,
    TruncatedGaussianScheme,
    UniformScheme,
    maxentropic_scheme,
)
from .numerics import DEFAULT_QUAD, QuadratureSpec, RateResult

__all__ = [
    "InputScheme",
    "DiscreteScheme",
    "UniformScheme",
    "TruncatedGaussianScheme",
    "maxentropic_scheme",
    "best_maxentropic",
    "uniform_scheme_rate",
    "truncated_gaussian_rate",
    "optimize_truncated_gaussian",
]


def best_maxentropic(
    params: ChannelParams,
    k_max: int = 32,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> tuple[int, RateResult]:
    """Exhaustive search over the point count K = 2..k_max; ties go to the
    smaller K."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    best_k, best = 2, secret_key_rate(
        params, maxentropic_scheme(params.amplitude, 2), spec)
    for k in range(3, k_max + 1):
        r = secret_key_rate(params, maxentropic_scheme(params.amplitude, k), spec)
        if r.nats > best.nats:
            best_k, best = k, r
    return best_k, best


def uniform_scheme_rate(
    params: ChannelParams, spec: QuadratureSpec = DEFAULT_QUAD
) -> RateResult:
    return secret_key_rate(params, UniformScheme(params.amplitude), spec)


def truncated_gaussian_rate(
    params: ChannelParams,
    sigma_x: float,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> RateResult:
    return secret_key_rate(
        params, TruncatedGaussianScheme(params.amplitude, sigma_x), spec)


def optimize_truncated_gaussian(
    params: ChannelParams, spec: QuadratureSpec = DEFAULT_QUAD
) -> tuple[float, RateResult]:
    """Maximize the truncated-Gaussian rate over sigma_x in [A/100, 100 A].

    Unimodality is not assumed: a 50-point log grid locates the basin, then
    golden-section refines it to 1e-6 * A.
    """
    a = params.amplitude
    grid = np.geomspace(a / 100.0, 100.0 * a, 50)
    vals = [truncated_gaussian_rate(params, s, spec).nats for s in grid]
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]

    def neg(s):
        return -truncated_gaussian_rate(params, float(s), spec).nats

    sigma_star = float(grid[i])
    if lo < grid[i] < hi:
        try:
            res = minimize_scalar(
                neg, bracket=(lo, grid[i], hi), method="golden",
                options={"xtol": 1e-6 * a / grid[i]})
            if -res.fun >= vals[i]:
                sigma_star = float(res.x)
        except ValueError:
            # flat bracket; the grid point already is the maximum
            pass
    return sigma_star, truncated_gaussian_rate(params, sigma_star, spec)
