"""Closed-form lower/upper bounds on the secret-key capacity and the
high- and low-amplitude asymptotics.

All values are in nats. Bounds 2 and 3 are literal closed forms; bound 1
is the difference of the two plain-channel capacities and therefore runs
the discrete-input solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .channel import ChannelParams, equivalent_channel
from .errors import InvalidBeta
from .numerics import q_function
from .solver import DEFAULT_SOLVER, SolverConfig, plain_capacity, secret_key_capacity

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_BETA_LO = 1e-6
_BETA_HI = 50.0


@dataclass(frozen=True)
class BoundsReport:
    lb1: Optional[float]
    lb2: float
    beta_star: float
    lb3: float
    ub: float
    high_a_limit: float


def lower_bound_1(
    params: ChannelParams, cfg: SolverConfig = DEFAULT_SOLVER
) -> float:
    """C_BE - C_E: enhanced-receiver capacity minus eavesdropper capacity,
    both from the discrete-input solver."""
    eq = equivalent_channel(params)
    c_be = plain_capacity(params.amplitude, math.sqrt(eq.var_eq), cfg).rate_nats
    c_e = plain_capacity(params.amplitude, math.sqrt(eq.var_e), cfg).rate_nats
    return c_be - c_e


def lower_bound_2(params: ChannelParams, beta: float) -> float:
    """Closed-form lower bound with free parameter beta > 0."""
    if beta <= 0.0:
        raise InvalidBeta(f"beta must be positive, got {beta}")
    eq = equivalent_channel(params)
    a = params.amplitude
    sigma_e = math.sqrt(eq.var_e)
    ratio = beta + a / sigma_e
    term1 = 0.5 * math.log1p(2.0 * a * a / (eq.var_eq * math.pi * math.e))
    term2 = (1.0 - 2.0 * float(q_function(ratio))) * math.log(
        2.0 * ratio / (_SQRT_2PI * (1.0 - 2.0 * float(q_function(beta)))))
    term3 = float(q_function(beta))
    term4 = beta * math.exp(-0.5 * beta * beta) / _SQRT_2PI
    return term1 - term2 - term3 - term4 + 0.5


def maximize_lower_bound_2(params: ChannelParams) -> tuple[float, float]:
    """Maximize the beta-parametrized lower bound over (1e-6, 50]: coarse
    grid, then local refinement."""
    betas = np.geomspace(_BETA_LO, _BETA_HI, 200)
    vals = [lower_bound_2(params, float(b)) for b in betas]
    i = int(np.argmax(vals))
    lo = betas[max(i - 1, 0)]
    hi = betas[min(i + 1, len(betas) - 1)]
    res = minimize_scalar(
        lambda b: -lower_bound_2(params, float(b)),
        bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    beta_star, val = float(res.x), -float(res.fun)
    if vals[i] > val:
        beta_star, val = float(betas[i]), vals[i]
    return beta_star, val


def lower_bound_3(params: ChannelParams) -> float:
    """Closed-form lower bound with no free parameter; 0 at A = 0."""
    eq = equivalent_channel(params)
    a2 = params.amplitude**2
    pe = math.pi * math.e
    return 0.5 * math.log(
        (6.0 * a2 / eq.var_eq + 3.0 * pe) / (pe * a2 / eq.var_e + 3.0 * pe))


def upper_bound(params: ChannelParams) -> float:
    """Secret-key capacity under the average-power constraint A^2, which
    dominates the peak-constrained capacity."""
    a2 = params.amplitude**2
    return 0.5 * math.log1p(
        a2 * params.var_e / ((a2 + params.var_e) * params.var_d))


def high_a_limit(params: ChannelParams) -> float:
    """Common limit of the upper bound and the maximized closed-form lower
    bound as A grows: 0.5 log(1 + var_e / var_d)."""
    return 0.5 * math.log1p(params.var_e / params.var_d)


def low_a_ratio(
    params: ChannelParams,
    a_values,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> list[tuple[float, float]]:
    """C_k(A) / (A^2 / (2 var_d)) per amplitude; tends to 1 as A -> 0."""
    out = []
    for a in a_values:
        p = ChannelParams(float(a), params.var_d, params.var_e)
        ck = secret_key_capacity(p, cfg).rate_nats
        out.append((float(a), ck / (a * a / (2.0 * params.var_d))))
    return out


def bounds_report(
    params: ChannelParams,
    cfg: Optional[SolverConfig] = DEFAULT_SOLVER,
) -> BoundsReport:
    """All bounds at one operating point; pass cfg=None to skip the
    solver-backed bound."""
    beta_star, lb2 = maximize_lower_bound_2(params)
    return BoundsReport(
        lb1=None if cfg is None else lower_bound_1(params, cfg),
        lb2=lb2,
        beta_star=beta_star,
        lb3=lower_bound_3(params),
        ub=upper_bound(params),
        high_a_limit=high_a_limit(params),
    )
