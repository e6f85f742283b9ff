"""Small numerical helpers shared by the parameter, series and rule modules."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .exceptions import PlanError


def tan_half_pi_alpha(alpha: float) -> float:
    """tan(pi*alpha/2), computed accurately over (0, 2].

    Direct evaluation loses up to 8 digits near the pole at alpha = 1 and
    near the zero at alpha = 2 because pi/2 is not representable; both
    cases reduce to the tangent of a small angle instead.
    """
    if alpha == 2.0:
        return 0.0
    if alpha >= 1.5:
        return math.tan(0.5 * math.pi * (alpha - 2.0))
    if 0.5 < alpha < 1.5:
        d = alpha - 1.0
        if d == 0.0:
            return math.inf
        return -1.0 / math.tan(0.5 * math.pi * d)
    return math.tan(0.5 * math.pi * alpha)


def pow_minus_t(t, alpha: float):
    """t**alpha - t, stable against cancellation as alpha -> 1 (t > 0)."""
    t = np.asarray(t, dtype=float)
    out = t * np.expm1((alpha - 1.0) * np.log(t))
    return out


def lgamma(x):
    """Natural log of |Gamma(x)| for positive x, vectorized."""
    return gammaln(x)


def binf_radius_for_terms(alpha: float, zeta: float, k: int, eps: float) -> float:
    """Distance from zeta beyond which the k-term tail series is eps-accurate.

    Evaluated in log space: the gamma ratio overflows double precision for
    alpha*k beyond ~170.
    """
    m = k + 1
    am = alpha * m
    if am <= 1.0:
        raise PlanError(f"tail radius needs alpha*(k+1) > 1, got {am}")
    log_b = (
        math.log(alpha / (math.pi * eps))
        + 0.5 * m * math.log1p(zeta * zeta)
        + float(gammaln(am) - gammaln(m))
    ) / (am - 1.0)
    return math.exp(log_b)


def bzero_radius_for_terms(alpha: float, zeta: float, n: int, eps: float) -> float:
    """Distance from zeta inside which the n-term central series is eps-accurate."""
    log_b = (
        math.log(eps * alpha * math.pi)
        + (n + 1.0) / (2.0 * alpha) * math.log1p(zeta * zeta)
        + float(gammaln(n + 1.0) - gammaln((n + 1.0) / alpha))
    ) / n
    return math.exp(log_b)
