"""Integrand functions for every integral representation used by the package.

All functions accept a scalar or ndarray first argument and broadcast over
it.  The Fourier-side integrands (density, distribution, gradient) are the
production path; the exponentially-damped angular form is kept for
validation only.

The phase of the Fourier integrand is

    h(t; x, alpha, beta) = (x - zeta) t + zeta t**alpha        (alpha != 1)
    h(t; x, 1, beta)     = x t + (2 beta / pi) t log t

and the integrands decay like exp(-t**alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._mathutil import pow_minus_t, tan_half_pi_alpha
from .exceptions import DomainError, NumericError
from .params import StableParams

_TWO_OVER_PI = 2.0 / math.pi


@dataclass(frozen=True)
class PhaseEval:
    """Phase value and its parameter derivatives at fixed (t, x)."""

    h: np.ndarray | float
    dh_dalpha: np.ndarray | float
    dh_dbeta: np.ndarray | float


def phase(t, x: float, params: StableParams):
    """Phase h of the Fourier integrand; continuous in alpha across 1."""
    t = np.asarray(t, dtype=float)
    alpha, zeta = params.alpha, params.zeta
    if alpha == 1.0:
        out = t * (x + _TWO_OVER_PI * params.beta * np.log(t))
    else:
        out = (x - zeta) * t + zeta * t**alpha
    return out if out.ndim else float(out)


def phase_dalpha(t, x: float, params: StableParams):
    """d h / d alpha at fixed t; at alpha = 1 the limit (beta/pi) t log^2 t."""
    t = np.asarray(t, dtype=float)
    alpha, beta, zeta = params.alpha, params.beta, params.zeta
    if beta == 0.0:
        # zeta and dzeta/dalpha both vanish identically.
        out = np.zeros_like(t)
    elif alpha == 1.0:
        logt = np.log(t)
        out = (beta / math.pi) * t * logt * logt
    else:
        tau = tan_half_pi_alpha(alpha)
        dzeta_dalpha = -0.5 * math.pi * beta * (tau * tau + 1.0)
        out = pow_minus_t(t, alpha) * dzeta_dalpha + t**alpha * np.log(t) * zeta
    return out if out.ndim else float(out)


def phase_dbeta(t, x: float, params: StableParams):
    """d h / d beta at fixed t; at alpha = 1 the limit (2/pi) t log t.

    The product tan(pi*alpha/2) * (t**alpha - t) has a removable
    singularity at alpha = 1; expm1 keeps it accurate on both sides.
    """
    t = np.asarray(t, dtype=float)
    alpha = params.alpha
    if alpha == 1.0:
        out = _TWO_OVER_PI * t * np.log(t)
    else:
        out = -tan_half_pi_alpha(alpha) * pow_minus_t(t, alpha)
    return out if out.ndim else float(out)


def phase_eval(t, x: float, params: StableParams) -> PhaseEval:
    """Bundle h and its alpha/beta derivatives at fixed (t, x)."""
    return PhaseEval(
        phase(t, x, params),
        phase_dalpha(t, x, params),
        phase_dbeta(t, x, params),
    )


def pdf_integrand(t, x: float, params: StableParams):
    """cos(h) exp(-t**alpha); the density is (1/pi) times its integral over t > 0."""
    t = np.asarray(t, dtype=float)
    out = np.cos(phase(t, x, params)) * np.exp(-(t**params.alpha))
    return out if out.ndim else float(out)


def cdf_integrand(t, x: float, params: StableParams):
    """sin(h) exp(-t**alpha) / t, via sin(h)/h * (h/t) for stability at small t.

    h/t = (x - zeta) + zeta t**(alpha-1) in closed form, so the 0/0 at the
    origin never forms; for alpha < 1 and beta != 0 the genuine integrable
    singularity t**(alpha-1) is reproduced faithfully.
    """
    t = np.asarray(t, dtype=float)
    alpha, zeta = params.alpha, params.zeta
    if alpha == 1.0:
        ratio = x + _TWO_OVER_PI * params.beta * np.log(t)
    elif zeta == 0.0:
        ratio = np.full_like(t, x - zeta)
    else:
        ratio = (x - zeta) + zeta * t ** (alpha - 1.0)
    h = ratio * t
    out = np.sinc(h / math.pi) * ratio * np.exp(-(t**alpha))
    return out if out.ndim else float(out)


def grad_integrands(t, x: float, params: StableParams):
    """Integrands of the three partial derivatives of the density.

    Returns (gx, ga, gb) with the sign convention that each partial equals
    (1/pi) times the integral of the corresponding component:

        gx = -t sin(h) e^{-t^a}
        ga = -(sin(h) dh/da + t^a cos(h) log t) e^{-t^a}
        gb = -sin(h) dh/db e^{-t^a}
    """
    t = np.asarray(t, dtype=float)
    alpha = params.alpha
    h = phase(t, x, params)
    sin_h = np.sin(h)
    damp = np.exp(-(t**alpha))
    gx = -t * sin_h * damp
    ga = -(sin_h * phase_dalpha(t, x, params) + t**alpha * np.cos(h) * np.log(t)) * damp
    gb = -sin_h * phase_dbeta(t, x, params) * damp
    if t.ndim:
        return gx, ga, gb
    return float(gx), float(ga), float(gb)


# ---------------------------------------------------------------------------
# Exponentially-damped angular (zero-phase contour) form.  Validation only:
# the production path never evaluates it.


def _check_angular_domain(x: float, params: StableParams) -> None:
    if params.alpha == 1.0 and params.beta == 0.0:
        raise DomainError("angular form undefined at alpha = 1 with beta = 0")
    if x - params.zeta <= 0.0:
        raise DomainError(f"angular form requires x - zeta > 0, got {x - params.zeta}")


def stationary_log_g(theta, x: float, params: StableParams):
    """log g(theta); g is positive and strictly monotone on (-theta0, pi/2)."""
    theta = np.asarray(theta, dtype=float)
    alpha, beta, zeta, theta0 = params.alpha, params.beta, params.zeta, params.theta0
    if np.any(theta <= -theta0) or np.any(theta >= 0.5 * math.pi):
        raise DomainError("theta outside the open interval (-theta0, pi/2)")
    with np.errstate(divide="ignore"):
        if alpha == 1.0:
            half_pi_plus = 0.5 * math.pi + beta * theta
            log_v = (
                math.log(_TWO_OVER_PI)
                + np.log(half_pi_plus)
                - np.log(np.cos(theta))
                + half_pi_plus * np.tan(theta) / beta
            )
            out = -0.5 * math.pi * x / beta + log_v
        else:
            a1 = alpha / (alpha - 1.0)
            log_v = (
                math.log(math.cos(alpha * theta0)) / (alpha - 1.0)
                + a1 * (np.log(np.cos(theta)) - np.log(np.sin(alpha * (theta0 + theta))))
                + np.log(np.cos(alpha * theta0 + (alpha - 1.0) * theta))
                - np.log(np.cos(theta))
            )
            out = a1 * math.log(x - zeta) + log_v
    return out if out.ndim else float(out)


def stationary_g(theta, x: float, params: StableParams):
    """g(theta) for the damped angular integrand g * exp(-g).

    May overflow to inf approaching the endpoint where g diverges; use
    stationary_log_g for overflow-free work.
    """
    _check_angular_domain(x, params)
    lg = stationary_log_g(theta, x, params)
    with np.errstate(over="ignore"):
        out = np.exp(lg)
    return out


def angular_integrand(theta, x: float, params: StableParams):
    """g e^{-g}, evaluated as exp(log g - g) to survive g -> inf."""
    lg = np.asarray(stationary_log_g(theta, x, params), dtype=float)
    with np.errstate(over="ignore"):
        g = np.exp(lg)
    out = np.where(lg > 700.0, 0.0, np.exp(np.where(g < np.inf, lg - g, -np.inf)))
    return out if out.ndim else float(out)


def _solve_g_target(eps: float) -> float:
    """The root u > 1 of u e^{-u} = eps (for eps ~ 1e-16 this is ~40)."""
    u = -math.log(eps)
    for _ in range(60):
        f = math.log(u) - u - math.log(eps)
        df = 1.0 / u - 1.0
        step = f / df
        u -= step
        if abs(step) < 1e-14 * u:
            return u
    raise NumericError(f"g-target solve did not converge for eps={eps}")


def _ends(params: StableParams) -> tuple[float, float]:
    return -params.theta0, 0.5 * math.pi


def _is_increasing(x: float, params: StableParams) -> bool:
    lo, hi = _ends(params)
    width = hi - lo
    a = stationary_log_g(lo + 1e-9 * width, x, params)
    b = stationary_log_g(hi - 1e-9 * width, x, params)
    return b > a


def theta_epsilon(x: float, params: StableParams, eps: float) -> float:
    """Angle at which g e^{-g} drops below eps on its exponential side.

    The retained interval is the one that excludes the endpoint where g
    diverges: [-theta0, theta_eps] when g increases toward pi/2 (alpha <= 1),
    [theta_eps, pi/2] when it decreases (alpha > 1).  Truncating there
    changes the angular integral by less than eps times the interval width.
    """
    _check_angular_domain(x, params)
    if not (0.0 < eps < math.exp(-1.0)):
        raise DomainError(f"eps must lie in (0, 1/e), got {eps}")
    g_target = _solve_g_target(eps)
    log_target = math.log(g_target)
    lo, hi = _ends(params)
    width = hi - lo
    increasing = _is_increasing(x, params)

    # Bracket the crossing of log g = log g_target on the divergent side.
    margin = 1e-13 * width
    if increasing:
        a, b = lo + margin, hi - margin
    else:
        a, b = hi - margin, lo + margin
    fa = stationary_log_g(a, x, params) - log_target
    fb = stationary_log_g(b, x, params) - log_target
    if fa >= 0.0:
        # g already above target everywhere: the whole interval carries
        # less than eps of integrand; degenerate truncation at the start.
        return a
    if fb <= 0.0:
        raise NumericError(
            f"no g={g_target:.3f} crossing found for x={x}, alpha={params.alpha}, "
            f"beta={params.beta}; log g at ends: {fa + log_target:.3e}, "
            f"{fb + log_target:.3e}"
        )
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = stationary_log_g(mid, x, params) - log_target
        if fm < 0.0:
            a = mid
        else:
            b = mid
        if abs(b - a) < 1e-15 * width:
            break
    return 0.5 * (a + b)


def truncated_interval(x: float, params: StableParams, eps: float) -> tuple[float, float]:
    """Integration interval for the angular form after eps-truncation."""
    te = theta_epsilon(x, params, eps)
    lo, hi = _ends(params)
    if _is_increasing(x, params):
        return lo, te
    return te, hi
