"""Reference adaptive integration and the slow trusted evaluators built on it.

These are the baselines the fixed rules are validated against.  They favor
robustness over speed: embedded Gauss-Kronrod panels, bisection splitting,
explicit budgets, and failure always carries the partial result.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import integrands
from .exceptions import DomainError, NumericError, UnsupportedRegionError
from .params import RegionTag, StableParams

# 15-point Kronrod extension of 7-point Gauss on [-1, 1]; the Gauss nodes
# are the odd-indexed Kronrod nodes, so one evaluation set serves both.
_XGK = np.array(
    [
        -0.991455371120812639206854697526329,
        -0.949107912342758524526189684047851,
        -0.864864423359769072789712788640926,
        -0.741531185599394439863864773280788,
        -0.586087235467691130294144838258730,
        -0.405845151377397166906606412076961,
        -0.207784955007898467600689403773245,
        0.0,
        0.207784955007898467600689403773245,
        0.405845151377397166906606412076961,
        0.586087235467691130294144838258730,
        0.741531185599394439863864773280788,
        0.864864423359769072789712788640926,
        0.949107912342758524526189684047851,
        0.991455371120812639206854697526329,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
        0.204432940075298892414161999234649,
        0.190350578064785409913256402421014,
        0.169004726639267902826583426598550,
        0.140653259715525918745189590510238,
        0.104790010322250183839876322541518,
        0.063092092629978553290700663189204,
        0.022935322010529224963732008058970,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
        0.381830050505118944950369775488975,
        0.279705391489276667901467771423780,
        0.129484966168869693270611432679082,
    ]
)
_GAUSS_IDX = np.arange(1, 15, 2)


@dataclass(frozen=True)
class AdaptiveResult:
    """Value of an adaptive integration together with its cost and error estimate."""

    value: float
    est_error: float
    n_evals: int
    n_panels: int


class AdaptiveNonConvergence(NumericError):
    """Budget or recursion-depth exhaustion; carries the partial result."""

    def __init__(self, message: str, partial: AdaptiveResult):
        super().__init__(message)
        self.partial = partial


def _panel(fn, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = np.asarray(fn(mid + half * _XGK), dtype=float)
    k15 = half * float(_WGK @ fx)
    g7 = half * float(_WG @ fx[_GAUSS_IDX])
    # Plain |K15 - G7| can underestimate the K15 error on oscillatory
    # integrands (both rules err together); inflate it against the panel's
    # variation in the standard way, and floor at roundoff scale.
    diff = abs(k15 - g7)
    resabs = half * float(_WGK @ np.abs(fx))
    resasc = half * float(_WGK @ np.abs(fx - k15 / (b - a)))
    err = diff
    if resasc > 0.0 and diff > 0.0:
        err = resasc * min(1.0, (200.0 * diff / resasc) ** 1.5)
    return k15, max(err, 5e-16 * resabs)


def adaptive_integrate(
    fn,
    a: float,
    b: float,
    abs_tol: float,
    max_panels: int = 200_000,
    max_depth: int = 60,
) -> AdaptiveResult:
    """Integrate fn over [a, b] to absolute tolerance abs_tol.

    fn must accept an ndarray of abscissae.  Globally adaptive: the panel
    with the largest embedded 7/15 error estimate is bisected until the
    summed estimate drops below abs_tol, so effort concentrates where the
    integrand is hard instead of being spread by a per-panel quota.

    Raises
    ------
    AdaptiveNonConvergence
        When the panel budget or depth limit is hit; the exception carries
        the partial result accumulated so far.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    k15, e = _panel(fn, a, b)
    n_evals = 15
    heap: list[tuple[float, float, float, float, int]] = [(-e, a, b, k15, 0)]
    err_total = e

    def result() -> AdaptiveResult:
        value = math.fsum(item[3] for item in heap)
        return AdaptiveResult(value, err_total, n_evals, len(heap))

    while err_total > abs_tol:
        neg_e, lo, hi, _val, depth = heapq.heappop(heap)
        if depth >= max_depth:
            heapq.heappush(heap, (neg_e, lo, hi, _val, depth))
            raise AdaptiveNonConvergence(
                f"adaptive integration hit depth limit on [{lo}, {hi}] "
                f"(abs_tol={abs_tol})",
                result(),
            )
        if len(heap) + 2 > max_panels:
            heapq.heappush(heap, (neg_e, lo, hi, _val, depth))
            raise AdaptiveNonConvergence(
                f"adaptive integration exceeded the {max_panels}-panel budget "
                f"(abs_tol={abs_tol})",
                result(),
            )
        mid = 0.5 * (lo + hi)
        k1, e1 = _panel(fn, lo, mid)
        k2, e2 = _panel(fn, mid, hi)
        n_evals += 30
        err_total += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, k1, depth + 1))
        heapq.heappush(heap, (-e2, mid, hi, k2, depth + 1))
    return result()


def _fourier_cutoff(alpha: float, eps: float) -> float:
    return (-math.log(eps)) ** (1.0 / alpha)


def pdf_oracle_fourier(x: float, params: StableParams, tol: float) -> AdaptiveResult:
    """Density by direct adaptive integration of the oscillatory Fourier form."""
    cut = _fourier_cutoff(params.alpha, 0.01 * tol)
    res = adaptive_integrate(
        lambda t: integrands.pdf_integrand(t, x, params), 0.0, cut, abs_tol=tol * math.pi / 2
    )
    return AdaptiveResult(
        res.value / math.pi, res.est_error / math.pi + 0.01 * tol, res.n_evals, res.n_panels
    )


def cdf_oracle(x: float, params: StableParams, tol: float) -> AdaptiveResult:
    """Distribution function via its own Fourier-side integrand."""
    cut = _fourier_cutoff(params.alpha, 0.01 * tol)
    res = adaptive_integrate(
        lambda t: integrands.cdf_integrand(t, x, params), 0.0, cut, abs_tol=tol * math.pi / 2
    )
    return AdaptiveResult(
        0.5 + res.value / math.pi,
        res.est_error / math.pi + 0.01 * tol,
        res.n_evals,
        res.n_panels,
    )


def grad_oracle(
    x: float, params: StableParams, tol: float
) -> tuple[AdaptiveResult, AdaptiveResult, AdaptiveResult]:
    """All three density partials by adaptive integration.

    The x-partial integrand carries an extra factor of t, so its cutoff is
    pushed further out to keep the discarded tail below tol.
    """
    cut = _fourier_cutoff(params.alpha, 1e-4 * 0.01 * tol)
    out = []
    for comp in range(3):

        def fn(t, _c=comp):
            return integrands.grad_integrands(t, x, params)[_c]

        res = adaptive_integrate(fn, 0.0, cut, abs_tol=tol * math.pi / 2)
        out.append(
            AdaptiveResult(
                res.value / math.pi,
                res.est_error / math.pi + 0.01 * tol,
                res.n_evals,
                res.n_panels,
            )
        )
    return out[0], out[1], out[2]


def pdf_oracle_stationary(x: float, params: StableParams, tol: float) -> AdaptiveResult:
    """Density via the damped angular form, split at its peak.

    Mirrors the classical approach: locate the peak g = 1, then integrate
    the two monotone pieces adaptively.  Rejected in the near-one
    asymmetric zone where the integrand spikes beyond what double
    precision panels resolve.
    """
    alpha, beta = params.alpha, params.beta
    if alpha == 1.0:
        raise DomainError("angular oracle not defined at alpha = 1")
    if 0.9 < alpha < 1.1 and beta != 0.0:
        raise UnsupportedRegionError(
            RegionTag.UNSUPPORTED_GAP, "angular oracle rejected for alpha near 1, beta != 0"
        )
    if x - params.zeta <= 0.0:
        raise DomainError("angular oracle requires x - zeta > 0")

    lo = -params.theta0
    hi = 0.5 * math.pi
    width = hi - lo
    margin = 1e-13 * width
    a, b = lo + margin, hi - margin

    # Peak where log g crosses 0; g is globally monotone, direction by alpha.
    fa = integrands.stationary_log_g(a, x, params)
    fb = integrands.stationary_log_g(b, x, params)
    theta_max = None
    if (fa < 0.0) != (fb < 0.0):
        increasing = fb > fa
        xa, xb = a, b
        for _ in range(200):
            mid = 0.5 * (xa + xb)
            fm = integrands.stationary_log_g(mid, x, params)
            if (fm < 0.0) == increasing:
                xa = mid
            else:
                xb = mid
            if abs(xb - xa) < 1e-15 * width:
                break
        theta_max = 0.5 * (xa + xb)

    def fn(theta):
        return integrands.angular_integrand(theta, x, params)

    scale = alpha / (math.pi * abs(alpha - 1.0) * (x - params.zeta))
    inner_tol = tol / scale / 2.0
    if theta_max is None:
        res = adaptive_integrate(fn, a, b, abs_tol=inner_tol)
        return AdaptiveResult(scale * res.value, scale * res.est_error, res.n_evals, res.n_panels)
    left = adaptive_integrate(fn, a, theta_max, abs_tol=0.5 * inner_tol)
    right = adaptive_integrate(fn, theta_max, b, abs_tol=0.5 * inner_tol)
    return AdaptiveResult(
        scale * (left.value + right.value),
        scale * (left.est_error + right.est_error),
        left.n_evals + right.n_evals,
        left.n_panels + right.n_panels,
    )
