"""Tail and central series for the density, their rigorous truncation bounds,
derivative series, and the finite-difference fallback.

Terms are assembled in log space (the gamma ratios overflow double
precision well inside the useful index range) and summed from smallest to
largest magnitude.  Every bound here is an absolute error bound: for the
degenerate skewness values where whole series vanish identically while the
density decays exponentially, absolute accuracy is all that is guaranteed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._mathutil import (
    binf_radius_for_terms,
    bzero_radius_for_terms,
    lgamma,
)
from .exceptions import DomainError, PlanError
from .params import StableParams


class SeriesKind(enum.Enum):
    AT_ZETA = "at_zeta"
    AT_INFINITY = "at_infinity"
    DX_AT_ZETA = "dx_at_zeta"
    DX_AT_INFINITY = "dx_at_infinity"


@dataclass(frozen=True)
class SeriesPlan:
    """A term count with the accuracy radius it guarantees at a given eps."""

    n_terms: int
    eps: float
    radius: float
    kind: SeriesKind


def _sorted_sum(terms: np.ndarray) -> float:
    if not np.all(np.isfinite(terms)):
        raise PlanError(
            "series term overflow; reduce the number of terms or move x "
            "toward the series' region of validity"
        )
    order = np.argsort(np.abs(terms))
    return float(np.sum(terms[order]))


def _check_tail_args(x: float, params: StableParams) -> float:
    if params.alpha == 1.0 and params.beta != 0.0:
        raise DomainError("tail series undefined at alpha = 1 with beta != 0")
    shifted = x - params.zeta
    if shifted <= 0.0:
        raise DomainError(f"tail series requires x - zeta > 0, got {shifted}")
    return shifted


# ---------------------------------------------------------------------------
# Series centered at x = zeta.


def series_at_zeta(x: float, params: StableParams, n: int) -> float:
    """Sum of the first n terms (k = 0..n-1) of the expansion around zeta."""
    if params.alpha == 1.0:
        raise DomainError("central series undefined at alpha = 1")
    if n < 1:
        raise DomainError("need at least one term")
    alpha, zeta = params.alpha, params.zeta
    dx = x - params.zeta
    k = np.arange(n, dtype=float)
    angle = (0.5 * math.pi + math.atan(zeta) / alpha) * (k + 1.0)
    log_mag = (
        lgamma((k + 1.0) / alpha)
        - lgamma(k + 1.0)
        - (k + 1.0) / (2.0 * alpha) * math.log1p(zeta * zeta)
    )
    if dx == 0.0:
        terms = np.where(k == 0, np.exp(log_mag) * np.sin(angle), 0.0)
    else:
        terms = np.exp(log_mag + k * math.log(abs(dx))) * np.sin(angle) * np.sign(dx) ** k
    return _sorted_sum(terms) / (alpha * math.pi)


def series_bound_at_zeta(x: float, params: StableParams, n: int) -> float:
    """Rigorous bound on |f - series_at_zeta(x, params, n)|."""
    alpha, zeta = params.alpha, params.zeta
    dx = abs(x - zeta)
    if dx == 0.0:
        return 0.0 if n >= 1 else math.inf
    log_b = (
        -math.log(alpha * math.pi)
        + lgamma((n + 1.0) / alpha)
        - lgamma(n + 1.0)
        - (n + 1.0) / (2.0 * alpha) * math.log1p(zeta * zeta)
        + n * math.log(dx)
    )
    return float(np.exp(log_b))


def radius_at_zeta(params: StableParams, n: int, eps: float) -> float:
    """|x - zeta| radius inside which the n-term central series is eps-accurate."""
    if params.alpha == 1.0:
        raise DomainError("central series undefined at alpha = 1")
    if n < 1:
        raise DomainError("need at least one term")
    return bzero_radius_for_terms(params.alpha, params.zeta, n, eps)


def dx_series_at_zeta(x: float, params: StableParams, n: int) -> float:
    """x-derivative of the central expansion, differentiated term by term."""
    if params.alpha == 1.0:
        raise DomainError("central series undefined at alpha = 1")
    if n < 1:
        raise DomainError("need at least one term")
    alpha, zeta = params.alpha, params.zeta
    dx = x - zeta
    k = np.arange(n, dtype=float)
    angle = (0.5 * math.pi + math.atan(zeta) / alpha) * (k + 2.0)
    log_mag = (
        lgamma((k + 2.0) / alpha)
        - lgamma(k + 1.0)
        - (k + 2.0) / (2.0 * alpha) * math.log1p(zeta * zeta)
    )
    if dx == 0.0:
        terms = np.where(k == 0, np.exp(log_mag) * np.sin(angle), 0.0)
    else:
        terms = np.exp(log_mag + k * math.log(abs(dx))) * np.sin(angle) * np.sign(dx) ** k
    return _sorted_sum(terms) / (alpha * math.pi)


def dx_radius_at_zeta(params: StableParams, n: int, eps: float) -> float:
    """Accuracy radius of the n-term derivative series around zeta."""
    if params.alpha == 1.0:
        raise DomainError("central series undefined at alpha = 1")
    alpha, zeta = params.alpha, params.zeta
    log_b = (
        math.log(eps * alpha * math.pi)
        + (n + 2.0) / (2.0 * alpha) * math.log1p(zeta * zeta)
        + float(lgamma(n + 1.0) - lgamma((n + 2.0) / alpha))
    ) / n
    return math.exp(log_b)


# ---------------------------------------------------------------------------
# Series at infinity (Pareto-type tail).


def _tail_angle(params: StableParams) -> float:
    return 0.5 * math.pi * params.alpha - math.atan(params.zeta)


def series_at_infinity(x: float, params: StableParams, n: int) -> float:
    """Sum of the first n tail terms.

    Defined for alpha != 1; additionally valid at alpha = 1 when beta = 0,
    where it reduces to the convergent Cauchy tail expansion.
    """
    shifted = _check_tail_args(x, params)
    if n < 1:
        raise DomainError("need at least one term")
    alpha, zeta = params.alpha, params.zeta
    k = np.arange(1, n + 1, dtype=float)
    log_mag = (
        lgamma(alpha * k)
        - lgamma(k)
        + 0.5 * k * math.log1p(zeta * zeta)
        - (alpha * k + 1.0) * math.log(shifted)
    )
    signs = np.where(np.arange(1, n + 1) % 2 == 1, 1.0, -1.0)
    with np.errstate(under="ignore"):
        terms = np.exp(log_mag) * np.sin(_tail_angle(params) * k) * signs
    return _sorted_sum(terms) * alpha / math.pi


def series_bound_at_infinity(x: float, params: StableParams, n: int) -> float:
    """Rigorous bound on |f - series_at_infinity(x, params, n)|."""
    shifted = _check_tail_args(x, params)
    alpha, zeta = params.alpha, params.zeta
    m = n + 1.0
    log_b = (
        math.log(alpha / math.pi)
        + lgamma(alpha * m)
        - lgamma(m)
        + 0.5 * m * math.log1p(zeta * zeta)
        - (alpha * m + 1.0) * math.log(shifted)
    )
    return float(np.exp(log_b))


def radius_at_infinity(params: StableParams, n: int, eps: float) -> float:
    """|x - zeta| radius beyond which the (n-1)-term tail series is eps-accurate."""
    if params.alpha == 1.0 and params.beta != 0.0:
        raise DomainError("tail series undefined at alpha = 1 with beta != 0")
    if n < 2:
        raise DomainError("radius index must be at least 2")
    return binf_radius_for_terms(params.alpha, params.zeta, n - 1, eps)


def dx_series_at_infinity(x: float, params: StableParams, n: int) -> float:
    """x-derivative of the tail series, differentiated term by term."""
    shifted = _check_tail_args(x, params)
    if n < 1:
        raise DomainError("need at least one term")
    alpha, zeta = params.alpha, params.zeta
    k = np.arange(1, n + 1, dtype=float)
    log_mag = (
        np.log(alpha * k + 1.0)
        + lgamma(alpha * k)
        - lgamma(k)
        + 0.5 * k * math.log1p(zeta * zeta)
        - (alpha * k + 2.0) * math.log(shifted)
    )
    signs = np.where(np.arange(1, n + 1) % 2 == 1, -1.0, 1.0)
    with np.errstate(under="ignore"):
        terms = np.exp(log_mag) * np.sin(_tail_angle(params) * k) * signs
    return _sorted_sum(terms) * alpha / math.pi


def dx_series_bound_at_infinity(x: float, params: StableParams, n: int) -> float:
    """Bound on |df/dx - dx_series_at_infinity(x, params, n)|."""
    shifted = _check_tail_args(x, params)
    alpha, zeta = params.alpha, params.zeta
    m = n + 1.0
    log_b = (
        math.log(alpha / math.pi)
        + math.log(alpha * m + 1.0)
        + lgamma(alpha * m)
        - lgamma(m)
        + 0.5 * m * math.log1p(zeta * zeta)
        - (alpha * m + 2.0) * math.log(shifted)
    )
    return float(np.exp(log_b))


def dx_radius_at_infinity(params: StableParams, n: int, eps: float) -> float:
    """Accuracy radius of the (n-1)-term tail derivative series."""
    alpha, zeta = params.alpha, params.zeta
    an = alpha * n
    if an <= 2.0:
        raise PlanError(f"tail derivative radius needs alpha*n > 2, got {an}")
    log_b = (
        math.log(alpha / (math.pi * eps))
        + math.log(an + 1.0)
        + 0.5 * n * math.log1p(zeta * zeta)
        + float(lgamma(an) - lgamma(n))
    ) / (an - 2.0)
    return math.exp(log_b)


def cdf_tail_from_series(x: float, params: StableParams, n: int) -> float:
    """Upper tail mass 1 - F(x) by term-wise integration of the tail series."""
    shifted = _check_tail_args(x, params)
    if n < 1:
        raise DomainError("need at least one term")
    alpha, zeta = params.alpha, params.zeta
    k = np.arange(1, n + 1, dtype=float)
    log_mag = (
        lgamma(alpha * k)
        - np.log(k)
        - lgamma(k)
        + 0.5 * k * math.log1p(zeta * zeta)
        - alpha * k * math.log(shifted)
    )
    signs = np.where(np.arange(1, n + 1) % 2 == 1, 1.0, -1.0)
    with np.errstate(under="ignore"):
        terms = np.exp(log_mag) * np.sin(_tail_angle(params) * k) * signs
    return _sorted_sum(terms) / math.pi


def cdf_tail_bound(x: float, params: StableParams, n: int) -> float:
    """Bound on the n-term tail-mass series, integrated from the density bound."""
    shifted = _check_tail_args(x, params)
    alpha, zeta = params.alpha, params.zeta
    m = n + 1.0
    log_b = (
        -math.log(math.pi)
        - math.log(m)
        + lgamma(alpha * m)
        - lgamma(m)
        + 0.5 * m * math.log1p(zeta * zeta)
        - alpha * m * math.log(shifted)
    )
    return float(np.exp(log_b))


# ---------------------------------------------------------------------------
# Term-count planning for tail evaluation.

_BOUND_FNS = {
    SeriesKind.AT_INFINITY: series_bound_at_infinity,
    SeriesKind.DX_AT_INFINITY: dx_series_bound_at_infinity,
}


def choose_tail_terms(
    x: float,
    params: StableParams,
    eps: float,
    kind: SeriesKind = SeriesKind.AT_INFINITY,
    n_max: int = 128,
) -> tuple[int, float]:
    """Pick the term count minimizing the tail bound at x, capped at n_max.

    Returns (n, bound); stops at the first n whose bound is below eps.
    For alpha > 1 the expansion is asymptotic and more terms eventually
    hurt, so the bound is scanned rather than assumed monotone.
    """
    bound_fn = _BOUND_FNS[kind]
    best_n, best_bound = 1, math.inf
    for n in range(1, n_max + 1):
        b = bound_fn(x, params, n)
        if b < best_bound:
            best_n, best_bound = n, b
            if b <= eps:
                break
        elif b > 10.0 * best_bound and best_bound < math.inf:
            break
    return best_n, best_bound


def plan_series(
    params: StableParams, kind: SeriesKind, n: int, eps: float
) -> SeriesPlan:
    """Bundle a term count with the accuracy radius it guarantees."""
    if kind is SeriesKind.AT_ZETA:
        radius = radius_at_zeta(params, n, eps)
    elif kind is SeriesKind.DX_AT_ZETA:
        radius = dx_radius_at_zeta(params, n, eps)
    elif kind is SeriesKind.AT_INFINITY:
        radius = radius_at_infinity(params, n + 1, eps)
    else:
        radius = dx_radius_at_infinity(params, n + 1, eps)
    return SeriesPlan(n_terms=n, eps=eps, radius=radius, kind=kind)


# ---------------------------------------------------------------------------
# Fourth-order finite differences for the parameter derivatives that have no
# convenient series.


def fd4(fn, p: float, h: float, lo: float = -math.inf, hi: float = math.inf) -> float:
    """Fourth-order derivative estimate of fn at p with step h.

    Uses the centered five-point stencil when it fits in [lo, hi]; when the
    stencil would leave the domain the step is halved once, and failing
    that a one-sided fourth-order stencil (with the halved step) is used on
    whichever side has room.
    """
    if h <= 0.0:
        raise DomainError(f"step must be positive, got {h}")
    for hh in (h, 0.5 * h):
        if p - 2.0 * hh >= lo and p + 2.0 * hh <= hi:
            return (
                -fn(p + 2.0 * hh)
                + 8.0 * fn(p + hh)
                - 8.0 * fn(p - hh)
                + fn(p - 2.0 * hh)
            ) / (12.0 * hh)
    hh = 0.5 * h
    if p + 4.0 * hh <= hi and p >= lo:
        return (
            -25.0 * fn(p)
            + 48.0 * fn(p + hh)
            - 36.0 * fn(p + 2.0 * hh)
            + 16.0 * fn(p + 3.0 * hh)
            - 3.0 * fn(p + 4.0 * hh)
        ) / (12.0 * hh)
    if p - 4.0 * hh >= lo and p <= hi:
        return (
            25.0 * fn(p)
            - 48.0 * fn(p - hh)
            + 36.0 * fn(p - 2.0 * hh)
            - 16.0 * fn(p - 3.0 * hh)
            + 3.0 * fn(p - 4.0 * hh)
        ) / (12.0 * hh)
    raise DomainError(
        f"no fourth-order stencil at p={p} with step {h} fits inside [{lo}, {hi}]"
    )
