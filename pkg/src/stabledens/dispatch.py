"""Public evaluation API: density, distribution function and gradient.

Every request is reflected onto the half-domain x - zeta >= 0, classified
into a region, and served by the matching fixed quadrature rule (central
region) or tail series (beyond the series accuracy radius).  Parameter
derivatives in the tail, which have no convenient series, fall back to
fourth-order finite differences of the tail series.

Location/scale laws are handled purely by argument transformation of the
unit law: density values scale by 1/lam, its x-derivative by 1/lam**2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import series
from .config import DispatchConfig
from .exceptions import UnsupportedRegionError
from .params import (
    CENTRAL_TAGS,
    UNSUPPORTED_TAGS,
    LocationScale,
    RegionTag,
    StableParams,
    central_boundary,
    classify_region,
    make_params,
    reflect,
)
from .quadrature import (
    RuleSet,
    RuleTarget,
    apply_pdf_rule_batch,
    apply_rule,
    default_rules,
)

UNIT = LocationScale(0.0, 1.0)

#: Conservative error estimate for finite-difference gradient components.
FD_EST_ERR = 1e-6
#: Error estimate carried by the low-stability asymmetric CDF rule, whose
#: integrand singularity caps double-precision rule construction.
ASYM_LOW_CDF_EST_ERR = 1e-7


class Method(enum.Enum):
    QUADRATURE = "quadrature"
    SERIES_INFINITY = "series_infinity"
    FINITE_DIFFERENCE = "finite_difference"
    ORACLE = "oracle"


@dataclass(frozen=True)
class EvalResult:
    """A value with the method that produced it and its accuracy estimate."""

    value: float
    method: Method | None
    est_abs_err: float
    region: RegionTag

    @property
    def supported(self) -> bool:
        return self.method is not None


def _setup(config: DispatchConfig | None) -> tuple[DispatchConfig, RuleSet]:
    config = config or DispatchConfig()
    rules = config.rules if config.rules is not None else default_rules()
    return config, rules


def _unsupported(tag: RegionTag) -> EvalResult:
    return EvalResult(math.nan, None, math.inf, tag)


def _tail_n_inf(params: StableParams, tag: RegionTag, config: DispatchConfig) -> int:
    if params.beta == 0.0:
        return config.n_inf_symmetric
    if params.alpha <= 0.9:
        return config.n_inf_asym_low
    return config.n_inf_asym_high


def pdf(
    x: float,
    params: StableParams,
    loc_scale: LocationScale = UNIT,
    config: DispatchConfig | None = None,
) -> EvalResult:
    """Density of the stable law at x.

    Raises
    ------
    UnsupportedRegionError
        For alpha < 0.5, or beta != 0 with alpha in (0.9, 1.1).
    """
    config, rules = _setup(config)
    u = (x - loc_scale.gamma) / loc_scale.lam
    xr, pr, _ = reflect(u, params)
    tag = classify_region(xr, pr, config)
    if tag in UNSUPPORTED_TAGS:
        raise UnsupportedRegionError(tag)
    if tag in CENTRAL_TAGS:
        rule = rules.find(RuleTarget.PDF, xr, pr)
        value = apply_rule(rule, xr, pr)
        method = Method.QUADRATURE
    else:
        n, _bound = series.choose_tail_terms(
            xr, pr, 0.5 * config.eps_target, series.SeriesKind.AT_INFINITY
        )
        value = series.series_at_infinity(xr, pr, n)
        method = Method.SERIES_INFINITY
    return EvalResult(value / loc_scale.lam, method, config.eps_target, tag)


def cdf(
    x: float,
    params: StableParams,
    loc_scale: LocationScale = UNIT,
    config: DispatchConfig | None = None,
) -> EvalResult:
    """Distribution function of the stable law at x.

    Reflection uses F(x; alpha, beta) = 1 - F(-x; alpha, -beta); the upper
    tail mass comes from the term-wise integrated tail series.
    """
    config, rules = _setup(config)
    u = (x - loc_scale.gamma) / loc_scale.lam
    xr, pr, reflected = reflect(u, params)
    tag = classify_region(xr, pr, config)
    if tag in UNSUPPORTED_TAGS:
        raise UnsupportedRegionError(tag)
    est = config.eps_target
    if tag in CENTRAL_TAGS:
        rule = rules.find(RuleTarget.CDF, xr, pr)
        value = apply_rule(rule, xr, pr)
        method = Method.QUADRATURE
        if tag is RegionTag.ASYMMETRIC_LOW_CENTRAL:
            est = max(est, ASYM_LOW_CDF_EST_ERR)
    else:
        n = _tail_n_inf(pr, tag, config)
        value = 1.0 - series.cdf_tail_from_series(xr, pr, n)
        method = Method.SERIES_INFINITY
    if reflected:
        value = 1.0 - value
    return EvalResult(value, method, est, tag)


def _grad_unit(
    xr: float, pr: StableParams, tag: RegionTag, config: DispatchConfig, rules: RuleSet
) -> tuple[EvalResult, EvalResult, EvalResult]:
    """Partials of the unit density at a reflected request."""
    if tag in CENTRAL_TAGS:
        vals = []
        for target in (RuleTarget.DX_PDF, RuleTarget.DA_PDF, RuleTarget.DB_PDF):
            rule = rules.find(target, xr, pr)
            vals.append(
                EvalResult(
                    apply_rule(rule, xr, pr), Method.QUADRATURE, config.eps_target, tag
                )
            )
        return vals[0], vals[1], vals[2]

    # Tail: series for the x-derivative, finite differences of the tail
    # series in the parameter for the other two.
    n_dx, _ = series.choose_tail_terms(
        xr, pr, 0.5 * config.eps_target, series.SeriesKind.DX_AT_INFINITY
    )
    dx = EvalResult(
        series.dx_series_at_infinity(xr, pr, n_dx),
        Method.SERIES_INFINITY,
        config.eps_target,
        tag,
    )
    n_fd = _tail_n_inf(pr, tag, config)

    def f_of_alpha(a: float) -> float:
        return series.series_at_infinity(xr, make_params(a, pr.beta), n_fd)

    da = EvalResult(
        series.fd4(f_of_alpha, pr.alpha, config.fd_step_alpha, lo=0.5, hi=2.0),
        Method.FINITE_DIFFERENCE,
        FD_EST_ERR,
        tag,
    )
    if pr.alpha == 1.0:
        # The tail series in beta is undefined across alpha = 1; there is
        # no skewness derivative path here.
        db = _unsupported(tag)
    else:

        def f_of_beta(b: float) -> float:
            return series.series_at_infinity(xr, make_params(pr.alpha, b), n_fd)

        db = EvalResult(
            series.fd4(f_of_beta, pr.beta, config.fd_step_beta, lo=-1.0, hi=1.0),
            Method.FINITE_DIFFERENCE,
            FD_EST_ERR,
            tag,
        )
    return dx, da, db


def grad(
    x: float,
    params: StableParams,
    loc_scale: LocationScale = UNIT,
    config: DispatchConfig | None = None,
) -> tuple[EvalResult, EvalResult, EvalResult]:
    """Partial derivatives (d/dx, d/dalpha, d/dbeta) of the density at x.

    Under reflection the x- and beta-derivatives change sign while the
    alpha-derivative passes through.  At alpha = 1 exactly, the skewness
    derivative in the tail region is reported as unavailable (value nan,
    method None): the tail series does not extend across alpha = 1 for
    beta != 0.
    """
    config, rules = _setup(config)
    u = (x - loc_scale.gamma) / loc_scale.lam
    xr, pr, reflected = reflect(u, params)
    tag = classify_region(xr, pr, config)
    if tag in UNSUPPORTED_TAGS:
        raise UnsupportedRegionError(tag)
    dx, da, db = _grad_unit(xr, pr, tag, config, rules)
    sign = -1.0 if reflected else 1.0
    lam = loc_scale.lam
    dx = EvalResult(sign * dx.value / lam**2, dx.method, dx.est_abs_err / lam**2, tag)
    da = EvalResult(da.value / lam, da.method, da.est_abs_err / lam, tag)
    db = EvalResult(sign * db.value / lam, db.method, db.est_abs_err / lam, tag)
    return dx, da, db


# ---------------------------------------------------------------------------
# Batch evaluation.


def _tail_series_batch(xs: np.ndarray, pr: StableParams, n: int) -> np.ndarray:
    """Vectorized tail series over many shifted arguments (all > 0)."""
    alpha, zeta = pr.alpha, pr.zeta
    k = np.arange(1, n + 1, dtype=float)
    log_c = (
        gammaln(alpha * k)
        - gammaln(k)
        + 0.5 * k * math.log1p(zeta * zeta)
        + math.log(alpha / math.pi)
    )
    signs = np.where(np.arange(1, n + 1) % 2 == 1, 1.0, -1.0)
    coeff = signs * np.sin((0.5 * math.pi * alpha - math.atan(zeta)) * k)
    shifted = xs - zeta
    with np.errstate(under="ignore"):
        powers = np.exp(log_c[None, :] - np.log(shifted)[:, None] * (alpha * k + 1.0)[None, :])
    return powers @ coeff


def pdf_batch(
    xs,
    params: StableParams,
    loc_scale: LocationScale = UNIT,
    config: DispatchConfig | None = None,
) -> list[EvalResult]:
    """Density at many points for one parameter pair.

    Semantically identical to mapping pdf over xs, but shares the
    per-parameter setup (reflection targets, rule lookup, boundary radius,
    series coefficients) and evaluates the quadrature as one matrix
    product.  Unsupported points are reported per point (value nan) and
    never abort the batch.
    """
    config, rules = _setup(config)
    xs = np.asarray(xs, dtype=float)
    us = (xs - loc_scale.gamma) / loc_scale.lam
    out: list[EvalResult | None] = [None] * len(us)

    if params.alpha < 0.5 or (params.beta != 0.0 and 0.9 < params.alpha < 1.1):
        tag = (
            RegionTag.UNSUPPORTED_SMALL_ALPHA
            if params.alpha < 0.5
            else RegionTag.UNSUPPORTED_GAP
        )
        return [_unsupported(tag) for _ in us]

    reflected_mask = (us - params.zeta) < 0.0
    for refl in (False, True):
        sel = np.nonzero(reflected_mask == refl)[0]
        if sel.size == 0:
            continue
        pr = params.negated_beta() if refl else params
        ur = -us[sel] if refl else us[sel]
        shifted = ur - pr.zeta
        # One classification serves the group: the boundary radius is a
        # function of (alpha, beta) only.
        central_tag = classify_region(pr.zeta, pr, config)
        boundary = central_boundary(pr, config)
        central = shifted <= boundary
        tail_tag = (
            RegionTag.SYMMETRIC_TAIL if pr.beta == 0.0 else RegionTag.ASYMMETRIC_TAIL
        )
        if central.any():
            rule = rules.find(RuleTarget.PDF, pr.zeta, pr)
            vals = apply_pdf_rule_batch(rule, ur[central], pr) / loc_scale.lam
            for j, v in zip(sel[central], vals):
                out[j] = EvalResult(float(v), Method.QUADRATURE, config.eps_target, central_tag)
        if (~central).any():
            n = _tail_n_inf(pr, tail_tag, config)
            vals = _tail_series_batch(ur[~central], pr, n) / loc_scale.lam
            for j, v in zip(sel[~central], vals):
                out[j] = EvalResult(
                    float(v), Method.SERIES_INFINITY, config.eps_target, tail_tag
                )
    return out  # type: ignore[return-value]
