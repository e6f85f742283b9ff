"""Validated stable-law parameters, derived quantities and region classification.

All evaluation routines work with the continuous (Zolotarev M) form of the
characteristic function, for which the density is jointly continuous in the
stability index alpha and the skewness beta.  The shift

    zeta(alpha, beta) = -beta * tan(pi*alpha/2)        (alpha != 1)

recenters the argument; x - zeta is the natural shifted coordinate and all
internal evaluation assumes x - zeta >= 0, with negative arguments handled
by the density symmetry f(-x; alpha, beta) = f(x; alpha, -beta).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ._mathutil import binf_radius_for_terms, tan_half_pi_alpha
from .config import DispatchConfig
from .exceptions import DomainError


@dataclass(frozen=True)
class StableParams:
    """A validated (alpha, beta) pair with its derived shift and angle.

    Construct through make_params; the derived fields are trusted
    downstream and never recomputed.
    """

    alpha: float
    beta: float
    zeta: float
    theta0: float

    def negated_beta(self) -> "StableParams":
        return make_params(self.alpha, -self.beta)


@dataclass(frozen=True)
class LocationScale:
    """Location/scale pair; the unit law is (gamma=0, lam=1)."""

    gamma: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        if not (self.lam > 0.0) or not math.isfinite(self.lam):
            raise DomainError(f"scale lam must be positive and finite, got {self.lam}")
        if not math.isfinite(self.gamma):
            raise DomainError(f"location gamma must be finite, got {self.gamma}")


class RegionTag(enum.Enum):
    """Where a shifted request (x - zeta >= 0) lands in parameter space."""

    SYMMETRIC_CENTRAL = "symmetric_central"
    SYMMETRIC_TAIL = "symmetric_tail"
    ASYMMETRIC_LOW_CENTRAL = "asymmetric_low_central"
    ASYMMETRIC_HIGH_CENTRAL = "asymmetric_high_central"
    ASYMMETRIC_TAIL = "asymmetric_tail"
    UNSUPPORTED_GAP = "unsupported_gap"
    UNSUPPORTED_SMALL_ALPHA = "unsupported_small_alpha"


CENTRAL_TAGS = frozenset(
    {
        RegionTag.SYMMETRIC_CENTRAL,
        RegionTag.ASYMMETRIC_LOW_CENTRAL,
        RegionTag.ASYMMETRIC_HIGH_CENTRAL,
    }
)
UNSUPPORTED_TAGS = frozenset(
    {RegionTag.UNSUPPORTED_GAP, RegionTag.UNSUPPORTED_SMALL_ALPHA}
)


def make_params(alpha: float, beta: float) -> StableParams:
    """Validate (alpha, beta) and populate the derived shift and angle.

    For beta = 0 the shift and angle are identically zero for every alpha,
    so the tangent (which has a pole at alpha = 1) is never evaluated.

    Raises
    ------
    DomainError
        If alpha is outside (0, 2] or beta outside [-1, 1].
    """
    alpha = float(alpha)
    beta = float(beta)
    if not (0.0 < alpha <= 2.0) or not math.isfinite(alpha):
        raise DomainError(f"alpha must lie in (0, 2], got {alpha}")
    if not (-1.0 <= beta <= 1.0):
        raise DomainError(f"beta must lie in [-1, 1], got {beta}")
    if beta == 0.0:
        return StableParams(alpha, 0.0, 0.0, 0.0)
    if alpha == 1.0:
        return StableParams(alpha, beta, 0.0, 0.5 * math.pi)
    tau = tan_half_pi_alpha(alpha)
    zeta = -beta * tau
    theta0 = math.atan(beta * tau) / alpha
    return StableParams(alpha, beta, zeta, theta0)


def location_a_to_m(gamma_a: float, params: StableParams) -> float:
    """Location of the canonical (A) form expressed in the continuous (M) form.

    gamma_A = gamma_M - beta*tan(pi*alpha/2); at alpha = 1 the two forms
    coincide and the location passes through unchanged.
    """
    if params.alpha == 1.0:
        return float(gamma_a)
    return float(gamma_a) + params.beta * tan_half_pi_alpha(params.alpha)


def location_m_to_a(gamma_m: float, params: StableParams) -> float:
    """Inverse of location_a_to_m."""
    if params.alpha == 1.0:
        return float(gamma_m)
    return float(gamma_m) - params.beta * tan_half_pi_alpha(params.alpha)


def reflect(x: float, params: StableParams) -> tuple[float, StableParams, bool]:
    """Map a request onto the half-domain x - zeta >= 0.

    Uses f(-x; alpha, beta) = f(x; alpha, -beta): when x - zeta < 0 the
    returned request is (-x, params with beta negated) and satisfies
    x' - zeta' > 0.  Idempotent on its own output.
    """
    if x - params.zeta >= 0.0:
        return float(x), params, False
    return -float(x), params.negated_beta(), True


def central_boundary(params: StableParams, config: DispatchConfig) -> float:
    """Shifted-coordinate radius of the central (quadrature) region.

    Equals the accuracy radius of the tail series with the configured
    number of terms for the matching region band.
    """
    if params.beta == 0.0:
        n_terms = config.n_inf_symmetric
    elif params.alpha <= 0.9:
        n_terms = config.n_inf_asym_low
    else:
        n_terms = config.n_inf_asym_high
    return binf_radius_for_terms(params.alpha, params.zeta, n_terms, config.boundary_eps)


def classify_region(
    x: float, params: StableParams, config: DispatchConfig | None = None
) -> RegionTag:
    """Classify a reflected request (x - zeta >= 0) into its dispatch region.

    Total and deterministic; the boundary point x - zeta = B is assigned to
    the central region (the rules are valid on the closed interval, the
    series bound only beyond it).  Unsupported combinations classify rather
    than raise.
    """
    config = config or DispatchConfig()
    if params.alpha < 0.5:
        return RegionTag.UNSUPPORTED_SMALL_ALPHA
    shifted = x - params.zeta
    if params.beta == 0.0:
        if shifted <= central_boundary(params, config):
            return RegionTag.SYMMETRIC_CENTRAL
        return RegionTag.SYMMETRIC_TAIL
    if 0.9 < params.alpha < 1.1:
        return RegionTag.UNSUPPORTED_GAP
    if shifted <= central_boundary(params, config):
        if params.alpha <= 0.9:
            return RegionTag.ASYMMETRIC_LOW_CENTRAL
        return RegionTag.ASYMMETRIC_HIGH_CENTRAL
    return RegionTag.ASYMMETRIC_TAIL
