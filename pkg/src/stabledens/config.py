"""Evaluation configuration shared by region classification and dispatch."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exceptions import DomainError

#: Number of tail-series terms per region, matched to the node counts of the
#: shipped quadrature rules.  The central/tail boundary is the accuracy
#: radius of the series with this many terms.
DEFAULT_N_INF_SYMMETRIC = 42
DEFAULT_N_INF_ASYM_LOW = 90
DEFAULT_N_INF_ASYM_HIGH = 80

#: Accuracy used for the central/tail boundary radius.  Fixed independently
#: of the runtime accuracy target: the shipped rules were trained on the
#: region delimited by this value, and a larger runtime target only shrinks
#: the central region (keeping requests inside the trained box).
BOUNDARY_EPS = 1e-14


@dataclass(frozen=True)
class DispatchConfig:
    """Knobs for the public evaluation API.

    eps_target is an absolute accuracy; 1e-13 is the practical double
    precision floor for these rules, so smaller requests are rejected.
    """

    eps_target: float = 1e-12
    n_inf_symmetric: int = DEFAULT_N_INF_SYMMETRIC
    n_inf_asym_low: int = DEFAULT_N_INF_ASYM_LOW
    n_inf_asym_high: int = DEFAULT_N_INF_ASYM_HIGH
    boundary_eps: float = BOUNDARY_EPS
    fd_step_alpha: float = 1e-3
    fd_step_beta: float = 1e-3
    rules: object | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.eps_target < 1e-13:
            raise DomainError(
                f"eps_target below the double-precision floor 1e-13: {self.eps_target}"
            )
        for name in ("n_inf_symmetric", "n_inf_asym_low", "n_inf_asym_high"):
            if getattr(self, name) < 2:
                raise DomainError(f"{name} must be at least 2")
