"""Fast, accurate evaluation of stable distribution densities, gradients
and distribution functions.

The library combines precomputed generalized Gaussian quadrature rules
(valid over whole boxes of the stability/skewness parameters) with tail
series governed by rigorous truncation bounds.  The offline machinery that
regenerates the rules ships with the package.

Quick start::

    from stabledens import make_params, pdf, cdf, grad

    p = make_params(alpha=1.5, beta=0.3)
    r = pdf(2.0, p)
    r.value, r.method, r.est_abs_err
"""

from .config import DispatchConfig
from .dispatch import EvalResult, Method, cdf, grad, pdf, pdf_batch
from .exceptions import (
    BuilderError,
    DispatchError,
    DomainError,
    NumericError,
    PlanError,
    RuleFileError,
    StableDensError,
    UnsupportedRegionError,
)
from .params import (
    LocationScale,
    RegionTag,
    StableParams,
    classify_region,
    location_a_to_m,
    location_m_to_a,
    make_params,
    reflect,
)
from .quadrature import (
    QuadratureRule,
    RuleSet,
    RuleTarget,
    apply_rule,
    default_rules,
    load_rules,
    save_rules,
    truncation,
)

__version__ = "0.1.0"

__all__ = [
    "DispatchConfig",
    "EvalResult",
    "Method",
    "LocationScale",
    "RegionTag",
    "StableParams",
    "QuadratureRule",
    "RuleSet",
    "RuleTarget",
    "StableDensError",
    "DomainError",
    "UnsupportedRegionError",
    "NumericError",
    "PlanError",
    "RuleFileError",
    "DispatchError",
    "BuilderError",
    "make_params",
    "classify_region",
    "reflect",
    "location_a_to_m",
    "location_m_to_a",
    "pdf",
    "cdf",
    "grad",
    "pdf_batch",
    "apply_rule",
    "default_rules",
    "load_rules",
    "save_rules",
    "truncation",
    "__version__",
]
