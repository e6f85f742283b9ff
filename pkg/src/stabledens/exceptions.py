"""Exception hierarchy shared across the package."""

from __future__ import annotations


class StableDensError(Exception):
    """Base class for all package-specific errors."""


class DomainError(StableDensError, ValueError):
    """A parameter or argument lies outside its mathematical domain."""


class UnsupportedRegionError(StableDensError):
    """The request falls in a parameter region the fixed rules do not cover.

    Carries the region tag so callers can distinguish the near-one
    asymmetric gap from the small-stability-index regime.
    """

    def __init__(self, region, message: str | None = None):
        self.region = region
        super().__init__(message or f"unsupported parameter region: {region}")


class NumericError(StableDensError, ArithmeticError):
    """A numerical procedure failed to converge or lost all accuracy."""


class PlanError(StableDensError):
    """A series evaluation plan is infeasible (e.g. gamma-function overflow)."""


class RuleFileError(StableDensError, ValueError):
    """A quadrature rule file is malformed or has the wrong version."""


class DispatchError(StableDensError):
    """A rule was applied outside its region of validity."""


class BuilderError(StableDensError):
    """The quadrature rule builder could not meet its targets."""
