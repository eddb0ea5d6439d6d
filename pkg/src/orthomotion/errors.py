"""Typed exceptions shared across the package."""


class OrthomotionError(Exception):
    """Base class for every package-specific error."""


class NonIntegrableRate(OrthomotionError):
    """The rate's integral over (0, t] diverges, so event times cannot be sampled."""


class NoMajorant(OrthomotionError):
    """Thinning could not bracket the rate with a finite constant majorant."""


class DivergentIntegral(OrthomotionError):
    """A requested cumulative integral diverges."""


class DomainError(OrthomotionError):
    """An evaluation point lies outside the law's support or domain."""


class NonConvergent(OrthomotionError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class UnsupportedRate(OrthomotionError):
    """The requested closed form needs a constant rate."""


class UnsupportedVariant(OrthomotionError):
    """The requested law is not defined for this motion variant."""


class GridTooCoarse(OrthomotionError):
    """A stencil grid violates the margin or resolution requirements."""


class NonMonotone(OrthomotionError):
    """Residuals grow under refinement; no convergence order can be fitted."""


class BinningMismatch(OrthomotionError):
    """Binned count vectors are not comparable."""


class ConfigError(OrthomotionError):
    """Invalid harness or CLI configuration."""


class NoRoot(OrthomotionError):
    """A monotone function never reaches the requested level."""
