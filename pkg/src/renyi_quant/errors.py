"""Exception types shared across the package."""


class RenyiQuantError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(RenyiQuantError):
    """Invalid or unreadable experiment configuration."""


class DomainError(RenyiQuantError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NonConvergenceError(RenyiQuantError):
    """Adaptive quadrature exhausted its subdivision budget."""


class InfiniteIntegralError(RenyiQuantError):
    """An integral or moment diverges (non-convergent tail quadrature)."""


class EmptyConditioningError(RenyiQuantError):
    """Conditioning on a set of zero probability."""


class DegenerateCellError(RenyiQuantError):
    """A quantizer cell has zero probability where positive mass is required."""


class HypothesisError(RenyiQuantError):
    """A theorem hypothesis required by an experiment does not hold."""
