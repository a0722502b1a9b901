"""Exception types shared across the package.

The CLI maps these onto exit codes, so library code should prefer them
over bare exceptions when the failure class is meaningful:
invalid configuration/arguments vs. numerical domain violations vs.
deliberately refused oversized computations.
"""


class ConfigurationError(ValueError):
    """An experiment or distribution spec is self-inconsistent."""


class NumericalDomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class DegenerateInputError(NumericalDomainError):
    """Input is rank-deficient or otherwise collapses the computation."""


class ResourceError(RuntimeError):
    """Request exceeds a declared size cap (e.g. exhaustive enumeration)."""
