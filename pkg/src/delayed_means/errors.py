"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters, cutoffs, grids or config files."""


class EvaluationError(ValueError):
    """A function produced a non-finite value at a sample node."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""
