"""Exception types shared across the package."""


class SGSwellError(Exception):
    """Base class for solver errors."""


class SingularState(SGSwellError, ArithmeticError):
    """A Galerkin matrix has an eigenvalue too close to zero to invert."""


class NonPositiveHeight(SGSwellError, ArithmeticError):
    """Some stochastic cell carries a water height that is not positive."""


class ConfigError(SGSwellError, ValueError):
    """Invalid or inconsistent run configuration."""


class UnstableRun(SGSwellError, RuntimeError):
    """The time integration produced non-finite or inadmissible values."""
