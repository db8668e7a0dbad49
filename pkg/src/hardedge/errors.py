"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NoBracket(RuntimeError):
    """A root finder could not bracket a sign change inside its search interval."""


class ToleranceNotMet(RuntimeError):
    """Adaptive quadrature exhausted its panel budget before reaching tolerance."""


class InsufficientSupport(ValueError):
    """A sampled function does not cover the integration window and declares
    no boundary extension on the missing side."""


class NonMonotoneError(RuntimeError):
    """A sequence that must decrease strictly failed to do so."""


class ConfigError(ValueError):
    """A run configuration file or flag set is malformed."""
