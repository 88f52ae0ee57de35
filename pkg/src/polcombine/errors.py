"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid scenario configuration or CLI usage."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class NumericalDomainError(ArithmeticError):
    """A numerical precondition failed (non-PSD spectrum, singular system)."""
