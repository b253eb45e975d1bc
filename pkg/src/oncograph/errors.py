"""Exception types shared across the package."""


class OncoGraphError(Exception):
    """Base class for all package errors."""


class ConfigError(OncoGraphError):
    """Invalid configuration value; carries the offending field path."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class IntegrityError(OncoGraphError):
    """A structural invariant was violated (e.g. state map missing a node)."""


class ProfileUndefinedError(OncoGraphError):
    """Derived-cell profile requested on a graph too small for betweenness."""
