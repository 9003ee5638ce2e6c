"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigError(ValueError):
    """A configuration value is invalid or inconsistent."""


class ProtocolError(RuntimeError):
    """Methods were called out of their required order (e.g. observe before predict)."""


class ResourceError(RuntimeError):
    """A request would blow up exponentially (e.g. enumerating too many paths)."""
