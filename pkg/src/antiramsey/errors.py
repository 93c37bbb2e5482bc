class DomainError(ValueError):
    """Input outside the domain of an operation."""


class ResourceError(RuntimeError):
    """Requested work exceeds a configured cap."""
