"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid input: malformed data, indices, files or configuration."""


class ResourceGuardError(RuntimeError):
    """A computation was refused because it exceeds a built-in size guard."""
