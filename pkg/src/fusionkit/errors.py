"""Exception taxonomy shared across the package."""


class FusionkitError(Exception):
    pass


class DomainError(FusionkitError, ValueError):
    """An argument lies outside the operation's domain."""


class ValidationError(FusionkitError, ValueError):
    """Structured input (table, JSON, contract) failed validation."""


class ResourceError(FusionkitError, RuntimeError):
    """A configured resource budget was exceeded."""


class UnsupportedFieldError(DomainError):
    """The ground field lacks a root required by the operation."""
