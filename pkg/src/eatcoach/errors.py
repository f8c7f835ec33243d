"""Exception hierarchy shared by all service modules."""


class EatcoachError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(EatcoachError):
    """Input violates a documented precondition or invariant."""


class NotFoundError(EatcoachError):
    """Referenced record does not exist."""


class AuthorizationError(EatcoachError):
    """Caller is not allowed to touch the referenced record."""


class StorageError(EatcoachError):
    """Persistence layer failure."""


class StoreCorruptionError(StorageError):
    """A persisted record failed its checksum or could not be decoded."""


class TemplateError(EatcoachError):
    """Response template missing or rendered with unbound placeholders."""
