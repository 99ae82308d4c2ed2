"""Exception types shared across the package."""


class UsageError(ValueError):
    """The caller violated a documented precondition (bad operand, bad encoding)."""


class ResourceLimitError(RuntimeError):
    """A requested computation exceeds a configured size cap."""


class ContractViolationError(RuntimeError):
    """Supplied data breaks a relationship the caller asserted to hold."""
