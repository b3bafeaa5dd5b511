"""Exception types shared across the package."""


class InvalidCurveError(ValueError):
    """An operation required a valid curve and got something else."""


class InvariantViolationError(RuntimeError):
    """Internal consistency check failed; indicates a malformed curve."""


class ResourceCapError(RuntimeError):
    """A configured resource cap (nodes, points, cells) was exceeded."""
