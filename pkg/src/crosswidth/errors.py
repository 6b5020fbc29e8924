"""Exception types shared across the package."""


class RangeError(ValueError):
    """An argument lies outside the range the algorithm is validated on."""


class NumericError(RuntimeError):
    """A computation lost more accuracy than its contract allows."""


class ModelError(ValueError):
    """A potential model violates the structural assumptions."""
