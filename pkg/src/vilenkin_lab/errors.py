"""Exception types shared across the package."""


class ResolutionError(ValueError):
    """An index or depth exceeds what the working resolution can represent."""


class CapacityError(RuntimeError):
    """A computation would exceed the configured cell budget.

    The message always names the resource that ran out and, where it can be
    computed, the resolution that would be required.
    """
