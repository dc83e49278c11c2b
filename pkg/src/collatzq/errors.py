"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside an operation's mathematical domain."""


class ResourceLimitError(RuntimeError):
    """A computation exceeded its configured cap.

    This is an operational failure (the search space outgrew the budget),
    never a statement about the underlying mathematics.
    """


class CacheError(RuntimeError):
    """The orbit cache file is malformed, or a store conflicts with it."""
