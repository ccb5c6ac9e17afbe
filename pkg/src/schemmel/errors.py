"""Exception types shared across the package."""


class ArithmeticOverflow(OverflowError):
    """A value exceeded the exact-integer width allowed for an operation."""


class ResourceLimitError(RuntimeError):
    """A table or scan would exceed its configured size budget."""


class MemoryBudgetError(ResourceLimitError):
    """A sieve request is larger than the configured entry budget."""


class InconclusiveError(RuntimeError):
    """Horizon growth hit the hard cap before every candidate was decided.

    ``undecided`` holds the candidates whose membership could not be settled.
    """

    def __init__(self, message, undecided=(), horizon=None):
        super().__init__(message)
        self.undecided = list(undecided)
        self.horizon = horizon


class InvalidParameters(ValueError):
    """Construction parameters fail one or more hypotheses."""

    def __init__(self, report):
        super().__init__("invalid construction parameters: " + "; ".join(report))
        self.report = list(report)


class PreconditionError(ValueError):
    """Inputs violate the hypotheses of a check (distinct from a False result)."""


class CacheInvalidError(RuntimeError):
    """A sieve cache file failed its header or checksum guard."""
