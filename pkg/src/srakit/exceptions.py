"""Exception hierarchy for srakit.

Every error raised on bad input derives from :class:`SRAError`, which is a
``ValueError`` so callers that only care about "bad value" can catch that.
"""


class SRAError(ValueError):
    """Base class for all srakit input/analysis errors."""


class EmptyInput(SRAError):
    pass


class InvalidInterval(SRAError):
    """An interval is non-finite or not strictly positive."""

    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        msg = f"invalid interval at index {index}"
        if value is not None:
            msg += f": {value!r}"
        super().__init__(msg)


class TooFewPoints(SRAError):
    pass


class DegenerateRange(SRAError):
    """All values identical, so no bin width or normalized coordinate exists."""


class EdgesDoNotCover(SRAError):
    pass


class DivergentRank(SRAError):
    """Rank 1 of the Poisson SRA curve is ln(N/0)."""


class RankOutOfRange(SRAError):
    pass


class InconsistentDeadTime(SRAError):
    pass


class NonPositiveScale(SRAError):
    pass


class DegenerateVariance(SRAError):
    pass


class DegenerateDenominator(SRAError):
    pass


class InsufficientData(SRAError):
    def __init__(self, required, available):
        self.required = required
        self.available = available
        super().__init__(
            f"insufficient data: need at least {required} values, have {available}"
        )


class ParseError(SRAError):
    def __init__(self, line, text=""):
        self.line = line
        super().__init__(f"line {line}: cannot parse {text!r} as a number")


class NonMonotonicTimestamps(SRAError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"timestamps not strictly increasing at index {index}")


class IoError(SRAError, OSError):
    pass
