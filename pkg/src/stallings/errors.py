"""Exception types shared across the package."""


class StallingsError(Exception):
    """Base class for errors raised by this package."""


class WordParseError(StallingsError, ValueError):
    """A word or generator tuple could not be parsed."""


class AutomatonParseError(StallingsError, ValueError):
    """An automaton description in the line-based text format is invalid."""


class AlphabetMismatch(StallingsError, ValueError):
    """Two values built over different alphabets were combined."""


class NotContained(StallingsError):
    """A word or subgroup is not contained in the reference subgroup."""


class NotAFreeFactor(StallingsError):
    """A complement was requested for a subgroup that is not a free factor."""


class BudgetExceeded(StallingsError):
    """A brute-force oracle ran out of budget; the answer is inconclusive.

    Deliberately not a verdict: callers must treat this as "unknown",
    never as False.
    """
