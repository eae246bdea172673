"""Exception types shared across the package."""


class PaleyLabError(Exception):
    """Base class for all domain errors."""


class NotPrime(PaleyLabError):
    pass


class EvenOrTooSmall(PaleyLabError):
    pass


class TooLarge(PaleyLabError):
    pass


class WrongResidueClass(PaleyLabError):
    pass


class OutOfRange(PaleyLabError):
    pass


class ZeroArgument(PaleyLabError):
    pass


class NotSymmetric(PaleyLabError):
    pass


class BudgetExceeded(PaleyLabError):
    pass


class EmptySet(PaleyLabError):
    pass


class LastColumnInSubset(PaleyLabError):
    pass


class SizeWindowViolated(PaleyLabError):
    pass


class EntropyTooHigh(PaleyLabError):
    pass


class PrimeMismatch(PaleyLabError):
    pass


class SupportMismatch(PaleyLabError):
    pass


class BadAlpha(PaleyLabError):
    pass


class TooFewRows(PaleyLabError):
    pass
