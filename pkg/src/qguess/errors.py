"""Exception hierarchy shared by all modules.

Every domain error derives from :class:`QGuessError`, itself a ``ValueError``,
so callers can catch either. The CLI maps these to exit status 3.
"""


class QGuessError(ValueError):
    """Base class for domain errors."""


class NotHermitian(QGuessError):
    pass


class NotPsd(QGuessError):
    pass


class DimMismatch(QGuessError):
    pass


class InvalidState(QGuessError):
    pass


class InvalidPovm(QGuessError):
    pass


class InvalidInstance(QGuessError):
    pass


class InvalidDistribution(QGuessError):
    pass


class InvalidWeights(QGuessError):
    pass


class NoSolution(QGuessError):
    pass


class MarginalMismatch(QGuessError):
    pass


class RankDeficient(QGuessError):
    pass


class InvalidConfig(QGuessError):
    pass


class OddNUnsupported(QGuessError):
    pass


class OutOfRange(QGuessError):
    pass


class InvalidP(QGuessError):
    pass


class InvalidMeasurement(QGuessError):
    pass
