"""Exception hierarchy shared by every qcorr module."""

from __future__ import annotations


class QCorrError(ValueError):
    """Base class for all qcorr errors."""


class NonSquareError(QCorrError):
    pass


class NonHermitianError(QCorrError):
    pass


class DimensionMismatchError(QCorrError):
    pass


class BadRankError(QCorrError):
    pass


class ParamOutOfRangeError(QCorrError):
    pass


class BadDimensionError(QCorrError):
    pass


class WrongDimsError(QCorrError):
    """Raised by two-qubit routines handed a state that is not 2x2."""


class ParseError(QCorrError):
    pass


class InvariantViolation(QCorrError):
    """A matrix failed density-matrix validation.

    ``kind`` is one of ``"hermiticity"``, ``"trace"`` or ``"psd"``.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class NotApplicableError(QCorrError):
    pass


class NotDetectedError(QCorrError):
    pass


class DimensionTooLargeError(QCorrError):
    pass


class NegativeTimeError(QCorrError):
    pass


class BadStepsError(QCorrError):
    pass
