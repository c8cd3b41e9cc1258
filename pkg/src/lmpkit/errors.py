"""Exception hierarchy for lmpkit.

Every error raised on purpose by the library derives from :class:`LmpError`,
which is itself a ``ValueError`` so callers validating input can catch either.
"""

from __future__ import annotations


class LmpError(ValueError):
    """Base class of all lmpkit errors."""


class InvalidGeneratorError(LmpError):
    pass


class UnsupportedNestingError(LmpError):
    pass


class NameCollisionError(LmpError):
    pass


class NoWitnessError(LmpError):
    pass


class NotMeasurableError(LmpError):
    pass


class InvalidMeasureError(LmpError):
    pass


class ProfileViolationError(LmpError):
    pass


class MeasurableSetError(LmpError):
    """The abstract set has equal inner and outer mass everywhere."""


class InvalidKernelError(LmpError):
    pass


class ShapeError(LmpError):
    pass


class LabelMismatchError(LmpError):
    pass


class LabelError(LmpError):
    pass


class NotStableError(LmpError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FormulaSyntaxError(LmpError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ThresholdRangeError(LmpError):
    pass


class TooManyRegionsError(LmpError):
    pass


class NoGapError(LmpError):
    pass


class UnsupportedCospanError(LmpError):
    pass


class UnsupportedDropError(LmpError):
    pass
