"""Exception hierarchy.

Two roots matter to callers: :class:`DataError` for problems with the input
series itself and :class:`ModelingError` for estimation/testing failures. The
CLI maps them to exit codes 2 and 3 respectively.
"""


class BoxJenkinsError(Exception):
    """Base class. ``stage`` is filled in by the pipeline driver."""

    stage = None


class DataError(BoxJenkinsError):
    pass


class ModelingError(BoxJenkinsError):
    pass


# --- data problems -----------------------------------------------------------

class NonPositiveValue(DataError, ValueError):
    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"non-positive value {value!r} at index {index}")


class SeriesTooShort(DataError, ValueError):
    pass


class StateMismatch(DataError, ValueError):
    pass


class DegenerateSplit(DataError, ValueError):
    pass


class MissingYear(DataError):
    def __init__(self, year):
        self.year = year
        super().__init__(f"missing observation for year {year}")


class ParseError(DataError):
    def __init__(self, row, message):
        self.row = row
        super().__init__(f"row {row}: {message}")


class LengthMismatch(DataError, ValueError):
    pass


class ZeroActual(DataError, ValueError):
    pass


# --- modeling problems -------------------------------------------------------

class LagOutOfRange(ModelingError, ValueError):
    pass


class ZeroVariance(ModelingError, ValueError):
    pass


class NumericalBreakdown(ModelingError, ArithmeticError):
    pass


class InvalidAlpha(ModelingError, ValueError):
    pass


class SingularDesign(ModelingError, ArithmeticError):
    pass


class UnsupportedKind(ModelingError, ValueError):
    pass


class InvalidParams(ModelingError, ValueError):
    pass


class NonFiniteLikelihood(ModelingError, ArithmeticError):
    pass


class TooFewObservations(ModelingError, ValueError):
    pass


class OptimizerFailed(ModelingError, RuntimeError):
    pass


class HessianSingular(ModelingError, ArithmeticError):
    pass


class EmptyGrid(ModelingError, RuntimeError):
    pass


class TooFewResiduals(ModelingError, ValueError):
    pass


class InvalidDof(ModelingError, ValueError):
    pass


class NotConverged(ModelingError, RuntimeError):
    pass


class InvalidConfidence(ModelingError, ValueError):
    pass


class InvalidHorizon(ModelingError, ValueError):
    pass
