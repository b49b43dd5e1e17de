"""Exception types raised across the package."""


class CentralMeasureError(Exception):
    """Base class for all errors raised by :mod:`centralmeasure`."""


# parameter validation

class NegativeGaussianComponent(CentralMeasureError, ValueError):
    pass


class ZeroPoint(CentralMeasureError, ValueError):
    pass


class NonFinite(CentralMeasureError, ValueError):
    pass


class DivergentTail(CentralMeasureError, ValueError):
    pass


# indexing / queries

class IndexOutOfRange(CentralMeasureError, IndexError):
    pass


class DimensionTooSmall(CentralMeasureError, ValueError):
    pass


class BoundaryTooClose(CentralMeasureError, ValueError):
    """An interval endpoint sits on (or too near) an atom or zero."""


class DegenerateEigenvalue(CentralMeasureError, ValueError):
    pass


class NoPhaseAnchor(CentralMeasureError, ValueError):
    pass


class GaussianPartPresent(CentralMeasureError, ValueError):
    pass


class NoSuchPoint(CentralMeasureError, ValueError):
    pass


class NotUnique(CentralMeasureError, ValueError):
    pass


class UnitEigenvalue(CentralMeasureError, ValueError):
    pass


class ConfigInvalid(CentralMeasureError, ValueError):
    pass


# numerics

class NumericalFailure(CentralMeasureError, ArithmeticError):
    pass


class ConvergenceFailure(NumericalFailure):
    pass


class NumericalSingularity(NumericalFailure):
    pass
