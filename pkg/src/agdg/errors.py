"""Exception types shared across the package."""


class AgdgError(Exception):
    """Base class for all library errors."""


# fields
class NonPrime(AgdgError):
    pass


class DegreeZero(AgdgError):
    pass


class Overflow(AgdgError):
    pass


class DivisionByZero(AgdgError, ZeroDivisionError):
    pass


class MixedFields(AgdgError):
    pass


# function DSL
class FnSyntaxError(AgdgError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class UnknownVariable(AgdgError):
    pass


class TriangularityViolation(AgdgError):
    pass


class MissingVariable(AgdgError):
    pass


class WrongContext(AgdgError):
    pass


# graphs
class RestrictedAlpha(AgdgError):
    pass


class EmptyGraph(AgdgError):
    pass


class EmptySet(AgdgError):
    pass


class BudgetExceeded(AgdgError):
    pass


class TooLarge(AgdgError):
    pass


class BadDimension(AgdgError):
    pass


class NotAVoltage(AgdgError):
    pass


class NotSymmetric(AgdgError):
    pass


class NotRegular(AgdgError):
    pass


# catalog
class UnknownName(AgdgError):
    pass


class BadParams(AgdgError):
    pass


# D(k,q)
class DimensionTooSmall(AgdgError):
    pass


class PolarityUnavailable(AgdgError):
    pass


class ZeroScalar(AgdgError):
    pass


class NotBijective(AgdgError):
    pass


# spectra
class OutOfRange(AgdgError):
    pass


class NotInjective(AgdgError):
    pass


# hypergraphs
class EvenQ(AgdgError):
    pass


# digraphs
class BadExponent(AgdgError):
    pass


class NotStronglyConnected(AgdgError):
    pass


# decompositions
class SameVertex(AgdgError):
    pass


class EvenCharacteristic(AgdgError):
    pass
