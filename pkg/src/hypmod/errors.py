"""Exception hierarchy shared by all hypmod modules."""


class HypmodError(Exception):
    """Base class for every error raised by hypmod."""


# field / characters
class NotPrime(HypmodError, ValueError):
    pass


class EvenPrime(HypmodError, ValueError):
    pass


class DenominatorNotDividing(HypmodError, ValueError):
    pass


class ContextMismatch(HypmodError, ValueError):
    pass


class BackendUnsupported(HypmodError, TypeError):
    pass


class AmbiguousReconstruction(HypmodError, ValueError):
    pass


class Inconsistent(HypmodError, ValueError):
    pass


class RoundingError(HypmodError, ArithmeticError):
    """A complex-backend value was too far from an integer to round."""


# hypergeometric data and sums
class LengthMismatch(HypmodError, ValueError):
    pass


class MissingUnitLowerParameter(HypmodError, ValueError):
    pass


class ZArgumentZero(HypmodError, ValueError):
    pass


class PrimeNotSplit(HypmodError, ValueError):
    pass


class NotPrimitive(HypmodError, ValueError):
    pass


class ZeroDenominatorJacobi(HypmodError, ZeroDivisionError):
    pass


class TZero(HypmodError, ValueError):
    pass


# q-series
class OffGridFactor(HypmodError, ValueError):
    pass


class NotInS4(HypmodError, ValueError):
    pass


class NotInS5(HypmodError, ValueError):
    pass


class PrecisionUnderflow(HypmodError, ValueError):
    pass


class PoleInLowerParameter(HypmodError, ValueError):
    pass


class NonUnitConstantTerm(HypmodError, ValueError):
    pass


class NonInvertibleSeries(HypmodError, ValueError):
    pass


class BeyondPrecision(HypmodError, IndexError):
    pass


class IdentityFails(HypmodError, AssertionError):
    def __init__(self, name, exponent, lhs=None, rhs=None):
        self.name = name
        self.exponent = exponent
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"identity {name!r} fails at q^{exponent}: {lhs} != {rhs}")


# number fields
class NonMonic(HypmodError, ValueError):
    pass


class DivisionByZero(HypmodError, ZeroDivisionError):
    """Inverting the zero element of a number field."""


class FieldMismatch(HypmodError, ValueError):
    pass


# hecke
class InsufficientPrecision(HypmodError, ValueError):
    pass


class ResidualNonZero(HypmodError, ValueError):
    pass


class NotAnEigenvector(HypmodError, AssertionError):
    def __init__(self, p, message=""):
        self.p = p
        super().__init__(f"not an eigenvector of T_{p}" + (f": {message}" if message else ""))


class CoefficientNotRational(HypmodError, ValueError):
    pass


class NoRationalSolution(HypmodError, ValueError):
    def __init__(self, message, catalog=None):
        self.catalog = catalog
        super().__init__(message)


# p-adic
class DenominatorDivisibleByP(HypmodError, ValueError):
    pass


# lmfdb client
class NetworkDisabled(HypmodError, RuntimeError):
    pass


class LabelNotFound(HypmodError, KeyError):
    pass


class CoefficientMismatch(HypmodError, AssertionError):
    pass
