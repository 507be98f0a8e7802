"""Exception hierarchy.

Every error raised by the library derives from :class:`EssNormalError`.
Input problems derive from :class:`ValidationError` and numerical breakdowns
from :class:`NumericalError`; the CLI maps these to exit codes 2 and 3.
"""


class EssNormalError(Exception):
    """Base class for all library errors."""

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class ValidationError(EssNormalError, ValueError):
    pass


class NumericalError(EssNormalError, ArithmeticError):
    pass


# ratfun
class PoleCollision(ValidationError):
    pass


class DegenerateMap(ValidationError):
    pass


class InvalidUnimodular(ValidationError):
    pass


class DegenerateLFT(ValidationError):
    pass


class NumericalFailure(NumericalError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual

    def to_dict(self):
        d = super().to_dict()
        if self.residual is not None:
            d["residual"] = float(self.residual)
        return d


# jets
class PoleAtBasePoint(ValidationError):
    pass


class ChainRuleBaseMismatch(ValidationError):
    pass


class ZeroConstantTerm(ValidationError):
    pass


class NotLocallyInvertible(ValidationError):
    pass


# contact
class NotSelfMapOfDisk(ValidationError):
    pass


class BlaschkeLikeContact(ValidationError):
    pass


class NoContact(ValidationError):
    pass


class Indeterminate(NumericalError):
    pass


class OutOfScopeMap(ValidationError):
    pass


# cf_interp
class DimensionMismatch(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class InvalidCFData(ValidationError):
    pass


class NotReducible(ValidationError):
    pass


class InvalidAugmentationParameter(ValidationError):
    pass


class NoSolution(ValidationError):
    pass


class InternalHankelViolation(NumericalError):
    pass


class NotPickFunction(ValidationError):
    pass


class RegularValueSearchFailed(NumericalError):
    def __init__(self, message, last_w=None):
        super().__init__(message)
        self.last_w = last_w


# essnorm
class TailNotStrictlyUpper(ValidationError):
    pass


class AmbiguousGrouping(NumericalError):
    pass


class CriticalContactPoint(ValidationError):
    pass


class InternalInvariantViolation(NumericalError):
    pass


# h2num
class SeriesDivergenceRisk(ValidationError):
    pass


class BranchCollision(NumericalError):
    pass


# cli
class ParseError(ValidationError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position

    def to_dict(self):
        d = super().to_dict()
        d["position"] = self.position
        return d
