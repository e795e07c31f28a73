"""Exception hierarchy shared by every module of the toolkit."""


class CoercivityKitError(Exception):
    """Base class for all toolkit errors."""


class MixedSurdFields(CoercivityKitError, ArithmeticError):
    """Arithmetic between sqrt(d) and sqrt(d') with d != d'."""


class DivideByZero(CoercivityKitError, ZeroDivisionError):
    pass


class DegenerateInput(CoercivityKitError, ValueError):
    pass


class SurfaceMismatch(CoercivityKitError, ValueError):
    pass


class UnsupportedK(CoercivityKitError, ValueError):
    pass


class ZeroVolume(CoercivityKitError, ValueError):
    pass


class OutOfDomain(CoercivityKitError, ValueError):
    pass


class NotApplicable(CoercivityKitError):
    """The hypothesis of a structural law fails, so the check cannot run."""


class EpsilonTooLarge(CoercivityKitError, ValueError):
    pass


class PairOutsideCone(CoercivityKitError, ValueError):
    pass


class DenominatorSignChange(CoercivityKitError, ValueError):
    pass


class PositivityViolation(CoercivityKitError, ValueError):
    pass


class QuadratureDivergence(CoercivityKitError, ArithmeticError):
    pass


class ModelFormatError(CoercivityKitError, ValueError):
    """Malformed alpha-model or report file."""
