"""Exception types raised across the package."""


class CLForgeError(Exception):
    """Base class for every error raised by clforge."""


class UnsupportedParameter(CLForgeError, ValueError):
    pass


class BadPolynomial(CLForgeError, ValueError):
    pass


class TooLarge(CLForgeError, ValueError):
    pass


class DomainError(CLForgeError, ValueError):
    pass


class DivisionByZero(CLForgeError, ZeroDivisionError):
    pass


class ConstructionViolation(CLForgeError, RuntimeError):
    """An internal invariant of the construction failed; indicates a bug."""


class NotALine(CLForgeError, ValueError):
    pass


class NondegeneracyViolation(CLForgeError, ValueError):
    pass
