"""Exception hierarchy shared by the kernel, the parser and the CLI."""


class RcaError(Exception):
    """Base class for every error raised by rcakit."""


class DivisionByZero(RcaError, ZeroDivisionError):
    pass


class PoleAtSpecialization(RcaError):
    def __init__(self, value, what="denominator"):
        self.value = value
        super().__init__(f"{what} vanishes at c = {value}")


class ArityMismatch(RcaError, ValueError):
    pass


class WrongVariableFamily(RcaError, ValueError):
    pass


class ZeroOperator(RcaError, ValueError):
    pass


class NotSpherical(RcaError, ValueError):
    pass


class OddPermutationUnderFormalTwist(RcaError, ValueError):
    pass


class ShapeError(RcaError, ValueError):
    pass


class UnknownSuite(RcaError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown suite"


class ExprError(RcaError, ValueError):
    """Parse or elaboration failure; ``offset`` is a byte offset into the source."""

    def __init__(self, message, offset=None):
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class ExprSyntaxError(ExprError):
    pass


class IndexOutOfRange(ExprError):
    pass


class IllegalNegativeExponent(ExprError):
    pass
