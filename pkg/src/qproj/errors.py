"""Exception types.  Every engine error carries a short machine-readable code."""


class QProjError(Exception):
    code = "ERROR"

    def __init__(self, message="", code=None):
        if code is not None:
            self.code = code
        super().__init__(f"{self.code}: {message}" if message else self.code)


class CartanError(QProjError, ValueError):
    """Invalid Cartan datum; ``code`` names the violated axiom."""

    def __init__(self, code, message, where=None):
        self.where = where
        super().__init__(message, code)


class DivisionByZero(QProjError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class OutOfRange(QProjError, ValueError):
    code = "OUT_OF_RANGE"


class FlavorMismatch(QProjError, TypeError):
    code = "FLAVOR_MISMATCH"


class SameIndex(QProjError, ValueError):
    code = "SAME_INDEX"


class WeightMixed(QProjError, ValueError):
    code = "WEIGHT_MIXED"


class NotHomogeneous(QProjError, ValueError):
    code = "NOT_HOMOGENEOUS"


class HeightLimit(QProjError, ValueError):
    code = "HEIGHT_LIMIT"


class DegenerateGram(QProjError, ArithmeticError):
    code = "DEGENERATE_GRAM"


class WrongDatum(QProjError, ValueError):
    code = "WRONG_DATUM"


class IdentityViolation(QProjError, AssertionError):
    """An identity that must hold exactly did not; ``component`` locates it."""

    code = "IDENTITY_VIOLATION"

    def __init__(self, message, component=None):
        self.component = component
        super().__init__(message)


class UnsafeRegion(QProjError, ValueError):
    code = "UNSAFE_REGION"


class InconsistentModule(QProjError, ValueError):
    code = "INCONSISTENT_MODULE"


class NotASubmodule(QProjError, ValueError):
    code = "NOT_A_SUBMODULE"


class UnknownIndex(QProjError, IndexError):
    code = "UNKNOWN_INDEX"


class ParseError(QProjError, ValueError):
    code = "PARSE_ERROR"

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
