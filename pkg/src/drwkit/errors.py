"""Exception types raised across the package."""


class DrwError(Exception):
    """Base class for all errors raised by drwkit."""


class DimensionMismatch(DrwError):
    pass


class CompositionNonzero(DrwError):
    pass


class LevelTooSmall(DrwError):
    pass


class LevelMismatch(DrwError):
    pass


class ShapeMismatch(DrwError):
    pass


class LengthMismatch(DrwError):
    pass


class LengthTooShort(DrwError):
    pass


class ZeroDivisor(DrwError):
    pass


class LiftMismatch(DrwError):
    pass


class NotExpressible(DrwError):
    pass


class MalformedExpression(DrwError):
    pass


class ConfigParse(DrwError):
    pass


class IOFailure(DrwError):
    pass


class ParseError(DrwError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
