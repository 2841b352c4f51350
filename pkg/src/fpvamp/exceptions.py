"""Exception types raised across the package."""


class VampError(Exception):
    """Base class for all package errors."""


class InvalidSpec(VampError, ValueError):
    pass


class ParseError(VampError, ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class NotAPrimitive(VampError, ValueError):
    pass


class OutOfBounds(VampError, IndexError):
    pass


class NegativeRadius(VampError, ValueError):
    pass


class Collision(VampError, ValueError):
    pass


class InvalidPath(VampError, ValueError):
    pass


class NoPath(VampError):
    pass
