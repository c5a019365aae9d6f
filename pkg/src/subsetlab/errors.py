"""Exception hierarchy shared by every subsetlab module."""


class SubsetLabError(Exception):
    """Base class for all errors raised by subsetlab."""


class DivisionByZero(SubsetLabError, ZeroDivisionError):
    pass


class InstanceTooSmall(SubsetLabError, ValueError):
    pass


class DegenerateWindow(SubsetLabError, ArithmeticError):
    """The balance elements are equal, so the window has no pivot for column 2."""


class DegenerateTargets(SubsetLabError, ArithmeticError):
    """A balance value already sits on its target (zero denominator in the table)."""


class CapacityExceeded(SubsetLabError, ValueError):
    pass


class ParseError(SubsetLabError, ValueError):
    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field


class ReductionError(SubsetLabError, ValueError):
    pass


class ConfigurationError(SubsetLabError, ValueError):
    pass
