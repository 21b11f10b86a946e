"""Exception hierarchy. Each family maps onto a CLI exit code."""


class PPSONetError(Exception):
    exit_code = 1


class ConfigError(PPSONetError, ValueError):
    exit_code = 2


class InvalidBoundsError(ConfigError):
    pass


class UnsupportedDimensionError(ConfigError):
    pass


class DataError(PPSONetError, ValueError):
    exit_code = 3


class FormatError(DataError):
    pass


class ParseError(DataError):
    pass


class MissingValueError(DataError):
    pass


class StratificationError(DataError):
    pass


class EmptyInputError(DataError):
    pass


class DimensionError(PPSONetError, ValueError):
    exit_code = 3


class NumericError(PPSONetError, ArithmeticError):
    exit_code = 4
