"""Exception hierarchy.

Three families map onto CLI exit codes: configuration problems (2), bad input
data (3) and numerical failures (4).
"""


class MMForecastError(Exception):
    exit_code = 1


class ConfigError(MMForecastError):
    exit_code = 2


class DataError(MMForecastError):
    exit_code = 3


class SchemaError(DataError):
    pass


class RowError(DataError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(MMForecastError):
    exit_code = 4


class SizeError(NumericalError, ValueError):
    pass


class DomainError(NumericalError, ValueError):
    pass


class DegenerateError(NumericalError, ValueError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class RankError(NumericalError):
    pass


class SymmetryError(NumericalError, ValueError):
    pass


class DimensionError(NumericalError, ValueError):
    pass


class ConvergenceError(NumericalError):
    """Iterative solver hit its cap. ``best`` holds the best iterate found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DivergenceError(NumericalError):
    pass


class SearchError(NumericalError):
    pass
