"""Exception types shared across the package."""


class TfcolorError(Exception):
    pass


class GraphParseError(TfcolorError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceGuardError(TfcolorError):
    """Raised when an instance exceeds the configured computation budget."""


class ZeroDenominatorError(TfcolorError, ZeroDivisionError):
    """A ratio was requested whose denominator count is zero."""


class NoColoringError(TfcolorError):
    pass

