"""
Exceptions raised by autsub. Library code raises them and lets the caller
decide; the command line interface maps them onto exit codes.
"""

__all__ = [
    "AutsubError",
    "SubstitutionParseError",
    "PreconditionError",
    "AlphabetMismatchError",
    "InadmissibleWindowError",
    "ResourceLimitError",
    "InternalConsistencyError",
    "RAdicError",
]


class AutsubError(Exception):
    """
    Base class of every error raised by autsub.
    """


class SubstitutionParseError(AutsubError):
    """
    Malformed substitution text. `lineno` is 1-based, or None when the
    problem concerns the file as a whole (e.g. an empty alphabet).
    """

    def __init__(self, message: str, lineno: int = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class PreconditionError(AutsubError):
    """
    The input is valid but outside the scope of the requested operation,
    e.g. a non-primitive substitution or a finite shift.
    """


class AlphabetMismatchError(AutsubError):
    pass


class InadmissibleWindowError(AutsubError):
    """
    A sliding block code was applied to a window missing from its table.
    """

    def __init__(self, window):
        self.window = tuple(window)
        super().__init__(f"window {self.window!r} is not in the code table")


class ResourceLimitError(AutsubError):
    """
    A configured cap was exceeded. `cap` names the limit that fired.
    """

    def __init__(self, message: str, cap: str = None):
        self.cap = cap
        super().__init__(message)


class InternalConsistencyError(AutsubError):
    """
    A construction failed its own recheck. This signals a bug rather than
    a user error.
    """


class RAdicError(AutsubError, ValueError):
    pass
