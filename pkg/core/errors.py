"""Exception hierarchy for the workbench.

Every error carries the process exit code the command line front end reports
for it, so the runner can map any failure to the exit-code contract without a
lookup table.
"""
from typing import Optional

NOT_VERIFIED = 'not verified at this scale'


class WorkbenchError(Exception):
    """Base class for all workbench errors."""
    exit_code = 3


class SpecError(WorkbenchError):
    """Invalid ring, ideal, index or run specification."""
    exit_code = 3


class ParseError(SpecError):
    """Text could not be parsed.

    Attributes
    ----------
    position : int
        Zero based offset into the parsed text where parsing failed
    """
    def __init__(self, message: str, position: int = 0):
        super().__init__(f'{message} (at position {position})')
        self.position = position


class CapExceededError(WorkbenchError):
    """A configured enumeration or member cap was exceeded.

    Attributes
    ----------
    what : str
        Name of the computation that hit the cap
    limit : int
        The configured cap
    partial : int
        Number of elements produced before giving up
    """
    exit_code = 2

    def __init__(self, what: str, limit: int, partial: int = 0):
        super().__init__(f'{what}: cap {limit} exceeded (partial count {partial})')
        self.what = what
        self.limit = limit
        self.partial = partial


class NotInvertibleError(WorkbenchError):
    """Matrix is not invertible."""
    exit_code = 3


class PreconditionError(WorkbenchError):
    """An input violates a membership precondition."""
    exit_code = 3


class MathematicalMismatch(WorkbenchError):
    """A property that is proved to hold failed on a computed case.

    Attributes
    ----------
    witness : str, optional
        Rendered matrix (or word) exhibiting the failure
    """
    exit_code = 1

    def __init__(self, message: str, witness: Optional[str] = None):
        super().__init__(message if witness is None else f'{message}; witness {witness}')
        self.witness = witness


class CaseFailure(WorkbenchError):
    """A verification case raised something other than a WorkbenchError.

    Treated as an implementation bug, reported like a mismatch.

    Attributes
    ----------
    cause : Exception
        The original exception
    """
    exit_code = 1

    def __init__(self, cause: Exception):
        super().__init__(f'case failed with {type(cause).__name__}: {cause}')
        self.cause = cause
