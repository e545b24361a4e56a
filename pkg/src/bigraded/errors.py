"""Exception hierarchy shared by all workbench modules."""


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class DomainError(WorkbenchError):
    """An operation was applied outside its mathematical domain."""


class InputError(WorkbenchError):
    """Malformed user input: files, expressions, flags, matrices."""
