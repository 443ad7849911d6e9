"""
Exception classes shared by every layer
The CLI maps InputError to exit status 2 and PropertyFailure to exit status 1
"""

from pathlib import Path
from typing import Optional, Union


class InputError(ValueError):
    """Bad or inconsistent input data."""


class ParseError(InputError):
    """
    A fixture file could not be read
    """

    def __init__(self, path: Union[str, Path, None], line: int, message: str):
        self.path = str(path) if path is not None else "<text>"
        self.line = line
        self.message = message
        super().__init__(f"{self.path}:{line}: {message}")


class PreconditionError(InputError):
    """
    An operation was called on data violating its documented precondition
    """

    def __init__(self, message: str, witness: Optional[str] = None):
        self.witness = witness
        text = message if witness is None else f"{message} (witness: {witness})"
        super().__init__(text)


class PropertyFailure(RuntimeError):
    """
    A mathematical identity that must hold did not
    """

    def __init__(self, message: str, witness: Optional[str] = None):
        self.witness = witness
        text = message if witness is None else f"{message} (witness: {witness})"
        super().__init__(text)
