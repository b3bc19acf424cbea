"""Exception types shared across the package."""

from __future__ import annotations


class PictureLangError(Exception):
    """Base class for all errors raised by this package."""


class PictureError(PictureLangError):
    """Invalid picture construction or out-of-range cell access."""


class AlphabetError(PictureLangError):
    """Symbol outside the declared alphabet, or a reserved symbol used in one."""


class ParseError(PictureLangError):
    """Malformed textual input (pictures, sentences, JSON files)."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class FragmentError(PictureLangError):
    """A sentence is outside the syntactic fragment an operation requires."""


class CapExceeded(PictureLangError):
    """A configured resource cap was exceeded; never a silent approximation."""


class ContractViolation(PictureLangError):
    """A documented precondition was violated by the caller."""
