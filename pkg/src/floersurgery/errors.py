"""Exception hierarchy shared by all floersurgery modules."""

from __future__ import annotations


class FloerError(Exception):
    """Base class for every error raised by this package."""


class InvalidPresentation(FloerError):
    """A graded U-presentation failed validation.

    Carries the full list of validation messages in ``errors``.
    """

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


class InfiniteModule(FloerError):
    """An Euler characteristic was requested for a module with towers."""


class ModelError(FloerError):
    """A knot-model document failed validation.

    ``code`` is one of: Syntax, MonotonicityViolation, GenusViolation,
    MapNotEquivariant, SymmetryViolation, ParityMismatch.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class NotCoprime(FloerError):
    """p and q are not coprime, or p < 1."""


class TruncationTooSmall(FloerError):
    """The truncated cone could not be certified stable at this depth."""


class V0NonZero(FloerError):
    """Reduced-cone computation requires V_0 = 0."""


class V0Zero(FloerError):
    """The V_0 slope bound only applies when V_0 > 0."""


class MissingGradings(FloerError):
    """A grading-based obstruction was invoked without grading data."""
