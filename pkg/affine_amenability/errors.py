"""Exceptions raised by affine-amenability."""

from typing import Any


class AmenabilityError(Exception):
    """Base class for all errors raised by this package."""


class InputError(AmenabilityError, ValueError):
    """Malformed or inconsistent input (presentation, element, exhaustion, module)."""


class PresentationError(InputError):
    pass


class ElementSyntaxError(InputError):
    pass


class AmbientMismatch(InputError):
    pass


class ExhaustionError(InputError):
    pass


class NonConfluentError(InputError):
    """Raised when a basis is requested for a presentation with unresolved overlaps."""

    def __init__(self, message: str, ambiguities: list[Any]) -> None:
        super().__init__(message)
        self.ambiguities = ambiguities


class TruncationOverflow(AmenabilityError, ArithmeticError):
    """A computation would leave the coordinate window.

    ``required`` is the degree the computation needs, ``bound`` the window's degree bound,
    ``level`` the exhaustion level being evaluated (if any).
    """

    def __init__(self, required: int, bound: int, level: int | None = None, what: str = "") -> None:
        self.required = required
        self.bound = bound
        self.level = level
        self.what = what
        where = f" at level n={level}" if level is not None else ""
        subject = f"{what} " if what else ""
        super().__init__(f"{subject}needs degree {required} > window bound {bound}{where}")

    def at_level(self, level: int) -> "TruncationOverflow":
        return TruncationOverflow(self.required, self.bound, level, self.what)
