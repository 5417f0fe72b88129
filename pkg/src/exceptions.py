"""Exception hierarchy shared by every package."""

from typing import Optional


class CremonaError(Exception):
    """Base exception; carries the exit status the CLI reports for it."""

    default_exit_code = 2

    def __init__(self, message: str, exit_code: Optional[int] = None):
        self.message = message
        self.exit_code = exit_code if exit_code is not None else self.default_exit_code
        super().__init__(self.message)


class PolynomialError(CremonaError):
    """Malformed polynomial input or an operation undefined on the given polynomials."""


class DegenerateCompositionError(CremonaError):
    """A composition evaluated to [0 : ... : 0]."""


class InvalidParameterError(CremonaError):
    """Parameters outside the domain of an operation."""


class InsufficientDataError(CremonaError):
    """A sequence is too short for the requested estimate."""


class FormViolationError(CremonaError):
    """A class or matrix is incompatible with the intersection form."""


class WitnessVerificationError(CremonaError):
    """A witness word did not evaluate to its target."""

    default_exit_code = 1


class DigitExpansionError(CremonaError):
    """Digit expansion did not terminate within its step bound."""

    default_exit_code = 1
