"""Exception hierarchy.

Structural problems with inputs raise; properties of the input that merely make
a bound inapplicable are recorded on the bound instead (see ``AnnulusBound``).
"""


class PolyboundError(Exception):
    """Base class for every error raised by this package."""


class PolynomialError(PolyboundError, ValueError):
    """A matrix polynomial violates a data-model invariant."""


class ShapeError(PolynomialError):
    """Non-square coefficient, mixed coefficient sizes or too few coefficients."""


class ParseError(PolyboundError, ValueError):
    """Malformed instance document; ``path`` locates the offending node."""

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class SingularMatrix(PolyboundError, ArithmeticError):
    """LU factorization hit a pivot below the singularity threshold."""


class SingularCoefficient(PolyboundError, ArithmeticError):
    """A0 or Am is singular, so 0 (or infinity) is an eigenvalue."""


class NotHermitian(PolyboundError, ValueError):
    pass


class NotMonic(PolyboundError, ValueError):
    pass


class ConvergenceFailure(PolyboundError, ArithmeticError):
    pass


class InvalidParameter(PolyboundError, ValueError):
    pass


class PreconditionViolated(PolyboundError, ValueError):
    pass


class BracketInvalid(PolyboundError, ValueError):
    pass


class NoApplicableBound(PolyboundError, ValueError):
    pass


class CapExceeded(PolyboundError, ValueError):
    """Companion size m*n exceeds the configured eigensolver cap."""


class EnclosureViolation(PolyboundError):
    """A bound failed to contain a computed eigenvalue modulus."""

    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed
