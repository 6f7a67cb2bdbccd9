"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionMismatchError(ValueError):
    """An intersection product received the wrong number of classes."""


class VanishingDenominatorError(ArithmeticError):
    """A denominator in the extremal constants vanishes at the requested eps.

    ``which`` names the offending denominator (``"gamma"`` or ``"delta"``).
    """

    def __init__(self, which, n, eps):
        self.which = which
        self.n = n
        self.eps = eps
        super().__init__(f"{which} denominator vanishes at n={n}, eps={eps}")


class IdentityMismatchError(AssertionError):
    """Two routes to the same exact quantity disagree."""


class NumericError(ArithmeticError):
    """A floating-point evaluation is singular or failed to converge."""
