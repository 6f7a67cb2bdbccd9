"""Intersection ring of the blowup of P^n along a line.

Classes live in the basis ``x`` (pullback of the hyperplane class) and ``y``
(the exceptional divisor).  Top-degree monomials reduce by

    x^n = 1,  x y^(n-1) = (-1)^(n-2),  y^n = (-1)^(n-2) (n-1),
    x^j y^(n-j) = 0  for 2 <= j <= n-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatchError, DomainError


@dataclass(frozen=True)
class DivisorClass:
    """The class a*x + b*y.  Coefficients may be Fractions or polynomials in eps."""

    a: object = Fraction(0)
    b: object = Fraction(0)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.a, -self.b)

    def __mul__(self, c) -> "DivisorClass":
        return DivisorClass(c * self.a, c * self.b)

    __rmul__ = __mul__


X = DivisorClass(Fraction(1), Fraction(0))
Y = DivisorClass(Fraction(0), Fraction(1))


def polarization(eps) -> DivisorClass:
    """L = x - eps*y, the class pi^*O(1) - eps[E]."""
    return DivisorClass(Fraction(1), -eps)


@dataclass(frozen=True)
class BlowupRing:
    """Intersection numbers on Bl_{P^1} P^n."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise DomainError(f"need integer n >= 3, got {self.n!r}")

    def monomial(self, j: int) -> Fraction:
        """The number x^j y^(n-j)."""
        n = self.n
        if j == n:
            return Fraction(1)
        if j == 1:
            return Fraction((-1) ** (n - 2))
        if j == 0:
            return Fraction((-1) ** (n - 2) * (n - 1))
        if 2 <= j <= n - 1:
            return Fraction(0)
        raise ValueError(f"monomial exponent {j} outside [0, {n}]")

    def intersect(self, classes: Sequence[DivisorClass]):
        """Top intersection of exactly n classes.

        The product is expanded by collecting x^j y^(n-j) coefficients one
        factor at a time, so cost is quadratic in n.
        """
        if len(classes) != self.n:
            raise DimensionMismatchError(
                f"need {self.n} classes for a top intersection, got {len(classes)}"
            )
        # coeff[j] multiplies x^j y^(k-j) after k factors
        coeff = [Fraction(1)]
        for cls in classes:
            nxt = [Fraction(0)] * (len(coeff) + 1)
            for j, c in enumerate(coeff):
                nxt[j + 1] = nxt[j + 1] + c * cls.a
                nxt[j] = nxt[j] + c * cls.b
            coeff = nxt
        total = Fraction(0)
        for j, c in enumerate(coeff):
            m = self.monomial(j)
            if m:
                total = total + c * m
        return total

    def power(self, *factors: tuple[DivisorClass, int]):
        """Intersection of classes given as (class, multiplicity) pairs."""
        classes = [cls for cls, k in factors for _ in range(k)]
        return self.intersect(classes)

    def canonical_class(self) -> DivisorClass:
        """K_X = pi^*K_{P^n} + (n-2)E, i.e. -(n+1)x + (n-2)y."""
        return DivisorClass(Fraction(-(self.n + 1)), Fraction(self.n - 2))


def canonical_class(ring: BlowupRing) -> DivisorClass:
    return ring.canonical_class()


def intersect(ring: BlowupRing, classes: Sequence[DivisorClass]):
    return ring.intersect(classes)


def is_ample(cls: DivisorClass) -> bool:
    """Ampleness of a*x + b*y.

    Writing the class as a pi^*O(1) - c E with c = -b, it is ample iff a > c > 0.
    """
    a, c = cls.a, -cls.b
    return a > c > 0


def seshadri_of_E(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    return 1 - eps


def is_ample_pair(a, b) -> bool:
    """Ampleness of a pi^*O(1) - b E, i.e. a > b > 0."""
    return a > b > 0
