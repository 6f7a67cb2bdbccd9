"""Exact univariate polynomial algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  :class:`Poly` is a dense,
degree-ascending coefficient tuple; :class:`RatFunc` is a reduced quotient of
two polys.  Sturm chains give certified root counts on rational intervals.

All objects are immutable; every function here is pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _Rational
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "Poly",
    "RatFunc",
    "SturmChain",
    "SignKind",
    "SignCertificate",
    "poly_eval",
    "poly_derivative",
    "poly_gcd",
    "square_free_part",
    "sturm_root_count",
    "certify_sign",
    "taylor_shift",
]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _Rational)):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class Poly:
    """Dense polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # construction helpers
    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def identity(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    # arithmetic
    @staticmethod
    def _lift(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, _Rational)):
            return Poly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, _Rational)):
            c = _as_fraction(other)
            return Poly([c * x for x in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("Poly power must be a non-negative integer")
        result, base = Poly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c == 0:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, (int, _Rational)):
            c = _as_fraction(other)
            return Poly([x / c for x in self.coeffs])
        if isinstance(other, Poly):
            return RatFunc(self, other)
        if isinstance(other, RatFunc):
            return RatFunc(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, _Rational)):
            return RatFunc(Poly([other]), self)
        return NotImplemented

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __call__(self, t):
        return poly_eval(self, t)

    def derivative(self) -> "Poly":
        return poly_derivative(self)

    def monic(self) -> "Poly":
        return self / self.lead if self.coeffs else self

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"({c}){'*' + mono if mono else ''}")
        return " + ".join(terms)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def poly_eval(p: Poly, t):
    """Horner evaluation.  ``t`` may be a Fraction, a Poly or a RatFunc."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * t + c
    if isinstance(acc, int):
        return Fraction(acc)
    return acc


def poly_derivative(p: Poly) -> Poly:
    return Poly([k * c for k, c in enumerate(p.coeffs)][1:])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def square_free_part(p: Poly) -> Poly:
    if p.is_zero():
        return p
    g = poly_gcd(p, p.derivative())
    return p // g


def taylor_shift(p: Poly, c) -> Poly:
    """Coefficients of q(u) = p(u + c)."""
    c = _as_fraction(c)
    shift = Poly([c, 1])
    acc = Poly()
    for a in reversed(p.coeffs):
        acc = acc * shift + a
    return acc


class RatFunc:
    """Quotient num/den of polys, stored reduced with a monic denominator."""

    __slots__ = ("num", "den", "_float")

    def __init__(self, num, den=None):
        num = Poly._lift(num) if not isinstance(num, Poly) else num
        den = Poly([1]) if den is None else (Poly._lift(den) if not isinstance(den, Poly) else den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RatFunc needs polynomial or rational parts")
        if den.is_zero():
            raise ZeroDivisionError("RatFunc with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.lead
            if lead != 1:
                num, den = num / lead, den / lead
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_float", None)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def _lift(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int, _Rational)):
            return RatFunc(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("RatFunc division by zero")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("integer power required")
        if k < 0:
            return RatFunc(self.den ** (-k), self.num ** (-k))
        return RatFunc(self.num**k, self.den**k)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFunc", self.num.coeffs, self.den.coeffs))

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, t) -> Fraction:
        d = poly_eval(self.den, t)
        if d == 0:
            raise ZeroDivisionError(f"RatFunc pole at {t}")
        return poly_eval(self.num, t) / d

    def evalf(self, t: float) -> float:
        """Float evaluation from correctly rounded coefficients."""
        cached = self._float
        if cached is None:
            cached = (
                tuple(float(c) for c in reversed(self.num.coeffs)),
                tuple(float(c) for c in reversed(self.den.coeffs)),
            )
            object.__setattr__(self, "_float", cached)
        num_c, den_c = cached
        n = 0.0
        for c in num_c:
            n = n * t + c
        d = 0.0
        for c in den_c:
            d = d * t + c
        return n / d

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"


@dataclass(frozen=True)
class SturmChain:
    """Canonical Sturm sequence of the square-free part of a polynomial."""

    polys: tuple

    @classmethod
    def of(cls, p: Poly) -> "SturmChain":
        if p.is_zero():
            raise ValueError("Sturm chain of the zero polynomial")
        p0 = square_free_part(p)
        chain = [p0]
        if p0.degree > 0:
            chain.append(p0.derivative())
            while chain[-1].degree > 0:
                r = chain[-2] % chain[-1]
                if r.is_zero():
                    break
                chain.append(-r)
        return cls(tuple(chain))

    def variations(self, t) -> int:
        signs = []
        for q in self.polys:
            v = poly_eval(q, t)
            if v != 0:
                signs.append(v > 0)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, lo, hi) -> int:
        """Distinct real roots in (lo, hi]."""
        return self.variations(lo) - self.variations(hi)


def sturm_root_count(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi}]")
    return SturmChain.of(p).count(lo, hi)


class SignKind(enum.Enum):
    STRICTLY_POSITIVE = "StrictlyPositive"
    STRICTLY_NEGATIVE = "StrictlyNegative"
    HAS_ROOT_INSIDE = "HasRootInside"
    ZERO_ON_BOUNDARY_ONLY = "ZeroOnBoundaryOnly"


@dataclass(frozen=True)
class SignCertificate:
    kind: SignKind
    sign: int
    interior_roots: int
    zero_at_lo: bool
    zero_at_hi: bool
    chain_length: int

    @property
    def positive(self) -> bool:
        return self.kind is SignKind.STRICTLY_POSITIVE

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "sign": self.sign,
            "interior_roots": self.interior_roots,
            "zero_at_lo": self.zero_at_lo,
            "zero_at_hi": self.zero_at_hi,
            "chain_length": self.chain_length,
        }


def certify_sign(p: Poly, lo, hi, *, closed: bool = False) -> SignCertificate:
    """Classify the sign of ``p`` on the open interval (lo, hi).

    With ``closed=True`` the endpoints are part of the question: a polynomial
    with no interior root that vanishes at an endpoint is reported as
    ``ZERO_ON_BOUNDARY_ONLY`` carrying its interior sign.
    """
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi})")
    if p.is_zero():
        raise ValueError("cannot certify the sign of the zero polynomial")
    chain = SturmChain.of(p)
    zero_lo = poly_eval(p, lo) == 0
    zero_hi = poly_eval(p, hi) == 0
    inside = chain.count(lo, hi) - (1 if zero_hi else 0)
    if inside > 0:
        return SignCertificate(SignKind.HAS_ROOT_INSIDE, 0, inside, zero_lo, zero_hi, len(chain.polys))
    sign = 1 if poly_eval(p, (lo + hi) / 2) > 0 else -1
    if closed and (zero_lo or zero_hi):
        kind = SignKind.ZERO_ON_BOUNDARY_ONLY
    else:
        kind = SignKind.STRICTLY_POSITIVE if sign > 0 else SignKind.STRICTLY_NEGATIVE
    return SignCertificate(kind, sign, 0, zero_lo, zero_hi, len(chain.polys))


def from_strings(values: Sequence[str]) -> Poly:
    return Poly(Fraction(v) for v in values)
