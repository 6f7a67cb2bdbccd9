"""Slope and quotient slope of Bl_{P^1} P^n, and the instability certificate.

The polarization is L = x - eps*y with 0 < eps < 1; the destabilizing
subscheme is the exceptional divisor E, whose Seshadri constant is 1 - eps.

Closed forms are written once, generically over the scalar type, so the same
code evaluates them at a rational eps or builds them as polynomials in eps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import DomainError, IdentityMismatchError
from .exactmath import Poly, SignCertificate, certify_sign
from .intersection import Y, BlowupRing, polarization


def _check_n(n):
    if not isinstance(n, int) or n < 3:
        raise DomainError(f"need integer n >= 3, got {n!r}")


def _check_eps(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    return eps


def _geom(e, m: int):
    """1 + e + ... + e^(m-1), i.e. (1 - e^m)/(1 - e) without the division."""
    acc = 0 * e
    for _ in range(m):
        acc = acc * e + 1
    return acc


# closed forms; ``e`` is a Fraction or a Poly in eps

def den1(n: int, e):
    return 1 - n * e ** (n - 1) + (n - 1) * e**n


def num1(n: int, e):
    return (n + 1) * (1 - e ** (n - 1)) - (n - 1) * (n - 2) * e ** (n - 2) * (1 - e)


def den2(n: int, e):
    return (
        -_geom(e, n)
        + n * e ** (n - 1)
        + Fraction(n - 1, n + 1) * _geom(e, n + 1)
        - (n - 1) * e**n
    )


def num2(n: int, e):
    return (
        (n - 1) * e ** (n - 2) * (1 - e)
        - (n - 1) * _geom(e, n - 1)
        + (n - 1) ** 2 * e ** (n - 2)
        + (n - 3) * _geom(e, n)
        - n * (n - 3) * e ** (n - 1)
    )


def den2_displayed(n: int, eps: Fraction) -> Fraction:
    """Den_2 with the literal (1 - eps^k)/(1 - eps) quotients."""
    e = eps
    return (
        -(1 - e**n) / (1 - e)
        + n * e ** (n - 1)
        + Fraction(n - 1, n + 1) * (1 - e ** (n + 1)) / (1 - e)
        - (n - 1) * e**n
    )


def num2_displayed(n: int, eps: Fraction) -> Fraction:
    e = eps
    return (
        (n - 1) * e ** (n - 2) * (1 - e)
        - (n - 1) * (1 - e ** (n - 1)) / (1 - e)
        + (n - 1) ** 2 * e ** (n - 2)
        + (n - 3) * (1 - e**n) / (1 - e)
        - n * (n - 3) * e ** (n - 1)
    )


def F(m: int, e):
    """F_m = 1 - m e^(m-1) + (m-1) e^m, generic over the scalar type."""
    return 1 - m * e ** (m - 1) + (m - 1) * e**m


def f_m(m: int, eps) -> Fraction:
    if not isinstance(m, int) or m < 2:
        raise DomainError(f"F_m needs integer m >= 2, got {m!r}")
    return F(m, _check_eps(eps))


def factored_margin(n: int, e):
    """(n-1) e^(n-2) (1-e) [ n(1-e)^2 F_n + ((n+1)e - (n-2)) (F_n - (n-1)/(n+1) F_{n+1}) ]."""
    fn, fn1 = F(n, e), F(n + 1, e)
    bracket = n * (1 - e) ** 2 * fn + ((n + 1) * e - (n - 2)) * (fn - Fraction(n - 1, n + 1) * fn1)
    return (n - 1) * e ** (n - 2) * (1 - e) * bracket


# slopes

def slope_mu(n: int, eps) -> Fraction:
    """mu(X, L) = (n/2) Num_1/Den_1, cross-checked against the intersection ring."""
    _check_n(n)
    eps = _check_eps(eps)
    closed = Fraction(n, 2) * num1(n, eps) / den1(n, eps)
    via_ring = slope_mu_intersection(n, eps)
    if closed != via_ring:
        raise IdentityMismatchError(f"slope closed form {closed} != intersection route {via_ring}")
    return closed


def slope_mu_intersection(n: int, eps) -> Fraction:
    """-n K.L^(n-1) / (2 L^n) evaluated in the intersection ring."""
    ring = BlowupRing(n)
    L = polarization(Fraction(eps))
    K = ring.canonical_class()
    return -n * ring.power((K, 1), (L, n - 1)) / (2 * ring.power((L, n)))


def quotient_slope_divisor(n: int, eps, c) -> Fraction:
    """Ross-Thomas quotient slope of Z = E at parameter c in (0, Sesh(E)]."""
    _check_n(n)
    eps = _check_eps(eps)
    c = Fraction(c)
    if not 0 < c <= 1 - eps:
        raise DomainError(f"c must lie in (0, {1 - eps}], got {c}")
    ring = BlowupRing(n)
    L, E = polarization(eps), Y
    KE = ring.canonical_class() + E
    top = ring.power((L, n - 1), (E, 1))
    for j in range(1, n):
        top -= comb(n - 1, j) * Fraction((-c) ** j, j + 1) * ring.power((L, n - 1 - j), (E, j), (KE, 1))
    bottom = sum(
        comb(n, j) * Fraction((-c) ** j, j + 1) * ring.power((L, n - j), (E, j)) for j in range(1, n + 1)
    )
    return n * top / (2 * bottom)


def quotient_slope_seshadri(n: int, eps) -> Fraction:
    """mu_{Sesh(E)}(O_E, L) = (n/2) Num_2/Den_2 from the closed forms."""
    _check_n(n)
    eps = _check_eps(eps)
    return Fraction(n, 2) * num2_displayed(n, eps) / den2_displayed(n, eps)


def instability_margin(n: int, eps) -> Fraction:
    """(1 - eps)(Num_2 Den_1 - Num_1 Den_2), by the raw and the factored route."""
    _check_n(n)
    eps = _check_eps(eps)
    raw = (1 - eps) * (num2_displayed(n, eps) * den1(n, eps) - num1(n, eps) * den2_displayed(n, eps))
    fact = factored_margin(n, eps)
    if raw != fact:
        raise IdentityMismatchError(f"margin raw {raw} != factored {fact} at n={n}, eps={eps}")
    return raw


@dataclass(frozen=True)
class SlopeReport:
    n: int
    eps: Fraction
    mu: Fraction
    mu_seshadri: Fraction
    margin: Fraction
    seshadri: Fraction

    @property
    def unstable(self) -> bool:
        return self.margin < 0


def slope_report(n: int, eps) -> SlopeReport:
    eps = _check_eps(eps)
    mu = slope_mu(n, eps)
    mu_s = quotient_slope_seshadri(n, eps)
    return SlopeReport(n=n, eps=eps, mu=mu, mu_seshadri=mu_s, margin=mu_s - mu, seshadri=1 - eps)


# certificate

_EPS = Poly.identity()


def margin_numerator_poly(n: int) -> Poly:
    """(1-eps)^2 (Num_2 Den_1 - Num_1 Den_2) as a polynomial in eps."""
    one_minus = 1 - _EPS
    return one_minus * (
        one_minus * num2(n, _EPS) * den1(n, _EPS) - num1(n, _EPS) * one_minus * den2(n, _EPS)
    )


@dataclass(frozen=True)
class InstabilityCertificate:
    n: int
    margin_numerator: Poly
    sign: SignCertificate
    factored_form_checked: bool
    notes: tuple = field(default=())

    @property
    def valid(self) -> bool:
        return self.sign.positive and self.factored_form_checked


def certificate_from_polynomial(n: int, poly: Poly) -> InstabilityCertificate:
    """Check a candidate margin polynomial: factored identity and Sturm sign on (0, 1)."""
    expected = (1 - _EPS) * factored_margin(n, _EPS)
    return InstabilityCertificate(
        n=n,
        margin_numerator=poly,
        sign=certify_sign(poly, 0, 1),
        factored_form_checked=(poly == expected),
    )


def certify_slope_instability(n: int) -> InstabilityCertificate:
    """Machine proof that mu_Sesh(E) < mu for every eps in (0, 1).

    Den_1 > 0 and Den_2 < 0 on (0, 1), and the margin polynomial carries an
    extra positive factor (1 - eps), so positivity of the polynomial on the
    open interval is equivalent to instability at every polarization.
    """
    _check_n(n)
    return certificate_from_polynomial(n, margin_numerator_poly(n))


def den_signs_certified(n: int) -> tuple[SignCertificate, SignCertificate]:
    """Sturm certificates for Den_1 > 0 and Den_2 < 0 on (0, 1)."""
    return certify_sign(den1(n, _EPS), 0, 1), certify_sign(den2(n, _EPS), 0, 1)
