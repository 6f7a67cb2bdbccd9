"""Extremal symplectic potentials on Bl_{P^1} P^n in the class pi^*O(1) - eps E.

The potential is s = (1/2)(sum x_i log x_i + (1-r) log(1-r) + h(rho)) with
rho = x_1 + ... + x_{n-1}.  Requiring S = -gamma*rho - delta reduces to a
linear second-order ODE for

    A(rho) = (1 + (1-rho) h'') / (1 + rho (1-rho) h''),

whose general solution carries the four constants alpha, beta, gamma, delta.
Everything here is exact: eps is a Fraction and all profiles are built from
:class:`~blowup_extremal.exactmath.Poly` / ``RatFunc`` objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy import integrate

from .errors import DomainError, NumericError, VanishingDenominatorError
from .exactmath import Poly, RatFunc, poly_eval

RHO = Poly.identity()


def _is_zero(v) -> bool:
    return v.is_zero() if hasattr(v, "is_zero") else v == 0


def gamma_denominator(n: int, e):
    """-n e^(n+2) + (n+2) e^(n+1) + n - (n+2) e."""
    return -n * e ** (n + 2) + (n + 2) * e ** (n + 1) + n - (n + 2) * e


def _parts(n: int, e):
    D = gamma_denominator(n, e)
    K = (e ** (n + 1) - 1) / (n * (n + 1)) + (e - e**n) / (n * (n - 1))
    M = -1 + Fraction(n + 1, n - 1) * e - e ** (n - 1) + Fraction(n - 3, n - 1) * e**n
    return D, K, M


def delta_bracket(n: int, e):
    """Coefficient of delta in Q'(eps) once alpha, beta, gamma are eliminated."""
    D, K, _ = _parts(n, e)
    G = (-n * e ** (n + 1) + (n + 1) * e**n - 1) * (n + 2) / D
    return G * K + (-(n - 1) * e**n + n * e ** (n - 1) - 1) / (n * (n - 1))


@dataclass(frozen=True)
class ExtremalConstants:
    alpha: object
    beta: object
    gamma: object
    delta: object

    def linear_relations_hold(self, n: int) -> bool:
        a = -1 - self.delta / (n * (n + 1)) - self.gamma / ((n + 1) * (n + 2))
        b = Fraction(n + 1, n - 1) + self.delta / (n * (n - 1)) + self.gamma / (n * (n + 1))
        return a == self.alpha and b == self.beta

    def at(self, eps) -> "ExtremalConstants":
        """Evaluate symbolic (RatFunc-valued) constants at a rational eps."""
        return ExtremalConstants(*(f(Fraction(eps)) for f in (self.alpha, self.beta, self.gamma, self.delta)))


def _constants(n: int, e, label) -> ExtremalConstants:
    D, K, M = _parts(n, e)
    if _is_zero(D):
        raise VanishingDenominatorError("gamma", n, label)
    G = (-n * e ** (n + 1) + (n + 1) * e**n - 1) * (n + 2) / D
    bracket = G * K + (-(n - 1) * e**n + n * e ** (n - 1) - 1) / (n * (n - 1))
    if _is_zero(bracket):
        raise VanishingDenominatorError("delta", n, label)
    top = (
        e ** (n - 2) * (1 - e)
        - G * M
        + Fraction(n * (n - 3), n - 1) * e ** (n - 1)
        - (n - 1) * e ** (n - 2)
        + Fraction(n + 1, n - 1)
    )
    delta = top / bracket
    gamma = n * (n + 1) * (n + 2) * (K * delta + M) / D
    beta = Fraction(n + 1, n - 1) + delta / (n * (n - 1)) + gamma / (n * (n + 1))
    alpha = -1 - delta / (n * (n + 1)) - gamma / ((n + 1) * (n + 2))
    return ExtremalConstants(alpha=alpha, beta=beta, gamma=gamma, delta=delta)


def _check(n, eps) -> Fraction:
    if not isinstance(n, int) or n < 3:
        raise DomainError(f"need integer n >= 3, got {n!r}")
    if isinstance(eps, float):
        raise DomainError("eps must be rational in exact mode")
    eps = Fraction(eps)
    if not 0 <= eps < 1:
        raise DomainError(f"eps must lie in [0, 1), got {eps}")
    return eps


def compute_constants(n: int, eps) -> ExtremalConstants:
    """Exact alpha, beta, gamma, delta, evaluated in the order delta, gamma, beta, alpha.

    eps = 0 is accepted and gives the Fubini-Study limit delta = -n(n+1),
    alpha = beta = gamma = 0.
    """
    eps = _check(n, eps)
    return _constants(n, eps, eps)


def symbolic_constants(n: int) -> ExtremalConstants:
    """The constants as rational functions of eps."""
    return _constants(n, RatFunc(Poly.identity()), "eps")


def build_P(n: int, c: ExtremalConstants) -> Poly:
    return Poly([
        -(2 * n + c.delta) / (n * (n - 1)),
        (c.delta - c.gamma) / (n * (n + 1)),
        c.gamma / ((n + 1) * (n + 2)),
    ])


def build_Q(n: int, eps, c: ExtremalConstants) -> Poly:
    """Q = rho^(n-1) - rho^n - rho^n P(rho) - alpha - beta rho.

    ``eps`` enters only through the constants; it is accepted so callers can
    keep the profile's parameters together.
    """
    P = build_P(n, c)
    return RHO ** (n - 1) - RHO**n - RHO**n * P - c.alpha - c.beta * RHO


def hpp_numerator(n: int, c: ExtremalConstants) -> Poly:
    P = build_P(n, c)
    return RHO ** (n + 1) - RHO**n + RHO**n * P + c.alpha + c.beta * RHO


def scalar_from_A(n: int, A: RatFunc) -> RatFunc:
    """rho^2 A'' + 2(n - rho/(1-rho)) rho A' + (n(n-1) - 2n rho/(1-rho)) A + 2n/(1-rho)."""
    rho = RatFunc(RHO)
    w = rho / (1 - rho)
    A1 = A.derivative()
    A2 = A1.derivative()
    return rho * rho * A2 + 2 * (n - w) * rho * A1 + (n * (n - 1) - 2 * n * w) * A + 2 * n / (1 - rho)


@dataclass(frozen=True)
class ExtremalProfile:
    n: int
    eps: Fraction
    constants: ExtremalConstants
    P: Poly
    Q: Poly
    hpp_num: Poly
    hpp_den: Poly
    hpp: RatFunc
    A_num: Poly
    A_den: Poly
    A: RatFunc

    @property
    def degenerate(self) -> bool:
        return self.eps == 0

    def hpp_float(self, rho: float) -> float:
        return self.hpp.evalf(rho)

    def A_float(self, rho: float) -> float:
        return self.A.evalf(rho)

    def residue_at_eps(self) -> Fraction:
        """Residue of h'' at rho = eps; zero when there is no pole there."""
        den = self.hpp.den
        if poly_eval(den, self.eps) != 0:
            return Fraction(0)
        return poly_eval(self.hpp.num, self.eps) / poly_eval(den.derivative(), self.eps)

    def regular_part(self) -> RatFunc:
        """h'' - residue/(rho - eps), smooth on [eps, 1]."""
        res = self.residue_at_eps()
        if res == 0:
            return self.hpp
        return self.hpp - RatFunc(Poly([res]), Poly([-self.eps, 1]))


def build_profile(n: int, eps) -> ExtremalProfile:
    eps = _check(n, eps)
    c = _constants(n, eps, eps)
    P = build_P(n, c)
    Q = build_Q(n, eps, c)
    num = hpp_numerator(n, c)
    den = (1 - RHO) * RHO * Q
    A_num = RHO**n * P + c.alpha + c.beta * RHO
    A_den = (1 - RHO) * RHO**n
    return ExtremalProfile(
        n=n, eps=eps, constants=c, P=P, Q=Q,
        hpp_num=num, hpp_den=den, hpp=RatFunc(num, den),
        A_num=A_num, A_den=A_den, A=RatFunc(A_num, A_den),
    )


def ode_residual(profile: ExtremalProfile) -> RatFunc:
    """Left side of the reduced extremal ODE with the stored A substituted; zero on success."""
    c = profile.constants
    rho = RatFunc(RHO)
    return scalar_from_A(profile.n, profile.A) + c.gamma * rho + c.delta


def scalar_target(profile: ExtremalProfile, rho) -> Fraction:
    rho = Fraction(rho)
    if not 0 <= rho <= 1:
        raise DomainError(f"rho must lie in [0, 1], got {rho}")
    return -profile.constants.gamma * rho - profile.constants.delta


def _quad(f, a, b, tol):
    val, _err, info, *rest = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=200, full_output=1)
    if rest:
        raise NumericError(f"quadrature did not converge on [{a}, {b}]: {rest[0]}")
    return val


def evaluate_h(profile: ExtremalProfile, rho: float, tol: float = 1e-12) -> float:
    """h(rho) = c (rho-eps) log(rho-eps) + R(rho), c the residue at eps.

    R'' = h'' - c/(rho-eps) is smooth; it is integrated from rho0 = (1+eps)/2
    with the gauge h(rho0) = 0 and h'(rho0) = c (log(rho0 - eps) + 1).
    """
    eps = float(profile.eps)
    if not eps < rho < 1:
        raise DomainError(f"rho must lie in ({eps}, 1), got {rho}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    res = float(profile.residue_at_eps())
    Rpp = profile.regular_part()
    if Rpp.is_zero() and res == 0:
        return 0.0
    rho0 = (1 + eps) / 2
    R0 = -res * (rho0 - eps) * math.log(rho0 - eps)
    integral = _quad(lambda t: (rho - t) * Rpp.evalf(t), rho0, rho, tol) if Rpp.num.coeffs else 0.0
    return res * (rho - eps) * math.log(rho - eps) + R0 + integral


def evaluate_hp(profile: ExtremalProfile, rho: float, tol: float = 1e-12) -> float:
    """h'(rho) in the same gauge as :func:`evaluate_h`."""
    eps = float(profile.eps)
    if not eps < rho < 1:
        raise DomainError(f"rho must lie in ({eps}, 1), got {rho}")
    res = float(profile.residue_at_eps())
    Rpp = profile.regular_part()
    integral = _quad(Rpp.evalf, (1 + eps) / 2, rho, tol) if Rpp.num.coeffs else 0.0
    return (res * (math.log(rho - eps) + 1) if res else 0.0) + integral
