"""Moment polytope, symplectic potentials and Abreu's scalar curvature.

Momentum coordinates are x = (x_1, ..., x_n); write r = sum x_i and
rho = x_1 + ... + x_{n-1}.  The blowup polytope is the simplex with the edge
{x_1 = ... = x_{n-1} = 0} cut off at depth eps.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, NumericError
from .exactmath import Poly, RatFunc
from .extremal import ExtremalProfile, build_profile, evaluate_h, scalar_from_A

RHO = Poly.identity()


@dataclass(frozen=True)
class Facet:
    """l(x) = <x, normal> - offset >= 0."""

    normal: tuple
    offset: Fraction

    def __call__(self, x) -> float:
        return float(np.dot(self.normal, x)) - float(self.offset)


@dataclass(frozen=True)
class Polytope:
    n: int
    facets: tuple

    def facet_values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.array([f(x) for f in self.facets])

    def is_interior(self, x, margin: float = 0.0) -> bool:
        return bool(np.all(self.facet_values(x) > margin))


@dataclass(frozen=True)
class MomentPoint:
    x: np.ndarray

    @classmethod
    def of(cls, coords: Sequence[float]) -> "MomentPoint":
        return cls(np.asarray(coords, dtype=float))

    @property
    def r(self) -> float:
        return float(self.x.sum())

    @property
    def rho(self) -> float:
        return float(self.x[:-1].sum())


def _coords(x) -> np.ndarray:
    return x.x if isinstance(x, MomentPoint) else np.asarray(x, dtype=float)


def simplex(n: int) -> Polytope:
    """The standard simplex x_i >= 0, sum x_i <= 1, in any dimension n >= 1."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"need integer n >= 1, got {n!r}")
    facets = [Facet(tuple(int(i == k) for i in range(n)), Fraction(0)) for k in range(n)]
    facets.append(Facet(tuple([-1] * n), Fraction(-1)))
    return Polytope(n, tuple(facets))


def polytope_for(n: int, eps) -> Polytope:
    """Facets x_i >= 0, sum x_i <= 1 and, for eps > 0, x_1 + ... + x_{n-1} >= eps."""
    if not isinstance(n, int) or n < 3:
        raise DomainError(f"need integer n >= 3, got {n!r}")
    eps = Fraction(eps)
    if not 0 <= eps < 1:
        raise DomainError(f"eps must lie in [0, 1), got {eps}")
    base = simplex(n)
    if eps == 0:
        return base
    return Polytope(n, base.facets + (Facet(tuple([1] * (n - 1) + [0]), eps),))


def guillemin_potential(p: Polytope, x) -> float:
    """(1/2) sum_i l_i log l_i over the facets."""
    vals = p.facet_values(_coords(x))
    if np.any(vals <= 0):
        raise DomainError("Guillemin potential needs a strictly interior point")
    return 0.5 * float(np.sum(vals * np.log(vals)))


def interior_grid(n: int, eps, k: int, margin: Optional[float] = None, floor: float = 0.0):
    """Deterministic k^n grid mapped into the interior of the polytope.

    Parameters t in (0,1)^n map as rho = eps + (1-eps) t_1, x_n = (1-rho) t_2,
    and t_3..t_n split rho among x_1..x_{n-1} by stick breaking.  The t-values
    are linspace(margin, 1-margin, k), or cell centres when margin is None.
    Points whose smallest facet value is at most ``floor`` are dropped.
    """
    eps_exact = Fraction(eps)
    eps = float(eps_exact)
    if k < 1:
        raise DomainError("grid needs at least one point per axis")
    if margin is None:
        ts = (np.arange(k) + 0.5) / k
    else:
        ts = np.linspace(margin, 1 - margin, k) if k > 1 else np.array([0.5])
    poly = polytope_for(n, eps_exact)
    out = []
    for t in itertools.product(ts, repeat=n):
        rho = eps + (1 - eps) * t[0]
        xn = (1 - rho) * t[1]
        parts, left = [], 1.0
        for s in t[2:]:
            parts.append(left * s)
            left *= 1 - s
        parts.append(left)
        x = np.array([rho * w for w in parts] + [xn])
        if poly.facet_values(x).min() > floor:
            out.append(x)
    return out


@dataclass(frozen=True)
class PotentialModel:
    """s = (1/2)(sum x_i log x_i + (1-r) log(1-r) + h(rho)).

    ``profile`` is None for the Guillemin potential of the simplex (h = 0).
    """

    n: int
    eps: Fraction
    profile: Optional[ExtremalProfile]
    A: RatFunc
    inv_w: RatFunc
    scalar: RatFunc

    @classmethod
    def extremal(cls, n: int, eps) -> "PotentialModel":
        return cls.from_profile(build_profile(n, eps))

    @classmethod
    def from_profile(cls, profile: ExtremalProfile) -> "PotentialModel":
        n = profile.n
        # 1/(1 + rho(1-rho)h'') = Q / (rho^(n-1) (1-rho)^2)
        inv_w = RatFunc(profile.Q, RHO ** (n - 1) * (1 - RHO) ** 2)
        return cls(n, profile.eps, profile, profile.A, inv_w, scalar_from_A(n, profile.A))

    @classmethod
    def guillemin(cls, n: int) -> "PotentialModel":
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"need integer n >= 1, got {n!r}")
        one = RatFunc(Poly([1]))
        return cls(n, Fraction(0), None, one, one, scalar_from_A(n, one))

    @property
    def polytope(self) -> Polytope:
        if self.profile is None:
            return simplex(self.n)
        return polytope_for(self.n, self.eps)

    def _check(self, x):
        x = _coords(x)
        if x.shape != (self.n,):
            raise DomainError(f"point must have {self.n} coordinates")
        r = x.sum()
        rho = x[:-1].sum()
        if np.any(x <= 0) or r >= 1 or (self.profile is not None and rho <= float(self.eps)):
            raise DomainError(f"point {x} is not strictly interior")
        return x, float(r), float(rho)

    def hpp(self, rho: float) -> float:
        if self.profile is None:
            return 0.0
        if self.profile.Q.is_zero():
            return 0.0
        q = _qfloat(self.profile, rho)
        if q == 0.0 or not math.isfinite(q):
            raise NumericError(f"Q vanishes at rho={rho}: h'' is singular")
        return self.profile.hpp.evalf(rho)

    def potential(self, x, tol: float = 1e-13) -> float:
        x, r, rho = self._check(x)
        base = float(np.sum(x * np.log(x))) + (1 - r) * math.log(1 - r)
        h = 0.0 if self.profile is None else evaluate_h(self.profile, rho, tol)
        return 0.5 * (base + h)


def _qfloat(profile, rho):
    acc = 0.0
    for c in reversed(profile.Q.coeffs):
        acc = acc * rho + float(c)
    return acc


def hessian_s(model: PotentialModel, x) -> np.ndarray:
    """s_ij = s^FS_ij + (h''/2) T_ij, T the all-ones block on indices < n."""
    x, r, rho = model._check(x)
    n = model.n
    s = 0.5 * (np.diag(1.0 / x) + np.full((n, n), 1.0 / (1 - r)))
    s[: n - 1, : n - 1] += 0.5 * model.hpp(rho)
    return s


def inverse_hessian(model: PotentialModel, x) -> np.ndarray:
    """Closed-form inverse of :func:`hessian_s` written through A(rho).

    With w = 1 + rho(1-rho)h'', the mixed block uses (1 - rho A)/(1 - rho) = 1/w.
    """
    x, r, rho = model._check(x)
    n = model.n
    if model.profile is not None:
        model.hpp(rho)  # raises where Q vanishes
    A = model.A.evalf(rho)
    B = model.inv_w.evalf(rho)
    xi, xn = x[: n - 1], x[n - 1]
    inv = np.empty((n, n))
    inv[: n - 1, : n - 1] = 2 * (np.diag(xi) - A * np.outer(xi, xi))
    inv[: n - 1, n - 1] = inv[n - 1, : n - 1] = -2 * xi * xn * B
    inv[n - 1, n - 1] = 2 * xn / (1 - rho) * (1 - rho - xn + xn * rho * B)
    return inv


def _fd_sum(model: PotentialModel, x: np.ndarray, h: float) -> float:
    n = model.n
    cache = {}

    def inv_at(offset):
        key = tuple(offset)
        if key not in cache:
            p = x.copy()
            for i, d in offset:
                p[i] += d * h
            try:
                cache[key] = inverse_hessian(model, p)
            except DomainError as exc:
                raise DomainError(f"finite-difference stencil leaves the interior at {x}") from exc
        return cache[key]

    total = 0.0
    centre = inv_at(())
    for i in range(n):
        total += (inv_at(((i, 1),))[i, i] - 2 * centre[i, i] + inv_at(((i, -1),))[i, i]) / h**2
        for j in range(i + 1, n):
            mixed = (
                inv_at(((i, 1), (j, 1)))[i, j]
                - inv_at(((i, 1), (j, -1)))[i, j]
                - inv_at(((i, -1), (j, 1)))[i, j]
                + inv_at(((i, -1), (j, -1)))[i, j]
            ) / (4 * h**2)
            total += 2 * mixed
    return -0.5 * total


def abreu_scalar_fd(model: PotentialModel, x, step: float = 1e-4, richardson: bool = False) -> float:
    """S = -(1/2) sum_ij d^2 s^ij / dx_i dx_j by central differences.

    With ``richardson`` the step and step/2 values are combined to cancel the
    O(step^2) term.
    """
    x, _, _ = model._check(x)
    if step <= 0:
        raise DomainError("step must be positive")
    if not model.polytope.is_interior(x, margin=2 * step):
        raise DomainError(f"point {x} is within 2*step of the boundary")
    coarse = _fd_sum(model, x, step)
    if not richardson:
        return coarse
    fine = _fd_sum(model, x, step / 2)
    return (4 * fine - coarse) / 3


def closed_form_scalar(model: PotentialModel, rho) -> Fraction:
    """Exact S(rho) from the reduced ODE operator applied to A."""
    rho = Fraction(rho)
    if not model.eps < rho < 1:
        raise DomainError(f"rho must lie in ({model.eps}, 1), got {rho}")
    try:
        return model.scalar(rho)
    except ZeroDivisionError as exc:
        raise NumericError(f"scalar curvature singular at rho={rho}") from exc


def det_closed(model: PotentialModel, x) -> float:
    """(1/2^n) prod x_i^-1 (1/(1-r)) (1 + rho(1-rho) h'').

    The rank-one update on the first n-1 indices scales the Fubini-Study
    determinant by 1 + rho(1-rho)h'' = rho^(n-1)(1-rho)^2/Q.
    """
    x, r, rho = model._check(x)
    hpp = model.hpp(rho)
    return float(np.prod(1.0 / x)) / 2**model.n / (1 - r) * (1 + rho * (1 - rho) * hpp)


def det_closed_as_published(model: PotentialModel, x) -> float:
    """(1/2^n) prod x_i^-1 (1/(1-r)) ((1 + h'')(1 - rho) + rho).

    Kept for comparison; it differs from the true determinant whenever
    h'' != 0 (its factor is 1 + (1-rho)h'' rather than 1 + rho(1-rho)h'').
    """
    x, r, rho = model._check(x)
    hpp = model.hpp(rho)
    return float(np.prod(1.0 / x)) / 2**model.n / (1 - r) * ((1 + hpp) * (1 - rho) + rho)


def det_times_facets(model: PotentialModel, x) -> float:
    """det Hess(s) times the product of all facet functions."""
    x = _coords(x)
    vals = model.polytope.facet_values(x)
    return float(np.linalg.det(hessian_s(model, x)) * np.prod(vals))
