"""Per-eps certification of the regularity hypotheses for the extremal potential.

:func:`verify_regularity` runs seven checks.  The five boundary and positivity
checks are exact.  The Hessian check pairs the exact criterion Q > 0 with a
floating-point eigenvalue sample.  The determinant check compares closed and
numeric determinants at sample points.

:func:`epsilon0_search` scans eps and bisects toward the first failure.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, VanishingDenominatorError
from .exactmath import Poly, RatFunc, certify_sign, poly_eval, taylor_shift
from .extremal import ExtremalProfile, build_profile, delta_bracket, gamma_denominator, RHO
from .exactmath import sturm_root_count
from .toric import PotentialModel, det_closed, hessian_s, interior_grid

CHECK_ORDER = (
    "order3AtOne",
    "qAtOne",
    "qAtEps",
    "residueOne",
    "qPositive",
    "hessianPD",
    "detForm",
)

DET_RTOL = 1e-8
SWEEP_MARGINS = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witness: dict

    def as_dict(self) -> dict:
        return {"passed": self.passed, "witness": self.witness}


@dataclass(frozen=True)
class RegularityReport:
    n: int
    eps: Fraction
    checks: dict

    @property
    def overall(self) -> bool:
        return all(self.checks[name].passed for name in CHECK_ORDER)

    @property
    def first_failure(self) -> Optional[str]:
        for name in CHECK_ORDER:
            if not self.checks[name].passed:
                return name
        return None

    def __getattr__(self, name):
        checks = self.__dict__.get("checks", {})
        if name in checks:
            return checks[name]
        raise AttributeError(name)

    def as_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "eps": str(self.eps),
            "overall": self.overall,
            "first_failure": self.first_failure,
            "checks": {name: self.checks[name].as_dict() for name in CHECK_ORDER},
        }


def _s(v) -> str:
    return str(Fraction(v))


def _check_order3(p: ExtremalProfile) -> CheckResult:
    num = p.hpp_num
    d1 = num.derivative()
    d2 = d1.derivative()
    vals = [num(1), d1(1), d2(1)]
    P = p.P
    n = p.n
    ident = 2 * n + n * (n - 1) * P(1) + 2 * n * P.derivative()(1) + P.derivative().derivative()(1)
    ok = all(v == 0 for v in vals) and ident == 0
    return CheckResult(ok, {"values_at_1": [_s(v) for v in vals], "second_derivative_identity": _s(ident)})


def _check_q_at_one(p: ExtremalProfile) -> CheckResult:
    Q = p.Q
    vals = [Q(1), Q.derivative()(1), Q.derivative().derivative()(1)]
    ok = vals[0] == 0 and vals[1] == 0 and vals[2] == 2
    return CheckResult(ok, {"Q(1)": _s(vals[0]), "Q'(1)": _s(vals[1]), "Q''(1)": _s(vals[2])})


def _check_q_at_eps(p: ExtremalProfile) -> CheckResult:
    n, e, Q = p.n, p.eps, p.Q
    q0, q1 = Q(e), Q.derivative()(e)
    target = e ** (n - 2) * (1 - e)
    return CheckResult(q0 == 0 and q1 == target, {"Q(eps)": _s(q0), "Q'(eps)": _s(q1), "expected": _s(target)})


def residue_routes(p: ExtremalProfile) -> tuple[Optional[Fraction], Optional[Fraction]]:
    """Residue of h'' at eps from Q'(eps) and from the Laurent expansion."""
    e = p.eps
    dq = p.Q.derivative()(e)
    direct = None
    if e != 0 and dq != 0:
        direct = poly_eval(p.hpp_num, e) / ((1 - e) * e * dq)
    num = taylor_shift(p.hpp.num, e)
    den = taylor_shift(p.hpp.den, e)
    laurent = None
    if den.coeff(0) == 0 and den.coeff(1) != 0:
        laurent = num.coeff(0) / den.coeff(1)
    elif den.coeff(0) != 0:
        laurent = Fraction(0)
    return direct, laurent


def _check_residue(p: ExtremalProfile) -> CheckResult:
    if p.eps == 0:
        return CheckResult(p.hpp.is_zero(), {"note": "no exceptional facet at eps=0", "hpp_zero": p.hpp.is_zero()})
    direct, laurent = residue_routes(p)
    ok = direct == 1 and laurent == 1
    return CheckResult(ok, {
        "from_Q_prime": None if direct is None else _s(direct),
        "from_laurent": None if laurent is None else _s(laurent),
    })


def _check_q_positive(p: ExtremalProfile):
    cert = certify_sign(p.Q, p.eps, 1)
    return CheckResult(cert.positive, cert.as_dict()), cert


def rank_one_identity_holds(p: ExtremalProfile) -> bool:
    """1 + rho(1-rho) h'' == rho^(n-1) (1-rho)^2 / Q as rational functions."""
    lhs = 1 + RatFunc(RHO * (1 - RHO)) * p.hpp
    rhs = RatFunc(RHO ** (p.n - 1) * (1 - RHO) ** 2, p.Q)
    return lhs == rhs


def min_eigenvalue_sample(
    n: int,
    eps,
    grid_points_per_axis: int,
    hpp_override: Optional[Callable[[float], float]] = None,
    model: Optional[PotentialModel] = None,
):
    """Smallest Hessian eigenvalue at grid points with every facet value >= 1e-3.

    ``hpp_override`` replaces h'' (a negative control); points where the
    model is undefined are skipped.
    """
    if grid_points_per_axis < 2:
        raise DomainError("grid needs at least 2 points per axis")
    if model is None:
        model = PotentialModel.extremal(n, eps)
    out = []
    for x in interior_grid(n, model.eps, grid_points_per_axis, floor=1e-3):
        try:
            if hpp_override is None:
                H = hessian_s(model, x)
            else:
                H = _fs_hessian(x) + 0.5 * _t_block(n) * hpp_override(float(x[:-1].sum()))
        except (DomainError, ArithmeticError):
            continue
        out.append((x, float(np.linalg.eigvalsh(H).min())))
    return out


def _fs_hessian(x) -> np.ndarray:
    n = len(x)
    return 0.5 * (np.diag(1.0 / x) + np.full((n, n), 1.0 / (1 - x.sum())))


def _t_block(n) -> np.ndarray:
    T = np.zeros((n, n))
    T[: n - 1, : n - 1] = 1.0
    return T


def _check_hessian(p: ExtremalProfile, model: PotentialModel, q_positive: bool, grid: int) -> CheckResult:
    identity = rank_one_identity_holds(p)
    samples = min_eigenvalue_sample(p.n, p.eps, grid, model=model)
    disagreements = 0
    lowest = math.inf
    for x, lam in samples:
        lowest = min(lowest, lam)
        q_sign = poly_eval(p.Q, Fraction(float(x[:-1].sum()))) > 0
        if (lam > 0) != q_sign:
            disagreements += 1
    ok = identity and q_positive and samples and lowest > 0 and disagreements == 0
    return CheckResult(bool(ok), {
        "rank_one_identity": identity,
        "samples": len(samples),
        "min_eigenvalue": format(lowest, ".17g") if samples else None,
        "sign_disagreements": disagreements,
    })


def _check_det(p: ExtremalProfile, model: PotentialModel, grid: int) -> CheckResult:
    worst = 0.0
    count = 0
    for x in interior_grid(p.n, p.eps, grid, floor=1e-3):
        closed = det_closed(model, x)
        numeric = float(np.linalg.det(hessian_s(model, x)))
        worst = max(worst, abs(numeric - closed) / abs(closed))
        count += 1
    sweep = boundary_sweep(model)
    sweep_ok = all(math.isfinite(v) and v > 0 for v in sweep)
    ok = count > 0 and worst <= DET_RTOL and sweep_ok
    return CheckResult(ok, {
        "samples": count,
        "max_relative_error": format(worst, ".17g"),
        "facet_sweep": [format(v, ".17g") for v in sweep],
    })


def boundary_sweep(model: PotentialModel, margins=SWEEP_MARGINS) -> list[float]:
    """det Hess(s) * prod l_i at rho = eps + m(1 - eps) for shrinking m.

    The bounded positive limit is what the determinant condition on the
    symplectic potential requires.
    """
    n, e = model.n, float(model.eps)
    vals = []
    for m in margins:
        rho = e + m * (1 - e)
        # split rho evenly among x_1..x_{n-1}; keep x_n and 1 - r comparable
        xn = (1 - rho) / 2
        x = np.array([rho / (n - 1)] * (n - 1) + [xn])
        facets = model.polytope.facet_values(x)
        det = float(np.prod(1.0 / x) / 2**n / (1 - x.sum())) * _w(model, rho)
        vals.append(det * float(np.prod(facets)))
    return vals


def _w(model: PotentialModel, rho: float) -> float:
    """1 + rho(1-rho)h'' via rho^(n-1)(1-rho)^2/Q, finite up to the facet."""
    return 1.0 / model.inv_w.evalf(rho)


def verify_regularity(n: int, eps, sample_grid: int = 4) -> RegularityReport:
    """Run every regularity check at (n, eps).

    Construction failures (a vanishing denominator in the constants)
    propagate as :class:`VanishingDenominatorError`; check failures are
    recorded in the report.
    """
    p = build_profile(n, eps)
    model = PotentialModel.from_profile(p)
    q_pos, _ = _check_q_positive(p)
    checks = {
        "order3AtOne": _check_order3(p),
        "qAtOne": _check_q_at_one(p),
        "qAtEps": _check_q_at_eps(p),
        "residueOne": _check_residue(p),
        "qPositive": q_pos,
    }
    if q_pos.passed:
        checks["hessianPD"] = _check_hessian(p, model, True, sample_grid)
        checks["detForm"] = _check_det(p, model, sample_grid)
    else:
        checks["hessianPD"] = CheckResult(False, {"reason": "Q has a root in (eps, 1)"})
        checks["detForm"] = CheckResult(False, {"reason": "Q has a root in (eps, 1)"})
    return RegularityReport(n=n, eps=p.eps, checks=checks)


def construction_singularities(n: int, lo=0, hi=1) -> dict:
    """Sturm counts of roots of the gamma and delta denominators in (lo, hi]."""
    e = Poly.identity()
    bracket = delta_bracket(n, RatFunc(e))
    return {
        "gamma": sturm_root_count(gamma_denominator(n, e), lo, hi),
        "delta": sturm_root_count(bracket.num, lo, hi),
    }


# eps0 search

@dataclass(frozen=True)
class EpsOutcome:
    eps: Fraction
    status: str  # "pass", "fail" or "construction_error"
    first_failure: Optional[str]
    report: Optional[RegularityReport]
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def row(self) -> dict:
        return {
            "eps": str(self.eps),
            "eps_float": format(float(self.eps), ".17g"),
            "status": self.status,
            "first_failure": self.first_failure or "",
        }


def evaluate_eps(n: int, eps, sample_grid: int = 3) -> EpsOutcome:
    eps = Fraction(eps)
    try:
        rep = verify_regularity(n, eps, sample_grid)
    except VanishingDenominatorError as exc:
        return EpsOutcome(eps, "construction_error", "construction", None, str(exc))
    return EpsOutcome(eps, "pass" if rep.overall else "fail", rep.first_failure, rep)


@dataclass(frozen=True)
class Epsilon0Bracket:
    n: int
    last_pass: Optional[Fraction]
    first_fail: Optional[Fraction]
    anomalies: tuple
    scan: tuple
    bisection: tuple = field(default=())

    @property
    def all_pass(self) -> bool:
        return self.first_fail is None

    @property
    def width(self) -> Optional[Fraction]:
        if self.last_pass is None or self.first_fail is None:
            return None
        return self.first_fail - self.last_pass

    def as_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "verdict": "all-pass" if self.all_pass else "bracket",
            "last_pass": None if self.last_pass is None else str(self.last_pass),
            "first_fail": None if self.first_fail is None else str(self.first_fail),
            "width": None if self.width is None else str(self.width),
            "anomalies": [
                {**o.row(), "report": o.report.as_dict() if o.report else None, "detail": o.detail}
                for o in self.anomalies
            ],
            "scan": [o.row() for o in self.scan],
            "bisection": [o.row() for o in self.bisection],
        }


def _eval_star(args):
    n, eps, grid = args
    return evaluate_eps(n, eps, grid)


def _map(items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [_eval_star(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_eval_star, items))


def epsilon0_search(
    n: int,
    resolution,
    refine: int,
    *,
    jobs: int = 1,
    sample_grid: int = 3,
    evaluate: Optional[Callable[[int, Fraction], EpsOutcome]] = None,
) -> Epsilon0Bracket:
    """Scan eps over multiples of ``resolution`` in (0, 1), then bisect.

    Pass/fail is not assumed monotone: every pass found above the first
    failing grid point is returned as an anomaly with its report.
    ``evaluate`` replaces the per-eps verifier (used by tests).
    """
    resolution = Fraction(resolution)
    if not 0 < resolution <= Fraction(1, 10):
        raise DomainError(f"resolution must lie in (0, 1/10], got {resolution}")
    if not isinstance(refine, int) or refine < 0:
        raise DomainError(f"refine must be a non-negative integer, got {refine!r}")
    grid = []
    k = 1
    while k * resolution < 1:
        grid.append(k * resolution)
        k += 1
    if evaluate is None:
        scan = _map([(n, e, sample_grid) for e in grid], jobs if jobs else os.cpu_count() or 1)

        def evaluate(nn, e):
            return evaluate_eps(nn, e, sample_grid)
    else:
        scan = [evaluate(n, e) for e in grid]

    first_fail_idx = next((i for i, o in enumerate(scan) if not o.passed), None)
    if first_fail_idx is None:
        return Epsilon0Bracket(n, grid[-1] if grid else None, None, (), tuple(scan))
    anomalies = tuple(o for o in scan[first_fail_idx + 1:] if o.passed)
    if first_fail_idx == 0:
        lo = None
    else:
        lo = scan[first_fail_idx - 1].eps
    hi = scan[first_fail_idx].eps
    steps = []
    left = lo if lo is not None else Fraction(0)
    for _ in range(refine):
        mid = (left + hi) / 2
        out = evaluate(n, mid)
        steps.append(out)
        if out.passed:
            left = mid
            lo = mid
        else:
            hi = mid
    return Epsilon0Bracket(n, lo, hi, anomalies, tuple(scan), tuple(steps))
