import json
import pickle
from fractions import Fraction as Fr

import pytest

from blowup_extremal import extremal
from blowup_extremal.errors import VanishingDenominatorError
from blowup_extremal.exactmath import Poly
from blowup_extremal.extremal import build_profile
from blowup_extremal.regularity import (
    CHECK_ORDER,
    EpsOutcome,
    construction_singularities,
    epsilon0_search,
    evaluate_eps,
    min_eigenvalue_sample,
    rank_one_identity_holds,
    residue_routes,
    verify_regularity,
)
from blowup_extremal.toric import polytope_for

EPS = Fr(1, 100)


class TestVerify:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_small_eps_passes(self, n):
        rep = verify_regularity(n, EPS)
        assert rep.overall, rep.as_dict()
        assert rep.first_failure is None
        assert [rep.checks[k].passed for k in CHECK_ORDER] == [True] * 7

    def test_named_fields(self):
        rep = verify_regularity(3, EPS)
        assert rep.qPositive.witness["kind"] == "StrictlyPositive"
        assert rep.qAtEps.witness["Q'(eps)"] == str(EPS * (1 - EPS))

    def test_degenerate_profile(self):
        rep = verify_regularity(3, 0)
        assert rep.overall
        assert build_profile(3, 0).Q == Poly.identity() ** 2 * (1 - Poly.identity()) ** 2

    def test_residue_two_routes(self):
        for n in (3, 4, 6):
            assert residue_routes(build_profile(n, Fr(1, 20))) == (1, 1)

    def test_identity_verified(self):
        for n in range(3, 7):
            assert rank_one_identity_holds(build_profile(n, Fr(1, 30)))

    def test_deterministic(self):
        a = json.dumps(verify_regularity(4, Fr(1, 7)).as_dict())
        b = json.dumps(verify_regularity(4, Fr(1, 7)).as_dict())
        assert a == b

    def test_overall_is_conjunction(self, monkeypatch):
        # a constant shift of Q breaks both boundary conditions; the first in order is reported
        real = extremal.build_Q

        def shifted(n, eps, c):
            return real(n, eps, c) + Poly([Fr(1, 10**6)])

        monkeypatch.setattr(extremal, "build_Q", shifted)
        rep = verify_regularity(3, EPS)
        assert not rep.overall
        assert rep.first_failure == "qAtOne"
        assert not rep.qAtOne.passed and not rep.qAtEps.passed
        assert rep.qPositive.passed
        assert rep.qAtEps.witness["Q(eps)"] == str(Fr(1, 10**6))

    def test_construction_error_propagates(self, monkeypatch):
        monkeypatch.setattr(extremal, "delta_bracket_is_zero", lambda *a: True, raising=False)
        monkeypatch.setattr(extremal, "gamma_denominator", lambda n, e: 0 * e)
        with pytest.raises(VanishingDenominatorError):
            verify_regularity(3, EPS)
        out = evaluate_eps(3, EPS)
        assert out.status == "construction_error" and out.report is None

    def test_no_singularity_in_open_interval(self):
        for n in range(3, 8):
            assert construction_singularities(n, 0, Fr(999999, 1000000)) == {"gamma": 0, "delta": 0}
            assert construction_singularities(n) == {"gamma": 1, "delta": 1}

    def test_report_pickles(self):
        rep = verify_regularity(3, Fr(1, 10))
        assert pickle.loads(pickle.dumps(rep)).as_dict() == rep.as_dict()


class TestEigenSample:
    def test_positive_6_cubed(self):
        samples = min_eigenvalue_sample(3, EPS, 6)
        assert samples and all(lam > 0 for _, lam in samples)
        poly = polytope_for(3, EPS)
        assert all(poly.facet_values(x).min() >= 1e-3 for x, _ in samples)

    def test_negative_control(self):
        samples = min_eigenvalue_sample(3, EPS, 6, hpp_override=lambda rho: -1e3)
        assert any(lam < 0 for _, lam in samples)

    def test_sign_matches_q(self):
        p = build_profile(3, EPS)
        for x, lam in min_eigenvalue_sample(3, EPS, 5):
            q = p.Q(Fr(float(x[:-1].sum())))
            assert (lam > 0) == (q > 0)

    def test_grid_size_checked(self):
        with pytest.raises(ValueError):
            min_eigenvalue_sample(3, EPS, 1)


def fake_verifier(threshold, anomalies=()):
    def evaluate(n, e):
        status = "pass" if e < threshold or e in anomalies else "fail"
        return EpsOutcome(Fr(e), status, None if status == "pass" else "qPositive", None)

    return evaluate


class TestEpsilon0:
    def test_real_run_n3(self):
        b = epsilon0_search(3, Fr(1, 10), 4, jobs=1)
        assert any(o.eps == Fr(1, 10) and o.passed for o in b.scan)
        assert not b.anomalies

    def test_real_run_fine_grid(self):
        b = epsilon0_search(3, Fr(1, 50), 20)
        assert b.all_pass and b.last_pass == Fr(49, 50)
        assert Fr(1, 100) <= b.last_pass

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_harness_passes_small_eps(self, n):
        assert evaluate_eps(n, EPS).passed

    def test_bisection_width(self):
        thr = Fr(1, 3) + Fr(1, 10**9)
        b = epsilon0_search(3, Fr(1, 50), 20, evaluate=fake_verifier(thr))
        assert b.last_pass < thr <= b.first_fail
        assert b.width <= Fr(1, 50) / 2**20
        assert len(b.bisection) == 20

    def test_all_pass(self):
        b = epsilon0_search(3, Fr(1, 10), 5, evaluate=fake_verifier(2))
        assert b.all_pass and b.first_fail is None and b.last_pass == Fr(9, 10)
        assert b.as_dict()["verdict"] == "all-pass"

    def test_anomalies_reported(self):
        b = epsilon0_search(3, Fr(1, 10), 3, evaluate=fake_verifier(Fr(1, 2), anomalies={Fr(7, 10)}))
        assert [o.eps for o in b.anomalies] == [Fr(7, 10)]
        assert b.as_dict()["anomalies"][0]["eps"] == "7/10"

    def test_first_point_fails(self):
        b = epsilon0_search(3, Fr(1, 10), 4, evaluate=fake_verifier(0))
        assert b.last_pass is None and b.first_fail == Fr(1, 10) / 16

    def test_construction_status_distinct(self):
        def evaluate(n, e):
            if e == Fr(3, 10):
                return EpsOutcome(e, "construction_error", "construction", None, "gamma")
            return EpsOutcome(e, "pass", None, None)

        b = epsilon0_search(3, Fr(1, 10), 2, evaluate=evaluate)
        rows = {o.eps: o.status for o in b.scan}
        assert rows[Fr(3, 10)] == "construction_error"
        assert rows[Fr(2, 10)] == "pass"

    def test_preconditions(self):
        with pytest.raises(ValueError):
            epsilon0_search(3, Fr(1, 5), 2)
        with pytest.raises(ValueError):
            epsilon0_search(3, Fr(1, 10), -1)

    def test_parallel_matches_serial(self):
        a = epsilon0_search(4, Fr(1, 10), 0, jobs=1).as_dict()
        b = epsilon0_search(4, Fr(1, 10), 0, jobs=3).as_dict()
        assert a == b
