"""Backbone recursions, coefficient selection and recursive bounds."""

import math

import numpy as np
import pytest

from gwidiv import (
    CaseError,
    CaseTag,
    CoeffRole,
    ParamSet,
    classify,
    enum_log_hellinger,
    exact_log_hellinger,
    lambda_weights,
    log_bound_sequence,
    log_hellinger_bounds,
    recursive_log_bounds,
    run_recursion,
    select_coeffs,
    sp3d_log_delta,
    upper_candidates,
)
from gwidiv.params import phi_eval

from conftest import random_any, random_params


class TestRunRecursion:
    def test_slope_beta_lambda_freezes_a(self):
        """q = beta_lambda freezes the recursion: a == 0, b == p - alpha_lambda."""
        params = ParamSet(0.8, 0.6, 2, 2)
        bl, al = lambda_weights(params, 0.5)
        trace = run_recursion(1.3, bl, params, 0.5, 12)
        assert np.all(trace.a[1:] == 0.0)
        assert np.allclose(trace.b[1:], 1.3 - al)

    def test_zero_slope(self):
        """q = 0: a == -beta_lambda; b freezes at p e^{-beta_lambda} - alpha_lambda
        from the second step on (the first step uses a_0 = 0)."""
        params = ParamSet(0.8, 0.6, 2, 1.9)
        bl, al = lambda_weights(params, 0.5)
        trace = run_recursion(0.7, 0.0, params, 0.5, 9)
        assert np.allclose(trace.a[1:], -bl)
        assert trace.b[1] == pytest.approx(0.7 - al)
        assert np.allclose(trace.b[2:], 0.7 * math.exp(-bl) - al)

    def test_one_step_unrolling(self, rng):
        for _ in range(50):
            lam = rng.uniform(0.05, 0.95)
            params = random_any(rng, lam)
            bl, al = lambda_weights(params, lam)
            p, q = rng.uniform(0.0, 3.0, size=2)
            trace = run_recursion(p, q, params, lam, 1)
            assert trace.a[0] == 0.0 and trace.b[0] == 0.0
            assert trace.a[1] == pytest.approx(q - bl)
            assert trace.b[1] == pytest.approx(p - al)

    def test_linear_interrelation_to_machine_precision(self, rng):
        for _ in range(100):
            lam = rng.uniform(0.05, 0.95)
            params = random_any(rng, lam)
            bl, al = lambda_weights(params, lam)
            p = rng.uniform(0.0, 3.0)
            q = rng.uniform(0.02, 1.1) * bl
            n = 15 if q < bl else 4
            trace = run_recursion(p, q, params, lam, n)
            expected = p / q * trace.a[1:] + p / q * bl - al
            assert np.allclose(trace.b[1:], expected, rtol=1e-15, atol=1e-12)

    def test_trichotomy(self, rng):
        """Sign/monotonicity of a_n is driven by the sign of a_1 = q - beta_lambda.

        The divergent a_1 > 0 branch saturates at inf within a few steps;
        strictness is asserted on the finite prefix.
        """
        for _ in range(300):
            lam = rng.uniform(0.05, 0.95)
            params = random_any(rng, lam)
            bl, _ = lambda_weights(params, lam)
            for q in (bl * rng.uniform(0.1, 0.95), bl, bl * rng.uniform(1.05, 1.5)):
                a = run_recursion(0.5, q, params, lam, 10).a
                if q == bl:
                    assert np.all(a[1:] == 0.0)
                elif q < bl:
                    assert np.all(a[1:] < 0.0) and np.all(np.diff(a[1:]) < 0.0)
                else:
                    finite = a[1:][np.isfinite(a[1:])]
                    assert np.all(finite > 0.0) and np.all(np.diff(finite) > 0.0)


class TestSelectCoeffs:
    def test_reference_coefficient_pairs(self):
        """Upper/asymptote pairs reproduce the SP2/SP3a/SP3b/SP3c example values."""
        table = [
            ((0.8, 0.6, 2, 2), (2.021, 0.693), (2.0, 0.698)),
            ((0.8, 0.6, 2, 1.9), (1.963, 0.693), (1.949, 0.696)),
            ((0.8, 0.6, 2, 1.1), (1.501, 0.693), (1.483, 0.699)),
            ((1, 1.5, 2, 1.8), (1.960, 1.225), (1.897, 1.249)),
        ]
        for quad, asym, prop in table:
            params = ParamSet(*quad)
            a = select_coeffs(params, 0.5, CoeffRole.ASYMPTOTE)
            u = select_coeffs(params, 0.5, CoeffRole.UPPER)
            assert a.p == pytest.approx(asym[0], abs=5e-4)
            assert a.q == pytest.approx(asym[1], abs=5e-4)
            assert u.p == pytest.approx(prop[0], abs=5e-4)
            assert u.q == pytest.approx(prop[1], abs=5e-4)

    def test_lower_pair_with_equal_immigration(self, rng):
        for _ in range(20):
            params = random_params(rng, "SP2")
            pair = select_coeffs(params, 0.5, CoeffRole.LOWER)
            assert pair.p == pytest.approx(params.alpha_a, abs=1e-14)

    def test_role_case_compatibility(self):
        sp2 = ParamSet(0.8, 0.6, 2, 2)
        ni = ParamSet(4, 2, 0, 0)
        sp4 = ParamSet(1, 1, 2, 3)
        with pytest.raises(CaseError):
            select_coeffs(sp2, 0.5, CoeffRole.EXACT)
        with pytest.raises(CaseError):
            select_coeffs(ni, 0.5, CoeffRole.LOWER)
        with pytest.raises(CaseError):
            select_coeffs(sp4, 0.5, CoeffRole.ASYMPTOTE)
        with pytest.raises(CaseError):
            select_coeffs(sp2, 0.5, CoeffRole.HORIZONTAL)

    def test_trivial_pairs_on_sp3d_sp4(self):
        for quad in [(1.8, 0.9, 1.2, 3.0), (1, 1, 2, 3)]:
            params = ParamSet(*quad)
            bl, al = lambda_weights(params, 0.5)
            pair = select_coeffs(params, 0.5, CoeffRole.UPPER)
            assert (pair.p, pair.q) == (al, bl)

    def test_selected_pairs_dominate_phi_on_lattice(self, rng):
        """Every non-trivial upper construction majorizes phi on 0..60."""
        for _ in range(60):
            lam = rng.uniform(0.1, 0.9)
            case = ("SP2", "SP3a", "SP3b", "SP3c")[rng.integers(0, 4)]
            params = random_params(rng, case, lam)
            bl, al = lambda_weights(params, lam)
            for pair in upper_candidates(params, lam):
                r, s = pair.p - al, pair.q - bl
                for x in range(61):
                    assert phi_eval(params, lam, float(x)).phi <= r + s * x + 1e-9


class TestCoefficientMonotonicity:
    def test_a_monotone_in_q(self, rng):
        """q1 < q2 implies a_n^{q1} < a_n^{q2} for all n.

        Slopes are drawn in the convergent regime the bounds actually use
        (both below beta_lambda) where the sequences stay finite.
        """
        for _ in range(200):
            lam = rng.uniform(0.05, 0.95)
            params = random_any(rng, lam)
            bl, _ = lambda_weights(params, lam)
            q2 = rng.uniform(0.02, 1.0) * bl
            q1 = q2 * rng.uniform(0.05, 0.95)
            a1 = run_recursion(0.5, q1, params, lam, 8).a
            a2 = run_recursion(0.5, q2, params, lam, 8).a
            assert np.all(a1[1:] < a2[1:])

    def test_b_monotone_in_q_and_p(self, rng):
        """b-sequence dominance in each coefficient separately."""
        for _ in range(200):
            lam = rng.uniform(0.05, 0.95)
            params = random_any(rng, lam)
            bl, _ = lambda_weights(params, lam)
            p = rng.uniform(0.05, 2.0)
            q2 = rng.uniform(0.02, 1.0) * bl
            q1 = q2 * rng.uniform(0.05, 0.95)
            b1 = run_recursion(p, q1, params, lam, 8).b
            b2 = run_recursion(p, q2, params, lam, 8).b
            assert np.all(b1[2:] < b2[2:]) and b1[1] == b2[1]
            q = rng.uniform(0.02, 1.0) * bl
            p1 = rng.uniform(0.0, 2.0)
            p2 = p1 + rng.uniform(0.01, 1.0)
            b1 = run_recursion(p1, q, params, lam, 8).b
            b2 = run_recursion(p2, q, params, lam, 8).b
            assert np.all(b1[1:] < b2[1:])


class TestExactLogHellinger:
    def test_horizon_zero(self):
        assert exact_log_hellinger(ParamSet(4, 2, 0, 0), 0.5, 3, 0) == 0.0

    def test_sp1_one_step_closed_form(self, rng):
        """n=1 on SP1: (q_E - beta_lambda) * (omega0 + alpha_a/beta_a)."""
        for _ in range(30):
            lam = rng.uniform(0.05, 0.95)
            params = random_params(rng, "SP1", lam)
            bl, _ = lambda_weights(params, lam)
            q_e = params.beta_a**lam * params.beta_h ** (1 - lam)
            omega0 = int(rng.integers(1, 5))
            expected = (q_e - bl) * (omega0 + params.alpha_a / params.beta_a)
            assert exact_log_hellinger(params, lam, omega0, 1) == pytest.approx(expected, rel=1e-12)

    def test_matches_enumeration_oracle(self):
        params = ParamSet(0.5, 0.25, 0, 0)
        value = exact_log_hellinger(params, 0.5, 1, 3)
        log_enum, err = enum_log_hellinger(params, 0.5, 1, 3)
        assert math.exp(log_enum) <= math.exp(value) <= math.exp(log_enum) + err
        assert value == pytest.approx(log_enum, rel=1e-8)

    def test_rejects_bound_cases(self):
        with pytest.raises(CaseError):
            exact_log_hellinger(ParamSet(0.8, 0.6, 2, 2), 0.5, 1, 3)

    def test_strictly_negative_for_positive_horizons(self, rng):
        for _ in range(50):
            lam = rng.uniform(0.05, 0.95)
            case = "NI" if rng.random() < 0.5 else "SP1"
            params = random_params(rng, case, lam)
            assert exact_log_hellinger(params, lam, 1, int(rng.integers(1, 20))) < 0.0


class TestRecursiveLogBounds:
    def test_sp4_upper_is_trivial(self):
        report = recursive_log_bounds(ParamSet(1, 1, 2, 3), 0.5, 4, 7)
        assert report.log_upper == 0.0
        assert report.case is CaseTag.SP4

    def test_sandwiches_enumeration(self, rng):
        params = ParamSet(0.8, 0.6, 2, 1.9)
        for n in range(1, 5):
            report = recursive_log_bounds(params, 0.5, 10, n)
            log_enum, err = enum_log_hellinger(params, 0.5, 10, n)
            assert math.exp(report.log_lower) <= math.exp(log_enum) + err
            assert math.exp(log_enum) <= math.exp(report.log_upper)
            assert report.log_lower < report.log_upper

    def test_sp3d_separation_bound(self):
        """log upper bound <= floor(n/2) log delta with delta < 1 on SP3d."""
        params = ParamSet(1.8, 0.9, 1.2, 3.0)
        log_delta = sp3d_log_delta(params, 0.5)
        assert log_delta < 0.0
        for n in (2, 5, 10, 31):
            report = recursive_log_bounds(params, 0.5, 1, n)
            assert report.log_upper <= (n // 2) * log_delta + 1e-12

    def test_rejects_exact_cases(self):
        with pytest.raises(CaseError):
            recursive_log_bounds(ParamSet(4, 2, 0, 0), 0.5, 1, 3)

    def test_lower_strictly_below_upper(self, rng):
        for _ in range(40):
            lam = rng.uniform(0.1, 0.9)
            case = ("SP2", "SP3a", "SP3b", "SP3c", "SP3d", "SP4")[rng.integers(0, 6)]
            params = random_params(rng, case, lam)
            report = recursive_log_bounds(params, lam, int(rng.integers(1, 4)), int(rng.integers(1, 12)))
            assert report.log_lower < report.log_upper
            assert report.log_upper <= 0.0


class TestMonotoneInHorizon:
    def test_exact_and_bound_sequences_decrease(self):
        """Exact values / B^L / B^U strictly decrease in n on their cases."""
        table = [
            (ParamSet(1.2, 0.8, 0, 0), CoeffRole.EXACT),
            (ParamSet(1.1, 0.9, 1.1, 0.9), CoeffRole.EXACT),
            (ParamSet(1.25, 0.85, 2, 2), CoeffRole.LOWER),
            (ParamSet(1.25, 0.85, 2, 2), CoeffRole.UPPER),
            (ParamSet(0.8, 0.6, 2, 1.9), CoeffRole.UPPER),
            (ParamSet(0.8, 0.6, 2, 1.1), CoeffRole.UPPER),
            (ParamSet(1, 1.5, 2, 1.8), CoeffRole.UPPER),
        ]
        for params, role in table:
            pair = select_coeffs(params, 0.5, role)
            seq = log_bound_sequence(pair, params, 0.5, 2, 50)
            assert np.all(np.diff(seq[1:]) < 0.0), (params, role)

    def test_slope_limits(self):
        """(1/n) log V_n at n=200: -> 0 on NI, -> (alpha_a/beta_a) x0 on SP1."""
        from gwidiv import solve_fixed_point

        ni = ParamSet(0.8, 0.6, 0, 0)
        assert abs(exact_log_hellinger(ni, 0.5, 1, 200) / 200) < 1e-3

        sp1 = ParamSet(0.8, 0.6, 0.8, 0.6)
        bl, _ = lambda_weights(sp1, 0.5)
        q_e = math.sqrt(0.8 * 0.6)
        x0 = solve_fixed_point(q_e, bl).x0
        target = sp1.alpha_a / sp1.beta_a * x0
        assert abs(exact_log_hellinger(sp1, 0.5, 1, 200) / 200 - target) < 1e-3


def test_dispatcher_log_hellinger_bounds(rng):
    for _ in range(30):
        lam = rng.uniform(0.1, 0.9)
        params = random_any(rng, lam)
        report = log_hellinger_bounds(params, lam, 2, 4)
        if classify(params, lam).exactly_computable:
            assert report.log_exact is not None
            assert report.log_lower == report.log_exact
        else:
            assert report.log_exact is None
            assert report.log_lower < report.log_upper


def test_dispatcher_horizon_zero_is_trivial_for_every_case(rng):
    for case in ("NI", "SP1", "SP2", "SP3d", "SP4"):
        params = random_params(rng, case)
        report = log_hellinger_bounds(params, 0.5, 3, 0)
        assert report.log_exact == 0.0
        assert report.log_lower == report.log_upper == 0.0
