"""Tree recursion, the torus objective, and closed-form phase solvers."""

import math

import numpy as np
import pytest

from bipolymer import phases, spin


def uniform_pair(q):
    u = np.full(q, 1.0 / q)
    return u, u.copy()


class TestRecursionAndPhi:
    def test_phi_uniform_all_ones(self):
        system = spin.SpinSystem(np.ones((2, 2)), np.ones(2))
        val = phases.phi_value(system, 3, uniform_pair(2))
        assert abs(val - 2 ** (2 / 3)) < 1e-12

    def test_phi_point_mass(self):
        system = spin.hardcore(1.0)
        e0 = np.array([1.0, 0.0])
        assert abs(phases.phi_value(system, 3, (e0, e0.copy())) - 1.0) < 1e-15

    def test_phi_scale_invariant_in_each_argument(self):
        system = spin.colorings(4)
        r = np.array([0.4, 0.3, 0.2, 0.1])
        c = np.array([0.1, 0.2, 0.3, 0.4])
        base = phases._phi_raw(system.b, system.lam, 5, r, c)
        assert abs(phases._phi_raw(system.b, system.lam, 5, 3.7 * r, c) - base) < 1e-12
        assert abs(phases._phi_raw(system.b, system.lam, 5, r, 0.2 * c) - base) < 1e-12

    def test_uniform_is_coloring_fixpoint(self):
        system = spin.colorings(5)
        res = phases.recursion_residual(system, 4, uniform_pair(5))
        assert res < 1e-15

    def test_step_output_normalized(self):
        system = spin.colorings(4)
        rng = np.random.default_rng(3)
        for _ in range(5):
            r = rng.dirichlet(np.ones(4))
            c = rng.dirichlet(np.ones(4))
            r2, c2 = phases.tree_recursion_step(system, 6, (r, c))
            assert abs(r2.sum() - 1) < 1e-12 and abs(c2.sum() - 1) < 1e-12
            assert np.all(r2 >= 0) and np.all(c2 >= 0)

    def test_step_matches_linear_arithmetic(self):
        # log-space implementation vs the direct formula at benign scales
        system = spin.colorings(4)
        r = np.array([0.4, 0.3, 0.2, 0.1])
        c = np.array([0.25, 0.25, 0.25, 0.25])
        d = 5
        r2, c2 = phases.tree_recursion_step(system, d + 1, (r, c))
        raw_r = system.lam * (system.b @ c) ** d
        raw_c = system.lam * (system.b.T @ r) ** d
        assert np.max(np.abs(r2 - raw_r / raw_r.sum())) < 1e-14
        assert np.max(np.abs(c2 - raw_c / raw_c.sum())) < 1e-14

    def test_step_survives_deep_underflow(self):
        # hard-core with a nearly-frozen pair: linear powers underflow but
        # the log-space step keeps full relative accuracy
        system = spin.hardcore(1.0)
        x = 1e-14
        r = np.array([1.0, x]) / (1 + x)
        d = 500
        (r2, c2) = phases.tree_recursion_step(system, d + 1, (r, r.copy()))
        assert np.all(np.isfinite(r2))
        assert abs(r2.sum() - 1) < 1e-12

    def test_zero_normalization_raises(self):
        # spin 1 interacts with nothing: a point mass on it kills every field
        system = spin.SpinSystem(np.array([[1.0, 0.0], [0.0, 0.0]]), np.ones(2))
        occupied = np.array([0.0, 1.0])
        with pytest.raises(ValueError):
            phases.tree_recursion_step(system, 3, (occupied, occupied.copy()))

    def test_map_f_point_mass_and_sum(self):
        system = spin.SpinSystem(np.ones((3, 3)), np.ones(3))
        e0 = np.array([1.0, 0.0, 0.0])
        out = phases.map_f(system, 4, e0)
        assert np.allclose(out, e0, atol=1e-15)
        rng = np.random.default_rng(1)
        for _ in range(5):
            v = rng.dirichlet(np.ones(3))
            assert abs(phases.map_f(system, 4, v).sum() - 1) < 1e-12


class TestLMatrixSpectrum:
    @pytest.mark.parametrize("q", range(3, 11))
    def test_uniform_coloring_second_value(self, q):
        report = phases.l_matrix_spectrum(spin.colorings(q), 5, uniform_pair(q))
        assert abs(report.spectrum[0] - 1.0) < 1e-8
        assert abs(report.spectrum[1] - 1.0 / (q - 1)) < 1e-8
        assert len(report.spectrum) == q

    def test_rejects_non_fixpoint(self):
        system = spin.colorings(4)
        r = np.array([0.7, 0.1, 0.1, 0.1])
        with pytest.raises(ValueError):
            phases.l_matrix_spectrum(system, 5, (r, r.copy()))

    def test_top_singular_value_is_one_at_fixpoints(self):
        sol = phases.solve_coloring_fixpoint(4, 9)
        report = phases.l_matrix_spectrum(spin.colorings(4), 9, phases.coloring_pair(sol))
        assert abs(report.spectrum[0] - 1.0) < 1e-10

    def test_hardcore_asymmetric_dominant(self):
        report = phases.hardcore_fixpoint_report(50, 1.0, "asymmetric")
        assert report.hessian_dominant
        sol = phases.solve_hardcore_fixpoints(50, 1.0)
        expected = math.sqrt(sol.x * sol.y / ((1 + sol.x) * (1 + sol.y)))
        assert abs(report.spectrum[1] - expected) < 1e-8

    def test_hardcore_symmetric_not_dominant_at_high_activity(self):
        report = phases.hardcore_fixpoint_report(3, 5.0, "symmetric")
        assert not report.hessian_dominant
        sol = phases.solve_hardcore_fixpoints(3, 5.0)
        assert abs(report.spectrum[1] - sol.x0 / (1 + sol.x0)) < 1e-10

    def test_phase_pair_is_map_f_image(self):
        sol = phases.solve_coloring_fixpoint(4, 7)
        r, c = phases.coloring_pair(sol)
        report = phases.l_matrix_spectrum(spin.colorings(4), 7, (r, c))
        assert np.allclose(report.alpha_star, phases.map_f(spin.colorings(4), 7, r))
        assert np.allclose(report.beta_star, phases.map_f(spin.colorings(4), 7, c))
        # two-value phase vector entries are a', b'
        assert abs(report.alpha_star[0] - sol.a_prime) < 1e-12
        assert abs(report.alpha_star[-1] - sol.b_prime) < 1e-12


class TestColoringSolver:
    def test_requires_even_q_and_degree_above_q(self):
        with pytest.raises(ValueError):
            phases.solve_coloring_fixpoint(5, 10)
        with pytest.raises(ValueError):
            phases.solve_coloring_fixpoint(4, 4)
        with pytest.raises(ValueError):
            phases.solve_coloring_fixpoint(6, 6)
        phases.solve_coloring_fixpoint(6, 7)  # exists right above threshold

    @pytest.mark.parametrize("q,degree", [(4, 5), (4, 20), (6, 11), (8, 30), (10, 41)])
    def test_solution_invariants(self, q, degree):
        sol = phases.solve_coloring_fixpoint(q, degree)
        assert sol.residual <= 1e-12
        assert sol.u > 0 and sol.h > 1
        assert abs((sol.a + sol.b) - 2.0 / q) < 1e-14
        assert abs(sol.a / sol.b - sol.h) < 1e-9 * sol.h
        # the recursion itself holds: h = ((h+t)/(th+1))^(degree-1)
        lhs = math.log(sol.h)
        rhs = (degree - 1) * (
            math.log(sol.h + sol.t) - math.log(sol.t * sol.h + 1)
        )
        assert abs(lhs - rhs) < 1e-10
        # pair is an actual fixpoint of the vector recursion
        res = phases.recursion_residual(
            spin.colorings(q), degree, phases.coloring_pair(sol)
        )
        assert res < 1e-12

    def test_moderate_anchor_q4_d5(self):
        sol = phases.solve_coloring_fixpoint(4, 5)
        assert abs(sol.h - 8.7946210474) < 1e-9
        assert abs(sol.a - 0.4489515727) < 1e-9

    @pytest.mark.parametrize("degree", [5, 10, 50, 200, 1000, 2000])
    def test_ratio_growth_q4(self, degree):
        if degree <= 4:
            pytest.skip("no fixpoint")
        sol = phases.solve_coloring_fixpoint(4, degree)
        # log fields stay finite and consistent at every scale
        assert math.isfinite(sol.log_b) and math.isfinite(sol.log_b_prime)
        assert sol.log_b_prime < sol.log_b < math.log(0.5)
        if degree >= 170:
            assert sol.u > (degree - 1) / 8.0

    def test_log_and_linear_fields_agree_when_representable(self):
        sol = phases.solve_coloring_fixpoint(4, 30)
        assert abs(math.exp(sol.log_b) - sol.b) < 1e-15
        assert abs(math.exp(sol.log_b_prime) - sol.b_prime) < 1e-17


class TestColoringVerdicts:
    @pytest.mark.parametrize("degree", [170, 200, 300, 556, 1000])
    def test_maximality_window_q4(self, degree):
        report = phases.verify_coloring_maximality(4, degree)
        assert report.verdict
        assert report.b_prime_ok and report.hessian_dominant

    def test_closed_form_spectrum_matches_svd(self):
        for q, degree in ((4, 5), (4, 12), (6, 9), (88, 100), (120, 130)):
            sol = phases.solve_coloring_fixpoint(q, degree)
            closed = phases.coloring_l_spectrum_closed_form(sol)
            report = phases.l_matrix_spectrum(
                spin.colorings(q), degree, phases.coloring_pair(sol)
            )
            assert np.max(np.abs(np.array(closed) - np.array(report.spectrum))) < 1e-8

    @pytest.mark.parametrize("q,degree", [(88, 100), (90, 100), (120, 130)])
    def test_failure_window(self, q, degree):
        report = phases.verify_coloring_failure(q, degree)
        assert report.verdict and report.b_prime_large
        assert report.h_below_bound
        assert report.b_prime > report.b_prime_threshold

    def test_failure_window_preconditions(self):
        with pytest.raises(ValueError):
            phases.verify_coloring_failure(4, 100)  # q far below the window
        with pytest.raises(ValueError):
            phases.verify_coloring_failure(120, 100)  # q >= degree


class TestHardcoreSolver:
    def test_lambda_c_values(self):
        assert abs(phases.hardcore_lambda_c(3) - 4.0) < 1e-12
        assert phases.hardcore_lambda_c(2) == math.inf
        lc50 = phases.hardcore_lambda_c(50)
        assert abs(lc50 - 49**49 / 48**50) < 1e-12

    def test_unique_below_threshold(self):
        sol = phases.solve_hardcore_fixpoints(3, 2.0)
        assert sol.unique and sol.x is None
        assert abs(sol.x0 - (2.0 / (1 + sol.x0) ** 2)) < 1e-12

    def test_boundary_activity_counts_as_unique(self):
        sol = phases.solve_hardcore_fixpoints(3, 4.0)
        assert sol.unique
        assert abs(sol.x0 - 1.0) < 1e-9  # g(1) = 4/4 = 1 at the threshold

    def test_degenerate_degree_two(self):
        sol = phases.solve_hardcore_fixpoints(2, 2.0)
        assert sol.unique
        assert abs(sol.x0 - 1.0) < 1e-12  # x = 2/(1+x): x=1

    def test_golden_pair_at_lam5_degree3(self):
        sol = phases.solve_hardcore_fixpoints(3, 5.0)
        assert not sol.unique
        # x y = 1 exactly for this instance; x + y = 3
        assert abs(sol.x * sol.y - 1.0) < 1e-10
        assert abs(sol.x + sol.y - 3.0) < 1e-10

    @pytest.mark.parametrize("degree,lam", [(50, 1.0), (100, 0.5), (200, 0.25), (60, 1.0)])
    def test_asymmetric_invariants(self, degree, lam):
        sol = phases.solve_hardcore_fixpoints(degree, lam)
        assert not sol.unique
        d = degree - 1
        assert 0 < sol.x < sol.x0 < sol.y <= lam
        assert sol.x < 1.0 / (degree - 2) < sol.y
        # defining equations in logs
        assert abs(sol.log_x - (math.log(lam) - d * math.log1p(sol.y))) < 1e-9
        assert abs(math.log(sol.y) - (math.log(lam) - d * math.log1p(sol.x))) < 1e-9
        # pair is a fixpoint of the raw vector recursion
        rep = phases.hardcore_fixpoint_report(degree, lam, "asymmetric")
        assert rep.residual < 1e-9
        assert abs(rep.spectrum[0] - 1.0) < 1e-8

    def test_phase_vectors(self):
        sol = phases.solve_hardcore_fixpoints(50, 1.0)
        assert abs(sol.alpha_star.sum() - 1) < 1e-12
        assert abs(sol.beta_star.sum() - 1) < 1e-12
        # occupied side concentrates: beta* ~ (1/(1+lam), lam/(1+lam))
        assert sol.beta_star[1] > 0.49
        assert sol.alpha_star[1] < 1e-10

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            phases.solve_hardcore_fixpoints(1, 1.0)
        with pytest.raises(ValueError):
            phases.solve_hardcore_fixpoints(3, 0.0)
        with pytest.raises(ValueError):
            phases.hardcore_pair(phases.solve_hardcore_fixpoints(3, 2.0), "asymmetric")


class TestHardcoreMaximality:
    @pytest.mark.parametrize("degree,lam", [(50, 1.0), (100, 0.5), (200, 0.25), (60, 1.0)])
    def test_certificates(self, degree, lam):
        report = phases.verify_hardcore_maximality(degree, lam)
        assert report.verdict
        assert report.deviation <= report.deviation_threshold
        assert report.solution.x <= report.x_bound
        assert report.hessian_dominant

    def test_preconditions(self):
        with pytest.raises(ValueError):
            phases.verify_hardcore_maximality(30, 1.0)  # degree too small
        with pytest.raises(ValueError):
            phases.verify_hardcore_maximality(60, 0.5)  # lam*degree = 30 < 50
        with pytest.raises(ValueError):
            phases.verify_hardcore_maximality(100, 1.5)  # outside normalized class


class TestMaximizerSearch:
    def test_all_ones_unique_uniform(self):
        system = spin.SpinSystem(np.ones((2, 2)), np.ones(2))
        maxs = phases.find_maximizers(system, 3, n_starts=30, seed=0)
        assert len(maxs) == 1
        assert np.max(np.abs(maxs[0].r - 0.5)) < 1e-6
        assert abs(maxs[0].phi - 2 ** (2 / 3)) < 1e-10

    def test_hardcore_below_threshold_symmetric(self):
        sol = phases.solve_hardcore_fixpoints(3, 0.5)
        expected = np.array([1.0, sol.x0]) / (1 + sol.x0)
        maxs = phases.find_maximizers(spin.hardcore(0.5), 3, n_starts=30, seed=1)
        best = maxs[0]
        assert np.max(np.abs(best.r - expected)) < 1e-6
        assert np.max(np.abs(best.c - expected)) < 1e-6

    def test_coloring_finds_all_two_value_splits(self):
        system = spin.colorings(4)
        sol = phases.solve_coloring_fixpoint(4, 5)
        phi_star = phases.phi_value(system, 5, phases.coloring_pair(sol))
        maxs = phases.find_maximizers(system, 5, n_starts=100, seed=3)
        top = [m for m in maxs if m.phi > maxs[0].phi - 1e-9]
        assert len(top) == 6  # one per 2-subset of the 4 colors
        assert abs(maxs[0].phi - phi_star) < 1e-9
        assert maxs[0].phi > phases.phi_value(system, 5, uniform_pair(4)) + 1e-3
        for m in top:
            vals = np.sort(m.r)
            assert abs(vals[-1] - sol.a) < 1e-6 and abs(vals[0] - sol.b) < 1e-6

    def test_deterministic_for_fixed_seed(self):
        system = spin.colorings(4)
        a = phases.find_maximizers(system, 5, n_starts=20, seed=9)
        b = phases.find_maximizers(system, 5, n_starts=20, seed=9)
        assert len(a) == len(b)
        for ma, mb in zip(a, b):
            assert np.array_equal(ma.r, mb.r) and np.array_equal(ma.c, mb.c)

    def test_gradient_check_at_interior_maximizers(self):
        cases = [
            (spin.SpinSystem(np.ones((2, 2)), np.ones(2)), 3, uniform_pair(2)),
            (spin.colorings(5), 4, uniform_pair(5)),
        ]
        sol = phases.solve_hardcore_fixpoints(3, 0.5)
        v = np.array([1.0, sol.x0]) / (1 + sol.x0)
        cases.append((spin.hardcore(0.5), 3, (v, v.copy())))
        for system, degree, pair in cases:
            norm = phases.phi_tangent_gradient_norm(system, degree, pair)
            assert norm <= 1e-5, f"finite-difference gradient {norm} too large"
