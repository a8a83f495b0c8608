"""Flow discretization, stepping, and the monotonicity functional."""

import math

import numpy as np
import pytest

from soliton_forge import (
    FlowProblem, bump_initial, discrete_soliton, flat_initial,
    soliton_initial, sphere_area,
)

C, N = 1.0, 2


@pytest.fixture(scope="module")
def hyper_problem(hyperbolic_warp):
    return FlowProblem(C, N, hyperbolic_warp, r_max=10.0, n_nodes=2001)


class TestSphereArea:
    def test_circle(self):
        assert sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-15)

    def test_two_sphere(self):
        assert sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)

    def test_three_sphere(self):
        assert sphere_area(4) == pytest.approx(2 * math.pi ** 2, rel=1e-15)

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            sphere_area(0)


class TestSpatialOperator:
    def test_constant_slice_is_static(self, euclidean_warp):
        prob = FlowProblem(C, N, euclidean_warp, r_max=5.0, n_nodes=201,
                           bc="dirichlet")
        f = prob.rhs(np.full(201, 0.7))
        assert np.max(np.abs(f)) == 0.0

    def test_axis_value_of_paraboloid(self, euclidean_warp):
        # u = alpha r^2 has u'' = 2 alpha, so the axis speed is 2 n alpha
        prob = FlowProblem(C, N, euclidean_warp, r_max=5.0, n_nodes=501,
                           robin_slope=0.0)
        alpha = 0.3
        f = prob.rhs(alpha * prob.r_grid ** 2)
        assert f[0] == pytest.approx(2 * N * alpha, rel=1e-12)

    def test_soliton_near_fixed_point(self, hyper_problem):
        u0 = soliton_initial(hyper_problem)
        hyper_problem.pin_boundary_slopes(u0)
        assert np.max(np.abs(hyper_problem.rhs(u0) - C)) < 5e-6

    def test_discrete_soliton_exact_fixed_point(self, hyper_problem):
        u0 = discrete_soliton(hyper_problem)
        assert np.max(np.abs(hyper_problem.rhs(u0) - C)) < 1e-9
        assert u0[-1] == 0.0

    def test_discrete_matches_ode_soliton(self, hyper_problem):
        ud = discrete_soliton(hyper_problem)
        uo = soliton_initial(hyper_problem)
        gap = (ud - ud[0]) - (uo - uo[0])
        assert np.max(np.abs(gap)) < 1e-5

    def test_robin_slope_required(self, hyperbolic_warp):
        prob = FlowProblem(C, N, hyperbolic_warp, r_max=5.0, n_nodes=101)
        with pytest.raises(ValueError):
            prob.rhs(np.zeros(101))

    def test_grim_chart_near_fixed_point(self, equidistant_warp):
        prob = FlowProblem(C, N, equidistant_warp, r_max=8.0, n_nodes=1601,
                           chart="equidistant")
        u0 = soliton_initial(prob)
        prob.pin_boundary_slopes(u0)
        assert np.max(np.abs(prob.rhs(u0) - C)) < 1e-4

    def test_chart_warp_mismatch(self, equidistant_warp):
        with pytest.raises(ValueError):
            FlowProblem(C, N, equidistant_warp, chart="polar")


class TestStepping:
    def test_explicit_stability_guard(self, hyper_problem):
        u0 = discrete_soliton(hyper_problem)
        dt = 2 * hyper_problem.stability_bound()
        with pytest.raises(ValueError):
            hyper_problem.step_explicit(u0, dt)

    def test_explicit_implicit_agree(self, hyperbolic_warp):
        prob = FlowProblem(C, N, hyperbolic_warp, r_max=8.0, n_nodes=401)
        u0 = bump_initial(prob, base=discrete_soliton(prob))
        dt = 0.5 * prob.stability_bound()
        ue = prob.step_explicit(u0, dt)
        ui = prob.step_implicit(u0, dt)
        assert np.max(np.abs(ue - ui)) < 1e-8

    def test_horizon_must_divide(self, hyper_problem):
        u0 = discrete_soliton(hyper_problem)
        with pytest.raises(ValueError):
            hyper_problem.run(u0, 3e-4, 1e-3)

    def test_max_principle_for_bump(self, hyperbolic_warp):
        prob = FlowProblem(C, N, hyperbolic_warp, r_max=8.0, n_nodes=801)
        base = discrete_soliton(prob)
        u = bump_initial(prob, amplitude=0.1, base=base)
        sups = [np.max(u - base)]
        for _ in range(40):
            u = prob.step_implicit(u, 1e-3)
            sups.append(np.max(u - base - C * 1e-3 * len(sups)))
        assert all(b <= a + 1e-10 for a, b in zip(sups, sups[1:]))
        assert sups[-1] < 0.99 * sups[0]

    def test_comparison_principle(self, euclidean_warp, rng):
        prob = FlowProblem(C, N, euclidean_warp, r_max=5.0, n_nodes=401,
                           bc="dirichlet")
        lo = flat_initial(prob)
        for _ in range(4):
            amp_lo, amp_hi = np.sort(rng.uniform(0.01, 0.3, size=2))
            width, center = rng.uniform(0.3, 1.0), rng.uniform(1.5, 3.5)
            a = lo + amp_lo * np.exp(-((prob.r_grid - center) / width) ** 2)
            b = lo + amp_hi * np.exp(-((prob.r_grid - center) / width) ** 2)
            for _ in range(10):
                a = prob.step_implicit(a, 5e-4)
                b = prob.step_implicit(b, 5e-4)
            assert np.all(b - a >= -1e-12)


class TestMonotonicity:
    def test_flat_slice_defect_oracle(self, euclidean_warp):
        # H = 0 on the flat slice, so D = |S^1| c^2 R^2 / 2 at tau = 0
        prob = FlowProblem(C, N, euclidean_warp, r_max=4.0, n_nodes=801,
                           bc="dirichlet")
        d = prob.soliton_defect(flat_initial(prob), 0.0)
        assert d == pytest.approx(2 * math.pi * C * C * 16.0 / 2, rel=1e-6)

    def test_soliton_keeps_functional_constant(self, hyper_problem):
        u0 = discrete_soliton(hyper_problem)
        traj = hyper_problem.run(u0, 1e-3, 0.05, scheme="implicit",
                                 record_every=10)
        f = traj.F_values
        assert np.max(np.abs(f - f[0])) < 1e-8 * abs(f[0])
        assert np.max(traj.defect_values) < 1e-12

    def test_bump_balance_hyperbolic(self, hyper_problem):
        base = discrete_soliton(hyper_problem)
        u0 = bump_initial(hyper_problem, amplitude=0.05, width=0.5,
                          center=3.0, base=base)
        traj = hyper_problem.run(u0, 5e-4, 0.05, scheme="implicit",
                                 record_every=2)
        chk = traj.monotonicity_check()
        assert chk["F_nonincreasing"]
        assert chk["balance_ok"]

    def test_translation_exactness_and_order(self, hyperbolic_warp):
        errs = {}
        for nodes in (501, 1001):
            prob = FlowProblem(C, N, hyperbolic_warp, r_max=10.0,
                               n_nodes=nodes)
            u0 = soliton_initial(prob)
            prob.pin_boundary_slopes(u0)
            traj = prob.run(u0, 2e-3, 1.0, scheme="implicit",
                            record_every=500)
            errs[nodes] = np.max(np.abs(traj.snapshots[-1].u - u0 - C))
        assert errs[1001] < 5e-5
        assert math.log2(errs[501] / errs[1001]) > 1.9

    def test_check_needs_three_records(self, hyper_problem):
        u0 = discrete_soliton(hyper_problem)
        traj = hyper_problem.run(u0, 1e-3, 2e-3, scheme="implicit",
                                 record_every=5)
        with pytest.raises(ValueError):
            traj.monotonicity_check()
