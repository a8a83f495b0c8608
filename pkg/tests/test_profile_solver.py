"""Profile-system integration: bowls, wings, ideal parametric curves."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soliton_forge import (
    ProfileState, SolitonSpec, TerminationPolicy, equilibrium_angle,
    make_builtin_warp, profile_rhs, profile_to_graph, solve_bowl,
    solve_ideal_parametric, solve_wing,
)

COTH_1 = 1.3130352854993312


class TestSpecValidation:
    def test_wing_needs_epsilon(self, hyperbolic_warp):
        with pytest.raises(ValueError):
            SolitonSpec(c=1.0, n=2, family="wing", warp=hyperbolic_warp)
        with pytest.raises(ValueError):
            SolitonSpec(c=1.0, n=2, family="wing", warp=hyperbolic_warp,
                        epsilon=0.0)

    def test_family_warp_compatibility(self, hyperbolic_warp, busemann_warp):
        with pytest.raises(ValueError):
            SolitonSpec(c=1.0, n=2, family="ideal", warp=hyperbolic_warp)
        with pytest.raises(ValueError):
            SolitonSpec(c=1.0, n=2, family="bowl", warp=busemann_warp)

    def test_negative_speed_rejected(self, hyperbolic_warp):
        with pytest.raises(ValueError):
            SolitonSpec(c=-1.0, n=2, family="bowl", warp=hyperbolic_warp)

    def test_unknown_family(self, hyperbolic_warp):
        with pytest.raises(ValueError):
            SolitonSpec(c=1.0, n=2, family="pancake", warp=hyperbolic_warp)


class TestProfileRhs:
    def test_flat_angle(self, euclidean_warp):
        spec = SolitonSpec(c=1.0, n=2, family="bowl", warp=euclidean_warp)
        out = profile_rhs(ProfileState(0.0, 1.0, 0.0, 0.0), spec)
        assert out == pytest.approx((1.0, 0.0, 1.0))

    def test_vertical_angle(self, euclidean_warp):
        spec = SolitonSpec(c=1.0, n=2, family="bowl", warp=euclidean_warp)
        out = profile_rhs(ProfileState(0.0, 1.0, 0.0, math.pi / 2), spec)
        assert out[0] == pytest.approx(0.0, abs=1e-15)
        assert out[1] == pytest.approx(1.0)
        assert out[2] == pytest.approx(-1.0)

    def test_hyperbolic_n3(self, hyperbolic_warp):
        # c cos(pi/4) ... - 2 coth(1) sin(pi/4) with c = 2
        spec = SolitonSpec(c=2.0, n=3, family="bowl", warp=hyperbolic_warp)
        out = profile_rhs(ProfileState(0.0, 1.0, 0.0, math.pi / 4), spec)
        expected = math.sqrt(2) - 2 * COTH_1 * math.sqrt(2) / 2
        assert expected == pytest.approx(-0.442698746254488, abs=1e-12)
        assert out[2] == pytest.approx(expected, abs=1e-12)

    def test_domain_violation(self, hyperbolic_warp):
        spec = SolitonSpec(c=1.0, n=2, family="bowl", warp=hyperbolic_warp)
        with pytest.raises(ValueError):
            profile_rhs((-1.0, 0.3), spec)


class TestBowl:
    def test_axis_series(self, euclidean_bowl_spec):
        curve = solve_bowl(euclidean_bowl_spec)
        r, t, phi = curve.sample(1e-3)
        # u ~ r^2 / (2n) near the axis
        assert t == pytest.approx(r * r / 4, rel=1e-4)
        assert phi == pytest.approx(r / 2, rel=1e-4)

    def test_axis_point_exact(self, euclidean_bowl_spec):
        curve = solve_bowl(euclidean_bowl_spec, t0=2.5)
        assert curve.r[0] == 0.0
        assert curve.t[0] == 2.5
        assert curve.phi[0] == 0.0

    def test_r_monotone_phi_in_band(self, hyperbolic_bowl_spec):
        curve = solve_bowl(hyperbolic_bowl_spec,
                           stop=TerminationPolicy(r_max=30.0))
        assert np.all(np.diff(curve.r) > 0)
        assert np.all(curve.phi >= 0)
        assert np.all(curve.phi < math.pi / 2)
        assert curve.termination == "max_radius"

    def test_c_zero_is_static_slice(self, euclidean_warp):
        spec = SolitonSpec(c=0.0, n=2, family="bowl", warp=euclidean_warp)
        curve = solve_bowl(spec, stop=TerminationPolicy(r_max=5.0))
        assert np.max(np.abs(curve.t)) < 1e-12
        assert np.max(np.abs(curve.phi)) < 1e-12

    def test_hyperbolic_slope_limit(self, hyperbolic_bowl_spec):
        curve = solve_bowl(hyperbolic_bowl_spec,
                           stop=TerminationPolicy(r_max=25.0))
        phi_end = curve.phi[-1]
        # u' -> c/(n-1) = 1, i.e. phi -> pi/4
        assert math.tan(phi_end) == pytest.approx(1.0, abs=1e-2)

    def test_speed_is_unit(self, hyperbolic_bowl_spec):
        curve = solve_bowl(hyperbolic_bowl_spec)
        s = np.linspace(0.1, curve.s_span[1] - 0.1, 100)
        h = 1e-5
        r1, t1, _ = curve.sample(s - h)
        r2, t2, _ = curve.sample(s + h)
        speed = np.hypot((r2 - r1) / (2 * h), (t2 - t1) / (2 * h))
        assert np.max(np.abs(speed - 1)) < 1e-8

    def test_winding_flag(self, hyperbolic_bowl_spec):
        curve = solve_bowl(hyperbolic_bowl_spec)
        assert curve.diagnostics["phi_winding_ok"]


@pytest.fixture(scope="module")
def wing_curve(hyperbolic_warp):
    spec = SolitonSpec(c=1.0, n=2, family="wing", warp=hyperbolic_warp,
                       epsilon=0.5)
    return solve_wing(spec, branch=-1, stop=TerminationPolicy(r_max=30.0))


class TestWing:
    def test_initial_direction(self, wing_curve):
        state = wing_curve.dense_eval(0.0)
        assert state.rdot == pytest.approx(0.0, abs=1e-15)
        assert state.tdot == pytest.approx(-1.0)

    def test_unique_turning_point(self, wing_curve):
        assert len(wing_curve.turning_points) == 1

    def test_turning_radius_bound(self, wing_curve):
        s0 = wing_curve.turning_points[0]
        r0 = wing_curve.sample(s0)[0]
        assert r0 - 0.5 <= math.pi / 2 + 1e-9

    def test_r_never_below_epsilon(self, wing_curve):
        assert np.min(wing_curve.r) >= 0.5 - 1e-9

    def test_plus_branch_ascends(self, hyperbolic_warp):
        spec = SolitonSpec(c=1.0, n=2, family="wing", warp=hyperbolic_warp,
                           epsilon=0.5)
        curve = solve_wing(spec, branch=1, stop=TerminationPolicy(r_max=10.0))
        assert np.all(np.diff(curve.t) > -1e-12)
        assert not curve.turning_points

    def test_gap_decreasing_in_epsilon(self, hyperbolic_warp):
        gaps = []
        for eps in (1.0, 0.1, 0.01):
            spec = SolitonSpec(c=1.0, n=2, family="wing",
                               warp=hyperbolic_warp, epsilon=eps)
            curve = solve_wing(spec, branch=-1,
                               stop=TerminationPolicy(r_max=30.0))
            s0 = curve.turning_points[0]
            gaps.append(-curve.sample(s0)[1])
        assert gaps[0] > gaps[1] > gaps[2] > 0

    def test_bad_branch(self, hyperbolic_warp):
        spec = SolitonSpec(c=1.0, n=2, family="wing", warp=hyperbolic_warp,
                           epsilon=0.5)
        with pytest.raises(ValueError):
            solve_wing(spec, branch=0)


class TestIdealParametric:
    def test_equilibrium_angle_value(self, busemann_warp):
        spec = SolitonSpec(c=1.0, n=2, family="ideal", warp=busemann_warp)
        assert equilibrium_angle(spec) == pytest.approx(math.pi / 4)

    def test_equilibrium_is_fixed_line(self, busemann_warp):
        spec = SolitonSpec(c=1.0, n=2, family="ideal", warp=busemann_warp)
        phi_star = equilibrium_angle(spec)
        curve = solve_ideal_parametric(spec, (0.0, 0.0, phi_star),
                                       stop=TerminationPolicy(s_max=20.0))
        assert np.max(np.abs(curve.phi - phi_star)) < 1e-9

    def test_ideal_bowl_angle_monotone_to_equilibrium(self, busemann_warp):
        spec = SolitonSpec(c=1.0, n=2, family="ideal", warp=busemann_warp)
        phi_star = equilibrium_angle(spec)
        curve = solve_ideal_parametric(spec, (0.0, 0.0, 0.0),
                                       stop=TerminationPolicy(s_max=40.0))
        assert np.all(np.diff(curve.phi) >= -1e-8)
        assert curve.phi[-1] == pytest.approx(phi_star, abs=1e-6)

    def test_r_crosses_zero(self, busemann_warp):
        spec = SolitonSpec(c=1.0, n=2, family="ideal", warp=busemann_warp)
        curve = solve_ideal_parametric(spec, (0.2, 0.0, 2.5),
                                       stop=TerminationPolicy(s_max=10.0))
        assert np.min(curve.r) < 0 < np.max(curve.r)


class TestProfileToGraph:
    def test_bowl_graph(self, hyperbolic_bowl_spec):
        curve = solve_bowl(hyperbolic_bowl_spec,
                           stop=TerminationPolicy(r_max=10.0))
        graph = profile_to_graph(curve)
        assert np.all(np.diff(graph.r_grid) > 0)
        assert graph.du[0] == pytest.approx(0.0, abs=1e-3)
        # recorded slopes are consistent with the height samples
        fd = np.gradient(graph.u, graph.r_grid)
        assert np.max(np.abs(graph.du - fd)[1:-1]) < 1e-3

    def test_vertical_curve_rejected(self, hyperbolic_warp):
        spec = SolitonSpec(c=1.0, n=2, family="wing", warp=hyperbolic_warp,
                           epsilon=0.5)
        curve = solve_wing(spec, branch=-1,
                           stop=TerminationPolicy(r_max=20.0))
        graph = profile_to_graph(curve)
        # the admissible sub-arc excludes the vertical launch
        assert graph.r_grid[0] > 0.5 - 1e-3


@settings(max_examples=30, deadline=None)
@given(r=st.floats(min_value=0.05, max_value=10.0),
       phi=st.floats(min_value=-1.5, max_value=1.5),
       c=st.floats(min_value=0.0, max_value=5.0))
def test_rhs_tangent_is_unit(r, phi, c):
    warp = make_builtin_warp("rotational", -1.0)
    spec = SolitonSpec(c=c, n=2, family="bowl", warp=warp)
    dr, dt, _ = profile_rhs((r, phi), spec)
    assert math.hypot(dr, dt) == pytest.approx(1.0, abs=1e-12)
