"""Method-of-lines solver for radial graphical mean curvature flow.

The height u(tau, r) of a rotationally symmetric graph moving by mean
curvature satisfies

    du/dtau = u'' / (1 + u'^2) + D(r) u'

with D the chart drift ((n-1) xi'/xi on the polar chart).  Space is
discretized with second-order centered differences on a uniform grid;
the axis node uses the symmetric ghost value, the outer node a Robin
ghost pinning the slope.  Time stepping is explicit Heun under the
parabolic stability bound, or trapezoidal with a damped Newton solve.

The module also evaluates the weighted area functional
F(tau) = |S^{n-1}| int exp(c u - c^2 tau) W xi^{n-1} dr and its defect
D(tau) = |S^{n-1}| int K (H - c/W)^2 W xi^{n-1} dr, whose near-equality
dF/dtau ~ -D is the monotonicity property under test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import solve_banded
from scipy.special import gamma

from .graph_solvers import solve_radial_graph, solve_grim
from .profile_solver import SolitonSpec
from .warp_models import ROTATIONAL, EQUIDISTANT, WarpModel, level_mean_curvature

EXPLICIT_CFL = 0.4


def sphere_area(n: int) -> float:
    """Surface area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return 2.0 * math.pi ** (n / 2) / gamma(n / 2)


@dataclass
class GraphFlowState:
    """Nodal heights at one flow time on a fixed uniform grid."""

    r_grid: np.ndarray
    u: np.ndarray
    tau: float
    problem: "FlowProblem"

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if not np.all(np.isfinite(self.u)):
            raise ValueError("non-finite heights in flow state")
        if self.u.shape != self.r_grid.shape:
            raise ValueError("u and r_grid shape mismatch")


@dataclass
class FlowTrajectory:
    """Recorded snapshots with functional and defect samples."""

    taus: np.ndarray
    F_values: np.ndarray
    defect_values: np.ndarray
    snapshots: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def monotonicity_check(self, tol_rel: float = 1e-3, tol_abs: float = 1e-6) -> dict:
        """Centered-difference check of dF/dtau = -D at interior records."""
        taus, F, D = self.taus, self.F_values, self.defect_values
        if taus.size < 3:
            raise ValueError("need at least three records")
        dF = (F[2:] - F[:-2]) / (taus[2:] - taus[:-2])
        Dm = D[1:-1]
        gap = np.abs(dF + Dm)
        allowed = tol_rel * np.abs(Dm) + tol_abs
        return {
            "F_nonincreasing": bool(np.all(np.diff(F) <= 1e-12 * np.abs(F[0]))),
            "max_gap": float(np.max(gap)),
            "max_allowed_gap": float(np.min(allowed)),
            "balance_ok": bool(np.all(gap <= allowed)),
        }


class FlowProblem:
    """Spatial discretization and quadratures for one flow configuration.

    ``chart`` is "polar" (grid [0, R], axis symmetry at r = 0) or
    "equidistant" (grid [-R, R], n = 2 only, slope conditions at both
    ends).  ``robin_slope`` may be a number, "asymptotic" for the slope
    (c/(n-1)) xi/xi' at R, or None to pin the initial data's own
    one-sided slope when a run starts.
    """

    def __init__(self, c: float, n: int, warp: WarpModel, r_max: float = 10.0,
                 n_nodes: int = 2001, chart: str = "polar", bc: str = "robin",
                 robin_slope=None, newton_tol: float = 1e-10,
                 newton_max_iter: int = 25):
        if chart == "polar":
            if warp.kind != ROTATIONAL:
                raise ValueError("polar flow chart needs a rotational warp")
            self.r_grid = np.linspace(0.0, r_max, n_nodes)
        elif chart == "equidistant":
            if warp.kind != EQUIDISTANT:
                raise ValueError("equidistant flow chart needs an equidistant warp")
            if n != 2:
                raise ValueError("equidistant flow chart supports n = 2 only")
            self.r_grid = np.linspace(-r_max, r_max, n_nodes)
        else:
            raise ValueError(f"unknown flow chart {chart!r}")
        if bc not in ("robin", "dirichlet"):
            raise ValueError(f"unknown boundary condition {bc!r}")
        self.c, self.n, self.warp = float(c), int(n), warp
        self.chart, self.bc = chart, bc
        self.r_max = float(r_max)
        self.dr = float(self.r_grid[1] - self.r_grid[0])
        self.newton_tol = newton_tol
        self.newton_max_iter = newton_max_iter
        self.area = sphere_area(n)

        r = self.r_grid
        if chart == "polar":
            self.drift = np.zeros_like(r)
            if n > 1:
                self.drift[1:] = (n - 1) * np.array([warp.xi_ratio(x) for x in r[1:]])
            self.weight = np.array([warp.xi(x) ** (n - 1) for x in r])
        else:
            self.drift = np.array([level_mean_curvature(warp, x, n) for x in r])
            self.weight = np.array([warp.xi(x) * warp.chi(x) ** (n - 2)
                                    if n > 2 else warp.xi(x) for x in r])

        self._sigma = None
        self._sigma_left = None
        if robin_slope == "asymptotic":
            self._sigma = (c / (n - 1)) * warp.g(self.r_grid[-1])
            if chart == "equidistant":
                self._sigma_left = (c / (n - 1)) * warp.g(self.r_grid[0])
        elif robin_slope is not None:
            self._sigma = float(robin_slope)
            if chart == "equidistant":
                self._sigma_left = -float(robin_slope)

    # -- boundary slopes -------------------------------------------------

    def pin_boundary_slopes(self, u0) -> None:
        """Fix the Robin slopes to the one-sided slopes of ``u0``."""
        u0 = np.asarray(u0, dtype=float)
        dr = self.dr
        self._sigma = (3 * u0[-1] - 4 * u0[-2] + u0[-3]) / (2 * dr)
        if self.chart == "equidistant":
            self._sigma_left = -(3 * u0[0] - 4 * u0[1] + u0[2]) / (2 * dr)

    def _require_sigma(self):
        if self.bc == "robin" and self._sigma is None:
            raise ValueError("Robin slope not set; call pin_boundary_slopes "
                             "or pass robin_slope")

    # -- nodal derivatives ----------------------------------------------

    def slopes(self, u) -> np.ndarray:
        """Second-order nodal slopes consistent with the stencil."""
        u = np.asarray(u, dtype=float)
        p = np.empty_like(u)
        p[1:-1] = (u[2:] - u[:-2]) / (2 * self.dr)
        if self.chart == "polar":
            p[0] = 0.0
        elif self.bc == "robin":
            p[0] = self._sigma_left
        else:
            p[0] = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * self.dr)
        if self.bc == "robin":
            self._require_sigma()
            p[-1] = self._sigma
        else:
            p[-1] = (3 * u[-1] - 4 * u[-2] + u[-3]) / (2 * self.dr)
        return p

    def _second_diff(self, u) -> np.ndarray:
        dr2 = self.dr * self.dr
        q = np.empty_like(u)
        q[1:-1] = (u[2:] - 2 * u[1:-1] + u[:-2]) / dr2
        if self.chart == "polar":
            q[0] = 2 * (u[1] - u[0]) / dr2
        elif self.bc == "robin":
            q[0] = (2 * u[1] - 2 * u[0] - 2 * self.dr * self._sigma_left) / dr2
        else:
            q[0] = q[1]
        if self.bc == "robin":
            q[-1] = (2 * u[-2] - 2 * u[-1] + 2 * self.dr * self._sigma) / dr2
        else:
            q[-1] = q[-2]
        return q

    def rhs(self, u) -> np.ndarray:
        """Nodal du/dtau = u''/(1+u'^2) + D(r) u'."""
        self._require_sigma()
        u = np.asarray(u, dtype=float)
        p = self.slopes(u)
        q = self._second_diff(u)
        f = q / (1.0 + p * p) + self.drift * p
        if self.chart == "polar":
            # axis limit: n u''(0), symmetric ghost, u'(0) = 0
            f[0] = self.n * q[0]
        if self.bc == "dirichlet":
            f[-1] = 0.0
            if self.chart == "equidistant":
                f[0] = 0.0
        return f

    def _jacobian_bands(self, u) -> np.ndarray:
        """Tridiagonal bands of d(rhs)/du in solve_banded layout."""
        m = u.size
        dr, dr2 = self.dr, self.dr * self.dr
        p = self.slopes(u)
        q = self._second_diff(u)
        w2 = 1.0 + p * p
        upper = np.zeros(m)
        diag = np.zeros(m)
        lower = np.zeros(m)
        # interior rows
        base = 1.0 / (dr2 * w2[1:-1])
        skew = q[1:-1] * p[1:-1] / (dr * w2[1:-1] ** 2)
        adv = self.drift[1:-1] / (2 * dr)
        upper[2:] = base - skew + adv
        diag[1:-1] = -2.0 / (dr2 * w2[1:-1])
        lower[:-2] = base + skew - adv
        # first row
        if self.chart == "polar":
            diag[0] = -2.0 * self.n / dr2
            upper[1] = 2.0 * self.n / dr2
        elif self.bc == "robin":
            diag[0] = -2.0 / (dr2 * w2[0])
            upper[1] = 2.0 / (dr2 * w2[0])
        else:
            diag[0] = 0.0
            upper[1] = 0.0
        # last row
        if self.bc == "robin":
            diag[-1] = -2.0 / (dr2 * w2[-1])
            lower[-2] = 2.0 / (dr2 * w2[-1])
        else:
            diag[-1] = 0.0
            lower[-2] = 0.0
        return np.vstack((upper, diag, lower))

    # -- time stepping ---------------------------------------------------

    def stability_bound(self) -> float:
        return EXPLICIT_CFL * self.dr * self.dr

    def step_explicit(self, u, dtau: float) -> np.ndarray:
        """Heun (explicit trapezoidal) step under the CFL bound."""
        if dtau > self.stability_bound() * (1 + 1e-12):
            raise ValueError(
                f"dtau = {dtau:g} exceeds the stability bound "
                f"{self.stability_bound():g}")
        k1 = self.rhs(u)
        k2 = self.rhs(u + dtau * k1)
        return u + 0.5 * dtau * (k1 + k2)

    def step_implicit(self, u, dtau: float, theta: float = 0.5) -> np.ndarray:
        """Theta-scheme step (theta = 0.5: trapezoidal) by damped Newton."""
        u = np.asarray(u, dtype=float)
        f_old = self.rhs(u)
        v = u + dtau * f_old  # explicit predictor
        target = u + (1 - theta) * dtau * f_old
        res = v - target - theta * dtau * self.rhs(v)
        norm = np.max(np.abs(res))
        for iteration in range(self.newton_max_iter):
            if norm <= self.newton_tol:
                return v
            bands = -theta * dtau * self._jacobian_bands(v)
            bands[1] += 1.0
            delta = solve_banded((1, 1), bands, -res)
            step = 1.0
            for _ in range(8):
                trial = v + step * delta
                res_trial = trial - target - theta * dtau * self.rhs(trial)
                norm_trial = np.max(np.abs(res_trial))
                if norm_trial < norm or norm <= self.newton_tol:
                    break
                step *= 0.5
            v, res, norm = trial, res_trial, norm_trial
        if norm > self.newton_tol:
            raise RuntimeError(
                f"implicit step failed to converge in {self.newton_max_iter} "
                f"iterations (residual {norm:.3g})")
        return v

    # -- functionals -----------------------------------------------------

    def weighted_functional(self, u, tau: float) -> float:
        """F(tau) = |S^{n-1}| int exp(c u - c^2 tau) W xi^{n-1} dr."""
        u = np.asarray(u, dtype=float)
        p = self.slopes(u)
        big_w = np.sqrt(1.0 + p * p)
        k = np.exp(self.c * u - self.c * self.c * tau)
        return self.area * float(simpson(k * big_w * self.weight, x=self.r_grid))

    def mean_curvature(self, u) -> np.ndarray:
        """Nodal H = u''/W^3 + D(r) u'/W of the graph."""
        u = np.asarray(u, dtype=float)
        p = self.slopes(u)
        q = self._second_diff(u)
        w2 = 1.0 + p * p
        h = q / w2 ** 1.5 + self.drift * p / np.sqrt(w2)
        if self.chart == "polar":
            h[0] = self.n * q[0]
        return h

    def soliton_defect(self, u, tau: float) -> float:
        """D(tau) = |S^{n-1}| int K (H - c/W)^2 W xi^{n-1} dr >= 0."""
        u = np.asarray(u, dtype=float)
        p = self.slopes(u)
        big_w = np.sqrt(1.0 + p * p)
        k = np.exp(self.c * u - self.c * self.c * tau)
        h = self.mean_curvature(u)
        integrand = k * (h - self.c / big_w) ** 2 * big_w * self.weight
        return self.area * float(simpson(integrand, x=self.r_grid))

    # -- driver ----------------------------------------------------------

    def run(self, u0, dtau: float, horizon: float, scheme: str = "explicit",
            record_every: int = 1, tau0: float = 0.0) -> FlowTrajectory:
        """Advance from ``u0`` to tau0 + horizon, recording F and D."""
        if scheme not in ("explicit", "implicit"):
            raise ValueError(f"unknown scheme {scheme!r}")
        u = np.asarray(u0, dtype=float).copy()
        if self.bc == "robin" and self._sigma is None:
            self.pin_boundary_slopes(u)
        n_steps = int(round(horizon / dtau))
        if abs(n_steps * dtau - horizon) > 1e-9 * max(1.0, horizon):
            raise ValueError("horizon must be an integer number of steps")
        step = self.step_explicit if scheme == "explicit" else self.step_implicit
        taus, fs, ds, snaps = [], [], [], []

        def record(tau, u):
            taus.append(tau)
            fs.append(self.weighted_functional(u, tau))
            ds.append(self.soliton_defect(u, tau))
            snaps.append(GraphFlowState(self.r_grid, u.copy(), tau, self))

        record(tau0, u)
        for i in range(1, n_steps + 1):
            u = step(u, dtau)
            if i % record_every == 0 or i == n_steps:
                record(tau0 + i * dtau, u)
        return FlowTrajectory(
            taus=np.asarray(taus), F_values=np.asarray(fs),
            defect_values=np.asarray(ds), snapshots=snaps,
            meta={"scheme": scheme, "dtau": dtau, "bc": self.bc,
                  "chart": self.chart, "n_nodes": self.r_grid.size,
                  "robin_slope": self._sigma})


# -- module-level operation wrappers ------------------------------------

def flow_rhs(state: GraphFlowState) -> np.ndarray:
    return state.problem.rhs(state.u)


def step_flow(state: GraphFlowState, dtau: float,
              scheme: str = "explicit") -> GraphFlowState:
    prob = state.problem
    if prob.bc == "robin" and prob._sigma is None:
        prob.pin_boundary_slopes(state.u)
    if scheme == "explicit":
        u_new = prob.step_explicit(state.u, dtau)
    elif scheme == "implicit":
        u_new = prob.step_implicit(state.u, dtau)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return GraphFlowState(state.r_grid, u_new, state.tau + dtau, prob)


def weighted_functional(state: GraphFlowState) -> float:
    return state.problem.weighted_functional(state.u, state.tau)


def soliton_defect(state: GraphFlowState) -> float:
    return state.problem.soliton_defect(state.u, state.tau)


# -- initial data -------------------------------------------------------

def soliton_initial(problem: FlowProblem, rtol: float = 1e-11,
                    atol: float = 1e-13) -> np.ndarray:
    """Soliton graph heights sampled on the flow grid."""
    if problem.chart == "polar":
        spec = SolitonSpec(c=problem.c, n=problem.n, family="bowl",
                           warp=problem.warp)
        graph = solve_radial_graph(spec, r_span=(0.0, problem.r_max * 1.01),
                                   rtol=rtol, atol=atol)
        u = np.asarray(graph.u_eval(problem.r_grid), dtype=float)
        # dense output starts at the series launch radius; fill the gap
        tiny = problem.r_grid < graph.r_grid[0]
        u[tiny] = (problem.c / (2 * problem.n)) * problem.r_grid[tiny] ** 2
        return u
    graph = solve_grim(problem.c, problem.n, problem.warp,
                       r_span=(-problem.r_max * 1.01, problem.r_max * 1.01),
                       rtol=rtol, atol=atol)
    return np.asarray(graph.u_eval(problem.r_grid), dtype=float)


def discrete_soliton(problem: FlowProblem, u_boundary: float = 0.0) -> np.ndarray:
    """Exact steady state of the discrete scheme, marched node by node.

    Solves rhs(u) = c at every node, including the Robin boundary row,
    so the returned heights translate exactly under the semi-discrete
    flow; the problem's Robin slope is set to the value that closes the
    boundary equation.  The heights are normalized to ``u_boundary`` at
    the outer node, keeping the exponential weight of the monotonicity
    functional at most one and the boundary flux at roundoff level.
    """
    if problem.chart != "polar":
        raise ValueError("discrete soliton marching needs the polar chart")
    c = problem.c
    dr, dr2 = problem.dr, problem.dr * problem.dr
    m = problem.r_grid.size
    u = np.zeros(m)
    u[1] = u[0] + c * dr2 / (2 * problem.n)
    for i in range(1, m - 1):
        a = problem.drift[i]
        x = 2 * u[i] - u[i - 1]  # linear extrapolation seed
        for _ in range(30):
            p = (x - u[i - 1]) / (2 * dr)
            w2 = 1.0 + p * p
            q = (x - 2 * u[i] + u[i - 1]) / dr2
            g = q / w2 + a * p - c
            dg = 1.0 / (dr2 * w2) - q * p / (dr * w2 * w2) + a / (2 * dr)
            step = g / dg
            x -= step
            if abs(step) <= 1e-14 * max(1.0, abs(x)):
                break
        u[i + 1] = x
    # close the Robin boundary row for the slope
    a = problem.drift[-1]
    s = (3 * u[-1] - 4 * u[-2] + u[-3]) / (2 * dr)
    for _ in range(30):
        w2 = 1.0 + s * s
        q = (2 * u[-2] - 2 * u[-1] + 2 * dr * s) / dr2
        g = q / w2 + a * s - c
        dg = 2.0 / (dr * w2) - 2.0 * q * s / (w2 * w2) + a
        step = g / dg
        s -= step
        if abs(step) <= 1e-15 * max(1.0, abs(s)):
            break
    problem._sigma = float(s)
    return u + (u_boundary - u[-1])


def flat_initial(problem: FlowProblem) -> np.ndarray:
    return np.zeros_like(problem.r_grid)


def bump_initial(problem: FlowProblem, amplitude: float = 0.05,
                 width: float = 0.5, center: float = 3.0,
                 base: np.ndarray | None = None) -> np.ndarray:
    """Soliton (or supplied base) heights plus a Gaussian bump."""
    if base is None:
        base = soliton_initial(problem)
    bump = amplitude * np.exp(-((problem.r_grid - center) / width) ** 2)
    return np.asarray(base, dtype=float) + bump
