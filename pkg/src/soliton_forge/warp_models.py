"""Rotationally symmetric base metrics and their curvature data.

Three charts are supported:

* ``rotational`` -- geodesic polar metric dr^2 + xi^2(r) dtheta^2 on a
  Cartan-Hadamard manifold, xi(0)=0, xi'(0)=1;
* ``busemann`` -- r is the signed distance from a fixed horosphere, xi is
  the horosphere scale factor (xi = e^{kappa r} for constant curvature);
* ``equidistant`` -- warped metric xi^2(r) dtau^2 + dr^2 + chi^2(r) dtheta^2
  built on a geodesic, xi(0)=1, xi'(0)=0.

Every solver downstream consumes a model only through xi, its derivatives
and the quotient xi'/xi, so user-defined metrics can be supplied as
Hermite tables (see ``warp_from_json``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline

ROTATIONAL = "rotational"
BUSEMANN = "busemann"
EQUIDISTANT = "equidistant"
KINDS = (ROTATIONAL, BUSEMANN, EQUIDISTANT)


@dataclass(frozen=True)
class WarpModel:
    """Immutable description of the radial warping of the base metric.

    ``xi``, ``dxi``, ``ddxi`` are vectorized evaluators of the warping
    function and its first two derivatives.  ``chi`` (with derivatives)
    is the second warping factor, present only for the equidistant chart.
    ``xi3_zero`` is xi'''(0) and feeds the series regularization of
    xi'/xi at the rotation axis.
    """

    kind: str
    xi: Callable
    dxi: Callable
    ddxi: Callable
    r_domain: tuple
    label: str = ""
    chi: Callable | None = None
    dchi: Callable | None = None
    ddchi: Callable | None = None
    xi3_zero: float | None = None
    r_series: float = 1e-3

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown warp kind {self.kind!r}")
        if self.kind == EQUIDISTANT and self.chi is None:
            raise ValueError("equidistant warp requires the chi factor")

    def in_domain(self, r) -> bool:
        lo, hi = self.r_domain
        r = np.asarray(r, dtype=float)
        return bool(np.all((r >= lo) & (r <= hi)))

    def require_domain(self, r):
        if not self.in_domain(r):
            raise ValueError(
                f"r={r} outside domain {self.r_domain} of warp {self.label!r}")

    def xi_ratio(self, r):
        """xi'(r)/xi(r), series-regularized near the axis (rotational kind).

        The quotient behaves like 1/r + (xi'''(0)/3) r + O(r^3) as r -> 0,
        which is the value returned for |r| < r_series when xi'''(0) is
        known.  r = 0 itself is singular and raises.
        """
        r_arr = np.asarray(r, dtype=float)
        scalar = r_arr.ndim == 0
        r_arr = np.atleast_1d(r_arr)
        if self.kind == ROTATIONAL and self.xi3_zero is not None:
            near = np.abs(r_arr) < self.r_series
            if np.any(near & (r_arr == 0.0)):
                raise ZeroDivisionError("xi'/xi is singular at the axis r=0")
            out = np.empty_like(r_arr)
            if np.any(~near):
                rf = r_arr[~near]
                out[~near] = self.dxi(rf) / self.xi(rf)
            if np.any(near):
                rn = r_arr[near]
                out[near] = 1.0 / rn + (self.xi3_zero / 3.0) * rn
        else:
            out = self.dxi(r_arr) / self.xi(r_arr)
        return float(out[0]) if scalar else out

    def g(self, r):
        """xi(r)/xi'(r), the reciprocal of :meth:`xi_ratio`."""
        return 1.0 / self.xi_ratio(r) if np.isscalar(r) else 1.0 / self.xi_ratio(r)


@dataclass(frozen=True)
class CurvatureBounds:
    """Pinching constants K_minus <= K <= K_plus <= 0 for the radial curvature."""

    K_minus: float
    K_plus: float

    def __post_init__(self):
        if not (self.K_minus <= self.K_plus <= 0.0):
            raise ValueError(
                f"need K_minus <= K_plus <= 0, got {self.K_minus}, {self.K_plus}")


@dataclass(frozen=True)
class Violation:
    condition: str
    r: float
    value: float


def make_builtin_warp(kind: str, curvature: float) -> WarpModel:
    """Constant-curvature warp with analytically exact derivatives.

    rotational:   K = 0 gives xi = r;  K = -k^2 gives xi = sinh(k r)/k.
    busemann:     xi = e^{k r}            (requires K < 0).
    equidistant:  xi = cosh(k r), chi = sinh(k r)/k   (requires K < 0).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown warp kind {kind!r}")
    if curvature > 0:
        raise ValueError("positive curvature is not supported")
    if kind in (BUSEMANN, EQUIDISTANT) and curvature == 0:
        raise ValueError(f"{kind} warp requires strictly negative curvature")

    if kind == ROTATIONAL:
        if curvature == 0.0:
            return WarpModel(
                kind=ROTATIONAL,
                xi=lambda r: np.asarray(r, dtype=float) * 1.0,
                dxi=lambda r: np.ones_like(np.asarray(r, dtype=float)),
                ddxi=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                r_domain=(0.0, math.inf),
                label="euclidean",
                xi3_zero=0.0,
            )
        k = math.sqrt(-curvature)
        return WarpModel(
            kind=ROTATIONAL,
            xi=lambda r: np.sinh(k * np.asarray(r, dtype=float)) / k,
            dxi=lambda r: np.cosh(k * np.asarray(r, dtype=float)),
            ddxi=lambda r: k * np.sinh(k * np.asarray(r, dtype=float)),
            r_domain=(0.0, math.inf),
            label=f"hyperbolic(K={curvature:g})",
            xi3_zero=k * k,
        )

    k = math.sqrt(-curvature)
    if kind == BUSEMANN:
        return WarpModel(
            kind=BUSEMANN,
            xi=lambda r: np.exp(k * np.asarray(r, dtype=float)),
            dxi=lambda r: k * np.exp(k * np.asarray(r, dtype=float)),
            ddxi=lambda r: k * k * np.exp(k * np.asarray(r, dtype=float)),
            r_domain=(-math.inf, math.inf),
            label=f"busemann(K={curvature:g})",
        )

    return WarpModel(
        kind=EQUIDISTANT,
        xi=lambda r: np.cosh(k * np.asarray(r, dtype=float)),
        dxi=lambda r: k * np.sinh(k * np.asarray(r, dtype=float)),
        ddxi=lambda r: k * k * np.cosh(k * np.asarray(r, dtype=float)),
        chi=lambda r: np.sinh(k * np.asarray(r, dtype=float)) / k,
        dchi=lambda r: np.cosh(k * np.asarray(r, dtype=float)),
        ddchi=lambda r: k * np.sinh(k * np.asarray(r, dtype=float)),
        r_domain=(-math.inf, math.inf),
        label=f"equidistant(K={curvature:g})",
    )


def radial_curvature(model: WarpModel, r: float) -> float:
    """Radial sectional curvature K(r) = -xi''(r)/xi(r)."""
    model.require_domain(r)
    if model.kind == ROTATIONAL and abs(r) < 1e-8:
        if model.xi3_zero is not None:
            # limit of -xi''/xi as r -> 0 for an odd xi with xi'(0)=1
            return -model.xi3_zero
        raise ValueError("xi vanishes at the axis; curvature limit unknown")
    xi = float(model.xi(r))
    if xi == 0.0:
        raise ValueError(f"xi({r}) = 0, curvature undefined")
    return -float(model.ddxi(r)) / xi


def riccati_residual(model: WarpModel, r) -> np.ndarray:
    """|g' - 1 - K g^2| with g = xi/xi'; vanishes to round-off when the
    derivative evaluators are analytically consistent."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    xi = model.xi(r)
    dxi = model.dxi(r)
    ddxi = model.ddxi(r)
    g = xi / dxi
    gp = 1.0 - xi * ddxi / dxi**2
    K = -ddxi / xi
    return np.abs(gp - 1.0 - K * g**2)


def level_mean_curvature(model: WarpModel, r: float, n: int) -> float:
    """Laplacian of the radial coordinate, i.e. (n-1) times the mean
    curvature of the level set {r = const}.

    rotational/busemann: (n-1) xi'/xi.  equidistant: xi'/xi + (n-2) chi'/chi.
    """
    if n < 2:
        raise ValueError("base dimension n must be >= 2")
    model.require_domain(r)
    if model.kind == ROTATIONAL and r == 0.0:
        raise ValueError("level mean curvature is singular on the axis")
    if model.kind == EQUIDISTANT:
        out = float(model.dxi(r)) / float(model.xi(r))
        if n > 2:
            chi = float(model.chi(r))
            if chi == 0.0:
                raise ValueError("chi vanishes; equidistant levels singular here")
            out += (n - 2) * float(model.dchi(r)) / chi
        return out
    return (n - 1) * model.xi_ratio(r)


def constant_curvature_ratio(K: float, r):
    """xi'/xi for the simply connected space form of curvature K <= 0."""
    r = np.asarray(r, dtype=float)
    if K > 0:
        raise ValueError("only non-positive curvature comparison is supported")
    if K == 0.0:
        return 1.0 / r
    k = math.sqrt(-K)
    return k / np.tanh(k * r)


def default_validation_grid(model: WarpModel) -> np.ndarray:
    if model.kind == ROTATIONAL:
        return np.geomspace(1e-4, 1e2, 512)
    return np.linspace(-20.0, 20.0, 512)


def validate_warp(model: WarpModel, grid: Sequence[float] | None = None,
                  tol: float = 1e-9) -> list[Violation]:
    """Sampled check of the regularity conditions for the model's kind.

    Returns an empty list iff every condition holds at every grid point;
    validation records violations and never raises.
    """
    if grid is None:
        grid = default_validation_grid(model)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("validation grid must be nonempty")
    lo, hi = model.r_domain
    grid = grid[(grid >= lo) & (grid <= hi)]
    out: list[Violation] = []

    def check(cond: str, mask: np.ndarray, values: np.ndarray, rs: np.ndarray):
        for r, v in zip(rs[~mask], values[~mask]):
            out.append(Violation(cond, float(r), float(v)))

    if model.kind == ROTATIONAL:
        xi0 = float(model.xi(0.0))
        if abs(xi0) > tol:
            out.append(Violation("xi(0) = 0", 0.0, xi0))
        dxi0 = float(model.dxi(0.0))
        if abs(dxi0 - 1.0) > tol:
            out.append(Violation("xi'(0) = 1", 0.0, dxi0))
        pos = grid[grid > 0]
        xi = np.asarray(model.xi(pos), dtype=float)
        check("xi > 0", xi > 0, xi, pos)
        dxi = np.asarray(model.dxi(pos), dtype=float)
        check("xi' > 0", dxi > 0, dxi, pos)
        good = xi > 0
        K = np.where(good, -np.asarray(model.ddxi(pos), dtype=float) / np.where(good, xi, 1.0), 0.0)
        check("K <= 0", (K <= tol) | ~good, K, pos)
    elif model.kind == EQUIDISTANT:
        xi0 = float(model.xi(0.0))
        if abs(xi0 - 1.0) > tol:
            out.append(Violation("xi(0) = 1", 0.0, xi0))
        dxi0 = float(model.dxi(0.0))
        if abs(dxi0) > tol:
            out.append(Violation("xi'(0) = 0", 0.0, dxi0))
        xi = np.asarray(model.xi(grid), dtype=float)
        check("xi > 0", xi > 0, xi, grid)
        good = xi > 0
        K = np.where(good, -np.asarray(model.ddxi(grid), dtype=float) / np.where(good, xi, 1.0), 0.0)
        check("K <= 0", (K <= tol) | ~good, K, grid)
    else:
        xi = np.asarray(model.xi(grid), dtype=float)
        check("xi > 0", xi > 0, xi, grid)
        good = xi > 0
        K = np.where(good, -np.asarray(model.ddxi(grid), dtype=float) / np.where(good, xi, 1.0), 0.0)
        check("K <= 0", (K <= tol) | ~good, K, grid)
    return out


def warp_from_json(source) -> WarpModel:
    """Build a table-defined warp from a JSON description.

    Expected shape::

        {"kind": "rotational", "label": "...",
         "interpolation": "cubic-hermite",
         "table": [{"r": ..., "xi": ..., "dxi": ..., "ddxi": ...}, ...]}

    xi is interpolated by a Hermite cubic through (r, xi, xi'); xi''
    comes from a Hermite cubic through (r, xi', xi'').
    """
    if hasattr(source, "read_text"):
        obj = json.loads(source.read_text())
    elif isinstance(source, (str, bytes)):
        obj = json.loads(source)
    else:
        obj = source
    kind = obj["kind"]
    interp = obj.get("interpolation", "cubic-hermite")
    if interp != "cubic-hermite":
        raise ValueError(f"unsupported interpolation {interp!r}")
    table = obj["table"]
    if len(table) < 2:
        raise ValueError("warp table needs at least two rows")
    r = np.array([row["r"] for row in table], dtype=float)
    xi = np.array([row["xi"] for row in table], dtype=float)
    dxi = np.array([row["dxi"] for row in table], dtype=float)
    ddxi = np.array([row["ddxi"] for row in table], dtype=float)
    order = np.argsort(r)
    r, xi, dxi, ddxi = r[order], xi[order], dxi[order], ddxi[order]
    xi_s = CubicHermiteSpline(r, xi, dxi)
    dxi_s = CubicHermiteSpline(r, dxi, ddxi)
    return WarpModel(
        kind=kind,
        xi=xi_s,
        dxi=dxi_s,
        ddxi=dxi_s.derivative(),
        r_domain=(float(r[0]), float(r[-1])),
        label=obj.get("label", "table"),
    )
