"""Deterministic artifact export and import.

All numeric output uses repr-faithful 17-significant-digit formatting
and '\n' newlines, so identical inputs produce byte-identical files.
CSV files carry '# key=value' comment headers with run metadata; OBJ
files carry the same information as '#' comments before the vertex
block.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .graph_solvers import RadialGraph
from .meshing import SolitonMesh
from .profile_solver import SampledCurve


def fmt(x) -> str:
    """Shortest round-trippable decimal form of a float."""
    return f"{float(x):.17g}"


def _open_out(path):
    path = Path(path)
    if not path.parent.exists():
        raise FileNotFoundError(f"parent directory does not exist: {path.parent}")
    return path


def _write_lines(path, lines) -> Path:
    path = _open_out(path)
    try:
        path.write_text("\n".join(lines) + "\n", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _meta_lines(meta: dict):
    return [f"# {key}={value}" for key, value in sorted(meta.items())]


def export_profile_csv(curve, path, n_samples: int = 2001, meta=None) -> Path:
    """Columns s, r, t, phi resampled uniformly in arc length."""
    lo, hi = curve.s_span
    s = np.linspace(lo, hi, n_samples)
    r, t, phi = curve.sample(s)
    lines = _meta_lines(meta or {})
    lines.append("s,r,t,phi")
    for row in zip(s, np.atleast_1d(r), np.atleast_1d(t), np.atleast_1d(phi)):
        lines.append(",".join(fmt(v) for v in row))
    return _write_lines(path, lines)


def read_profile_csv(path, spec=None) -> SampledCurve:
    """Rebuild a sampleable curve from an export of export_profile_csv."""
    path = Path(path)
    rows = []
    meta = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "=" in line:
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            continue
        if line.startswith("s,"):
            continue
        rows.append([float(v) for v in line.split(",")])
    if len(rows) < 4:
        raise ValueError(f"profile CSV {path} has too few samples")
    data = np.asarray(rows)
    curve = SampledCurve(data[:, 0], data[:, 1], data[:, 2], data[:, 3], spec=spec)
    curve.meta = meta
    return curve


def export_graph_csv(graph: RadialGraph, path, meta=None) -> Path:
    """Columns r, u, du on the solver grid."""
    base = dict(graph.meta)
    base.update(meta or {})
    base["chart"] = graph.chart
    lines = _meta_lines(base)
    lines.append("r,u,du")
    for row in zip(graph.r_grid, graph.u, graph.du):
        lines.append(",".join(fmt(v) for v in row))
    return _write_lines(path, lines)


def export_report_json(report, path) -> Path:
    """Diagnostics report as stable-ordered JSON."""
    payload = report.to_dict() if hasattr(report, "to_dict") else report
    path = _open_out(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True,
                               default=float) + "\n", newline="\n")
    return path


def export_trajectory_csv(trajectory, path, meta=None) -> Path:
    """Columns tau, F, D, dF_dtau (centered differences, blank at ends)."""
    taus = trajectory.taus
    F = trajectory.F_values
    D = trajectory.defect_values
    dF = np.full_like(F, np.nan)
    if taus.size >= 3:
        dF[1:-1] = (F[2:] - F[:-2]) / (taus[2:] - taus[:-2])
    base = dict(trajectory.meta)
    base.update(meta or {})
    lines = _meta_lines(base)
    lines.append("tau,F,D,dF_dtau")
    for tau, f, d, g in zip(taus, F, D, dF):
        tail = "" if np.isnan(g) else fmt(g)
        lines.append(f"{fmt(tau)},{fmt(f)},{fmt(d)},{tail}")
    return _write_lines(path, lines)


def export_mesh_obj(mesh: SolitonMesh, path, meta=None) -> Path:
    """Wavefront OBJ with 1-based faces and a metadata comment header."""
    if mesh.n_vertices == 0 or mesh.n_faces == 0:
        raise ValueError("nothing to export: empty mesh")
    base = dict(mesh.meta)
    base.update(meta or {})
    base["chart"] = mesh.chart
    lines = _meta_lines(base)
    for v in mesh.vertices:
        lines.append(f"v {fmt(v[0])} {fmt(v[1])} {fmt(v[2])}")
    for f in mesh.faces:
        lines.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    return _write_lines(path, lines)


def load_obj(path):
    """Vertices and 0-based triangle faces of an OBJ file."""
    verts, faces = [], []
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(tok.split("/")[0]) - 1 for tok in parts[1:4]]
            faces.append(idx)
    return np.asarray(verts, dtype=float), np.asarray(faces, dtype=int)


def export_points_csv(points, path, heights=None, meta=None) -> Path:
    """Hyperboloid point rows x0..xn, optionally with a height column."""
    lines = _meta_lines(meta or {})
    arrs = [p.array if hasattr(p, "array") else np.asarray(p, dtype=float)
            for p in points]
    if not arrs:
        raise ValueError("nothing to export: empty point set")
    dim = arrs[0].size
    header = ",".join(f"x{i}" for i in range(dim))
    if heights is not None:
        header += ",height"
    lines.append(header)
    for i, arr in enumerate(arrs):
        row = ",".join(fmt(v) for v in arr)
        if heights is not None:
            row += f",{fmt(heights[i])}"
        lines.append(row)
    return _write_lines(path, lines)


def read_points_csv(path):
    """Inverse of export_points_csv; returns (coords array, heights or None)."""
    rows, has_height = [], False
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("x0"):
            has_height = line.rstrip().endswith("height")
            continue
        rows.append([float(v) for v in line.split(",")])
    data = np.asarray(rows, dtype=float)
    if data.size == 0:
        raise ValueError(f"no point rows in {path}")
    if has_height:
        return data[:, :-1], data[:, -1]
    return data, None
