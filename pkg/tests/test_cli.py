"""End-to-end command line behavior and exit codes."""

import json

import pytest

from soliton_forge.cli import main
from soliton_forge.diagnostics import perturb_curve
from soliton_forge.fileio import export_profile_csv, read_profile_csv


def run(*argv):
    return main(list(argv))


class TestSolitonCommand:
    def test_bowl_end_to_end(self, tmp_path, capsys):
        code = run("--out", str(tmp_path), "soliton", "bowl", "--K", "-1",
                   "--n", "2", "--c", "1", "--r-max", "6")
        assert code == 0
        assert (tmp_path / "bowl.csv").exists()
        assert (tmp_path / "bowl_diagnostics.json").exists()
        assert (tmp_path / "bowl.obj").exists()
        assert "diagnostics: pass" in capsys.readouterr().out

    def test_wing_epsilon_zero_is_usage_error(self, tmp_path):
        assert run("--out", str(tmp_path), "soliton", "wing",
                   "--epsilon", "0") == 1

    def test_unknown_flag(self, tmp_path):
        assert run("--out", str(tmp_path), "soliton", "bowl",
                   "--frobnicate", "1") == 1

    def test_grim_writes_graph_csv(self, tmp_path):
        code = run("--out", str(tmp_path), "soliton", "grim",
                   "--r-max", "8", "--tag", "reaper")
        assert code == 0
        assert (tmp_path / "reaper.csv").exists()

    def test_reruns_identical(self, tmp_path):
        for sub in ("one", "two"):
            assert run("--out", str(tmp_path / sub), "soliton", "bowl",
                       "--r-max", "4") == 0
        a = (tmp_path / "one" / "bowl.csv").read_bytes()
        b = (tmp_path / "two" / "bowl.csv").read_bytes()
        assert a == b


class TestVerifyCommand:
    @pytest.fixture()
    def bowl_csv(self, tmp_path):
        assert run("--out", str(tmp_path), "soliton", "bowl",
                   "--r-max", "6") == 0
        return tmp_path / "bowl.csv"

    def test_clean_input_passes(self, bowl_csv, tmp_path):
        assert run("--out", str(tmp_path), "verify", "--input",
                   str(bowl_csv)) == 0
        assert (tmp_path / "bowl_verify.json").exists()

    def test_perturbed_input_fails(self, bowl_csv, tmp_path):
        curve = read_profile_csv(bowl_csv)
        bad = perturb_curve(curve, amplitude=1e-3)
        bad_path = tmp_path / "tampered.csv"
        export_profile_csv(bad, bad_path, meta=curve.meta)
        assert run("--out", str(tmp_path), "verify", "--input",
                   str(bad_path)) == 2

    def test_missing_input(self, tmp_path):
        assert run("--out", str(tmp_path), "verify", "--input",
                   str(tmp_path / "absent.csv")) == 1


class TestFlowCommand:
    def test_soliton_smoke(self, tmp_path, capsys):
        code = run("--out", str(tmp_path), "flow", "--R", "5",
                   "--nodes", "201", "--scheme", "implicit",
                   "--dtau", "1e-3", "--horizon", "0.01")
        assert code == 0
        assert (tmp_path / "flow_trajectory.csv").exists()
        assert (tmp_path / "flow_initial.csv").exists()
        assert (tmp_path / "flow_final.csv").exists()
        assert "F non-increasing" in capsys.readouterr().out

    def test_bad_initial(self, tmp_path):
        assert run("--out", str(tmp_path), "flow", "--initial",
                   "wavelet") == 1


class TestIsometryCommand:
    def test_hyperbolic_map(self, tmp_path):
        from soliton_forge import embed_polar
        from soliton_forge.fileio import export_points_csv, read_points_csv
        pts = [embed_polar(r, [1.0, 0.0]) for r in (0.0, 1.0)]
        src = tmp_path / "pts.csv"
        export_points_csv(pts, src, heights=[0.0, 2.0])
        code = run("--out", str(tmp_path), "isometry", "--map", "hyperbolic",
                   "--param", "1.0", "--points", str(src))
        assert code == 0
        coords, heights = read_points_csv(tmp_path / "points_hyperbolic_1.csv")
        # the marked point lands on the origin; heights ride along
        assert coords[1][0] == pytest.approx(1.0, abs=1e-14)
        assert list(heights) == [0.0, 2.0]

    def test_map_required(self, tmp_path):
        src = tmp_path / "pts.csv"
        src.write_text("x0,x1,x2\n1.0,0.0,0.0\n")
        assert run("--out", str(tmp_path), "isometry", "--points",
                   str(src)) == 1


class TestConfigPrecedence:
    def test_flag_beats_config_beats_default(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"c": 2.0, "r_max": 4.0}))
        assert run("--config", str(cfg), "--out", str(tmp_path / "a"),
                   "soliton", "bowl", "--c", "1.5") == 0
        meta = read_profile_csv(tmp_path / "a" / "bowl.csv").meta
        assert float(meta["c"]) == 1.5  # flag wins
        assert run("--config", str(cfg), "--out", str(tmp_path / "b"),
                   "soliton", "bowl") == 0
        meta = read_profile_csv(tmp_path / "b" / "bowl.csv").meta
        assert float(meta["c"]) == 2.0  # config beats the built-in default


class TestSweepCommand:
    def test_wing_gap_monotone(self, tmp_path):
        code = run("--out", str(tmp_path), "sweep", "--family", "wing",
                   "--epsilons", "0.1,0.5,1.0", "--r-max", "8")
        assert code == 0
        text = (tmp_path / "sweep_wing.csv").read_text()
        assert text.splitlines()[0] == "epsilon,r_turn,gap,lower,upper,pass"

    def test_bowl_sweep(self, tmp_path):
        code = run("--out", str(tmp_path), "sweep", "--family", "bowl",
                   "--c-values", "0.5,1.0", "--r-max", "6")
        assert code == 0
        assert (tmp_path / "sweep_bowl.csv").exists()

    def test_wing_sweep_needs_epsilons(self, tmp_path):
        assert run("--out", str(tmp_path), "sweep", "--family", "wing") == 1
