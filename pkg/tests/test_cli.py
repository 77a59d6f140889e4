import json

import numpy as np
import pytest

from curveflow.cli import main

CIRCLE_CFG = """
[curve]
kind = "circle"
samples = 128
[curve.params]
radius = 1.0

[flow]
stop_max_time = 0.1
record_every = 10

[run]
monitors = []
output_dir = "{out}"
"""

SPHERE_CFG = """
[curve]
kind = "baseball"
samples = 128
[curve.params]
amplitude = 0.4

[flow]
stop_max_time = 0.02
record_every = 10

[projection]
basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]

[run]
monitors = ["avoidance", "sphericity", "projection"]
output_dir = "{out}"
"""


def write_cfg(tmp_path, template, name="run.toml"):
    out = tmp_path / "out"
    cfg = tmp_path / name
    cfg.write_text(template.format(out=str(out).replace("\\", "/")))
    return cfg, out


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestEvolve:
    def test_circle_run_outputs(self, tmp_path):
        cfg, out = write_cfg(tmp_path, CIRCLE_CFG)
        assert main(["evolve", "--config", str(cfg)]) == 0
        header, rows = read_csv(out / "metrics.csv")
        assert header == ["step", "t", "length", "max_kappa", "min_edge"]
        for cells in rows:
            t = float(cells[1])
            length = float(cells[2])
            assert length == pytest.approx(2 * np.pi * np.sqrt(1 - 2 * t), rel=5e-3)
        assert (out / "report.txt").read_text().startswith("stop_reason: max_time")
        assert (out / "snap_0.curve").exists()
        snap = json.loads((out / "snap_0.curve").read_text())
        assert snap["dim"] == 3

    def test_monitor_columns_present(self, tmp_path):
        cfg, out = write_cfg(tmp_path, SPHERE_CFG)
        assert main(["evolve", "--config", str(cfg)]) == 0
        header, _ = read_csv(out / "metrics.csv")
        for col in ("min_f_D", "C_emp", "schur_margin", "sphere_rms",
                    "sphere_radius", "phi_max", "proj_regular_min"):
            assert col in header

    def test_no_topology_checks_drops_columns(self, tmp_path):
        cfg, out = write_cfg(tmp_path, SPHERE_CFG)
        assert main(["evolve", "--config", str(cfg), "--no-topology-checks"]) == 0
        header, _ = read_csv(out / "metrics.csv")
        assert "min_f_D" not in header
        assert "sphere_rms" in header

    def test_reruns_byte_identical(self, tmp_path):
        cfg1, out1 = write_cfg(tmp_path, CIRCLE_CFG)
        main(["evolve", "--config", str(cfg1)])
        first = (out1 / "metrics.csv").read_bytes()
        main(["evolve", "--config", str(cfg1)])
        assert (out1 / "metrics.csv").read_bytes() == first

    def test_svg_and_chordfield_dumps(self, tmp_path):
        cfg, out = write_cfg(tmp_path, CIRCLE_CFG)
        assert main(["evolve", "--config", str(cfg), "--svg",
                     "--dump-chordfield"]) == 0
        assert (out / "snap_0.svg").read_text().startswith("<svg")
        field = np.loadtxt(out / "chordfield_0.csv", delimiter=",")
        assert field.shape == (128, 128)
        assert field[0, 64] == pytest.approx(4.0, rel=1e-3)

    def test_missing_config(self, tmp_path):
        assert main(["evolve", "--config", str(tmp_path / "absent.toml")]) == 2

    def test_bad_field_named(self, tmp_path, capsys):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("[curve]\nkind = 'circle'\n[flow]\nbogus_knob = 1.0\n")
        assert main(["evolve", "--config", str(cfg)]) == 2
        assert "bogus_knob" in capsys.readouterr().err

    def test_unknown_monitor_named(self, tmp_path, capsys):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("[curve]\nkind = 'circle'\n[run]\nmonitors = ['nope']\n")
        assert main(["evolve", "--config", str(cfg)]) == 2
        assert "nope" in capsys.readouterr().err

    def test_snapshot_input_round_trip(self, tmp_path):
        cfg, out = write_cfg(tmp_path, CIRCLE_CFG)
        main(["evolve", "--config", str(cfg)])
        snaps = sorted(out.glob("snap_*.curve"),
                       key=lambda p: int(p.stem.split("_")[1]))
        resume = tmp_path / "resume.toml"
        out2 = tmp_path / "out2"
        resume.write_text(
            f'[curve]\nsnapshot = "{snaps[-1]}"\n'
            f'[flow]\nstop_max_time = 0.01\n[run]\noutput_dir = "{out2}"\n')
        assert main(["evolve", "--config", str(resume)]) == 0


class TestVerifyCommand:
    def test_unknown_suite(self):
        assert main(["verify", "nope"]) == 2

    def test_frenet_suite_passes(self, capsys):
        assert main(["verify", "frenet"]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out


class TestSweep:
    def test_empty_grid(self, tmp_path):
        cfg, _ = write_cfg(tmp_path, CIRCLE_CFG)
        assert main(["sweep", "--config", str(cfg)]) == 2

    def test_circle_grid(self, tmp_path):
        cfg, out = write_cfg(tmp_path, CIRCLE_CFG)
        assert main(["sweep", "--config", str(cfg), "--vary", "n=64,128"]) == 0
        header, rows = read_csv(out / "sweep.csv")
        assert "radius_error" in header
        errs = [float(r[header.index("radius_error")]) for r in rows]
        assert errs[1] < errs[0]  # finer grid, smaller error

    def test_bad_axis(self, tmp_path):
        cfg, _ = write_cfg(tmp_path, CIRCLE_CFG)
        assert main(["sweep", "--config", str(cfg), "--vary", "nonsense=1,2"]) == 2


def test_list_generators(capsys):
    assert main(["list-generators"]) == 0
    out = capsys.readouterr().out
    for kind in ("circle", "baseball", "twisted_circle", "hypersphere_loop",
                 "random_sphere"):
        assert kind in out
    assert "radius" in out  # parameter names documented
