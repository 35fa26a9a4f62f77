import csv
import json
import subprocess
import sys

import pytest

from ddmbem.cli import PRESETS, RunConfig, main, make_mesh, read_config, run_scenario, run_sweep
from ddmbem.mesh import generate_open_box, save_mesh


def _rows(path):
    return list(csv.reader(open(path)))


def test_artificial_sphere_preset(tmp_path):
    out = tmp_path / "art"
    assert main(["--preset", "artificial-sphere-168", "--out", str(out)]) == 0
    sweep = _rows(out / "sweep.csv")
    assert sweep[0] == ["variant", "variant", "iterations", "converged"]
    its = {r[1]: int(r[2]) for r in sweep[1:]}
    assert set(its) == {"Y0", "Y1", "Y2", "Y3"}
    assert its["Y2"] <= 8
    res = _rows(out / "Y2" / "residuals.csv")
    assert res[0] == ["iteration", "relative_residual"]
    assert float(res[-1][1]) <= 1e-6
    run = json.load(open(out / "Y2" / "run.json"))
    for key in ("config", "iterations", "converged", "timings", "residual_norm_definition"):
        assert key in run
    assert run["converged"] and run["interface_dofs"] == 168
    rcs = _rows(out / "Y2" / "rcs.csv")
    assert rcs[0] == ["theta_deg", "phi_deg", "rcs_dbsm"] and len(rcs) == 182


def test_single_variant_writes_flat(tmp_path):
    out = tmp_path / "one"
    code = main(["--mesh", "box:3", "--freq-mhz", "100", "--variant", "y3", "--tol", "1e-6", "--out", str(out)])
    assert code == 0
    for name in ("residuals.csv", "rcs.csv", "run.json"):
        assert (out / name).is_file()
    assert json.load(open(out / "run.json"))["variant"] == "Y3"


def test_missing_mesh_exit_2_no_outputs(tmp_path):
    out = tmp_path / "none"
    assert main(["--mesh", f"file:{tmp_path / 'missing.msh'}", "--out", str(out)]) == 2
    assert not out.exists()


def test_run_json_rerun_is_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["--mesh", "box:3", "--freq-mhz", "100", "--variant", "y2", "--threads", "1", "--out", str(a)]) == 0
    cfg = json.load(open(a / "run.json"))["config"]
    cfg["out"] = str(b)
    assert run_scenario(RunConfig(**cfg)) == 0
    for name in ("residuals.csv", "rcs.csv"):
        assert (a / name).read_text() == (b / name).read_text()


def test_config_file_and_flag_override(tmp_path):
    mesh = tmp_path / "box.msh"
    save_mesh(generate_open_box(resolution=1 / 3), mesh)
    ini = tmp_path / "run.ini"
    ini.write_text(f"[run]\nmesh = file:{mesh}\nfrequency_mhz = 90\nvariant = y1, y2\ntolerance = 1e-5\n")
    values = read_config(ini)
    assert values["variants"] == ["y1", "y2"]
    out = tmp_path / "cfg"
    assert main(["--config", str(ini), "--freq-mhz", "100", "--out", str(out)]) == 0
    run = json.load(open(out / "Y1" / "run.json"))
    assert run["config"]["frequency_mhz"] == 100.0
    assert run["config"]["tolerance"] == 1e-5


def test_bad_config_rejected(tmp_path):
    ini = tmp_path / "bad.ini"
    ini.write_text("[run]\ncolour = blue\n")
    assert main(["--config", str(ini), "--out", str(tmp_path / "x")]) == 2
    assert main(["--variant", "y9", "--out", str(tmp_path / "x")]) == 2
    with pytest.raises(ValueError):
        RunConfig(tolerance=2.0)


def test_frequency_sweep_single_value(tmp_path):
    base = RunConfig(mesh="box:3", frequency_mhz=100.0, variants=("Y0", "Y2"), out=str(tmp_path / "sw"))
    rows = run_sweep(base, "frequency_mhz", [80.0])
    assert [r[1] for r in rows] == ["Y0", "Y2"]
    assert all(r[3] for r in rows)
    sweep = _rows(tmp_path / "sw" / "sweep.csv")
    assert sweep[0] == ["frequency_mhz", "variant", "iterations", "converged"]
    assert len(sweep) == 3


def test_sweep_records_failures_and_continues(tmp_path):
    base = RunConfig(mesh="box:3", variants=("Y0",), max_iterations=2, out=str(tmp_path / "f"))
    rows = run_sweep(base, "frequency_mhz", [90.0, 100.0])
    assert len(rows) == 2 and not any(r[3] for r in rows)


def test_mesh_sources():
    assert make_mesh("uvsphere:0.5:4:3").name.startswith("uvsphere")
    capped = make_mesh("icosphere:1:1:45")
    # metal triangles are stored once per side of the sheet
    assert capped.n_triangles == 80 + int((capped.regions == 0).sum())
    assert make_mesh("box:2").name.startswith("open-box")
    with pytest.raises(FileNotFoundError):
        make_mesh("torus:3")


def test_presets_are_valid():
    for name, values in PRESETS.items():
        RunConfig(**values)


def test_help_lists_presets_and_defaults():
    out = subprocess.run([sys.executable, "-m", "ddmbem", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for word in ("--preset", "--variant", "--freq-mhz", "--tol", "--max-iter", "--inner", "--threads", "--out", "open-box-102"):
        assert word in out.stdout
