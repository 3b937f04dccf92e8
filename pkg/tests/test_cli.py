import json
import subprocess
import sys

import pytest

from spinorbit.cli import build_parser, main


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "spinorbit", *args], capture_output=True, text=True, cwd=cwd)


def test_help_documents_gamma_convention():
    text = build_parser().format_help()
    assert "anticlockwise from" in text and "vertical" in text
    res = run("render", "--help")
    assert res.returncode == 0 and "anticlockwise" in res.stdout


def test_render_writes_files(tmp_path):
    res = run("render", "--scenario", "lg-input", "--alpha", "45deg", "--grid-size", "32", "--out", str(tmp_path), "--format", "pgm", "--format", "json")
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "lg-input_portc.pgm").exists()
    doc = json.loads((tmp_path / "lg-input_report.json").read_text())
    assert doc["metrics"]["modulation_depth"]["c"][0] == pytest.approx(2**-0.5, abs=1e-9)


def test_sweep_requires_sweep_flag(tmp_path, capsys):
    assert main(["sweep", "--out", str(tmp_path)]) == 2
    assert "sweep" in capsys.readouterr().err


def test_sweep_rotation(tmp_path):
    code = main(["sweep", "--gamma", "45deg", "--sweep", "beta:0deg:180deg:5", "--grid-size", "32", "--out", str(tmp_path), "--format", "json"])
    assert code == 0
    doc = json.loads((tmp_path / "balanced-vector_report.json").read_text())
    assert doc["metrics"]["rotation_deg"]["c"] == pytest.approx([0, 22.5, 45, 67.5, 90], abs=1e-9)


def test_bad_angle_exit_code(tmp_path):
    res = run("render", "--theta", "3", "--out", str(tmp_path))
    assert res.returncode == 2
    assert "explicit unit" in res.stderr or "cannot parse" in res.stderr


def test_unwritable_output_exit_code(tmp_path):
    f = tmp_path / "f"
    f.write_text("")
    assert main(["render", "--grid-size", "16", "--out", str(f / "x")]) == 3


def test_config_file_with_override(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("scenario = lg-input\nalpha = 0deg\ngrid-size = 16\nformat = json\n")
    assert main(["render", "--config", str(cfg), "--alpha", "90deg", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "lg-input_report.json").read_text())
    assert doc["config"]["angles_rad"]["alpha"] == pytest.approx(1.5707963267948966)
    assert doc["metrics"]["modulation_depth"]["c"][0] < 1e-12


def test_hom_subcommand(tmp_path):
    assert main(["hom", "--sweep", "delta:0rad:pi:5", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "biphoton-sweep_report.json").read_text())
    assert doc["metrics"]["coincidence_probability"] == pytest.approx([1, 0.5, 0, 0.5, 1], abs=1e-12)


def test_selftest_passes_and_reports(tmp_path):
    res = run("selftest", "--out", str(tmp_path))
    assert res.returncode == 0, res.stdout + res.stderr
    doc = json.loads((tmp_path / "selftest_report.json").read_text())
    assert doc["passed"] and doc["schema_version"]
    assert all(line.startswith("PASS") for line in res.stdout.splitlines()[:-1])


def test_console_script_entry_point():
    res = subprocess.run(["spinorbit", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "render" in res.stdout
