import json

import numpy as np
import pytest

from alphamod.cli import main
from alphamod.grids import (SampledGrid, Signal, load_signal_csv,
                            save_signal_csv)


@pytest.fixture()
def chirp_csv(tmp_path, chirp):
    path = tmp_path / "chirp.csv"
    save_signal_csv(chirp, path)
    return str(path)


def run(*argv):
    return main(list(argv))


def test_admissible_gaussian(tmp_path):
    out = tmp_path / "adm"
    code = run("admissible", "--window", "gaussian", "--alpha", "0.5",
               "--xi-max", "40", "--scan-nodes", "401",
               "--output-dir", str(out))
    assert code == 0
    report = json.loads((out / "admissible.json").read_text())
    assert report["admissible"] and report["A"] > 0
    assert report["hypothesis"]["passed"]
    curve = np.loadtxt(out / "m_curve.csv", delimiter=",", skiprows=1)
    assert curve.shape == (401, 2)


def test_admissible_rejects_alpha_one(tmp_path):
    assert run("admissible", "--window", "gaussian", "--alpha", "1.0",
               "--output-dir", str(tmp_path)) == 2


def test_admissible_hypothesis_failure_exit(tmp_path):
    # bspline(1) decays too slowly for alpha = 0.9
    code = run("admissible", "--window", "bspline:1", "--alpha", "0.9",
               "--xi-max", "20", "--scan-nodes", "201",
               "--output-dir", str(tmp_path))
    assert code == 1
    report = json.loads((tmp_path / "admissible.json").read_text())
    assert not report["hypothesis"]["passed"]


def test_frame_info(tmp_path):
    out = tmp_path / "fi"
    code = run("frame-info", "--alpha", "0.5", "--eps", "0.25",
               "--grid-n", "64", "--grid-spacing", "0.25",
               "--time-range=-8,8", "--freq-range=-2,2",
               "--output-dir", str(out))
    assert code == 0
    report = json.loads((out / "frame_info.json").read_text())
    assert report["A_est"] > 0
    assert report["A_est"] <= report["B_est"]
    assert report["covers_region"] and report["moderate"]


def test_roundtrip_chirp(tmp_path, chirp_csv):
    out = tmp_path / "rt"
    code = run("roundtrip", chirp_csv, "--alpha", "0.5", "--eps", "0.25",
               "--output-dir", str(out))
    assert code == 0
    report = json.loads((out / "roundtrip.json").read_text())
    assert report["error"] <= report["threshold"]
    rec = load_signal_csv(out / "reconstructed.csv")
    orig = load_signal_csv(chirp_csv)
    rel = np.linalg.norm(rec.values - orig.values) \
        / np.linalg.norm(orig.values)
    assert rel <= 1e-6


def test_roundtrip_zero_signal(tmp_path):
    grid = SampledGrid.centered(128, 1.0 / 16.0)
    path = tmp_path / "zero.csv"
    save_signal_csv(Signal(grid, np.zeros(128, dtype=complex)), path)
    out = tmp_path / "rtz"
    assert run("roundtrip", str(path), "--alpha", "0.5", "--eps", "0.25",
               "--output-dir", str(out)) == 0
    assert json.loads((out / "roundtrip.json").read_text())["error"] == 0.0


def test_roundtrip_undersampled_fails_threshold(tmp_path, chirp_csv):
    out = tmp_path / "rt4"
    code = run("roundtrip", chirp_csv, "--alpha", "0.5", "--eps", "4",
               "--output-dir", str(out))
    assert code == 1
    report = json.loads((out / "roundtrip.json").read_text())
    assert report["error"] > report["threshold"]


def test_roundtrip_missing_input(tmp_path):
    assert run("roundtrip", str(tmp_path / "nope.csv"),
               "--output-dir", str(tmp_path)) == 2


def test_analyze_then_synthesize(tmp_path, chirp_csv):
    out = tmp_path / "an"
    code = run("analyze", chirp_csv, "--alpha", "0.5", "--eps", "0.25",
               "--output-dir", str(out))
    assert code == 0
    assert (out / "coefficients.bin").exists()
    assert (out / "coefficients.bin.json").exists()
    assert (out / "coefficients.csv").exists()
    code = run("synthesize", str(out / "coefficients.bin"),
               "--alpha", "0.5", "--eps", "0.25",
               "--output", str(out / "synth.csv"),
               "--output-dir", str(out))
    assert code == 0
    synth = load_signal_csv(out / "synth.csv")
    orig = load_signal_csv(chirp_csv)
    assert synth.grid.isclose(orig.grid)
    # synthesis of raw analysis coefficients is S f, not f: same energy
    # scale but not equal
    assert synth.norm() > 0


def test_coorbit_norm(tmp_path, chirp_csv, capsys):
    code = run("coorbit-norm", chirp_csv, "--alpha", "0.5",
               "--p", "2", "--s", "0",
               "--xi-max", "40", "--scan-nodes", "401",
               "--output-dir", str(tmp_path))
    assert code == 0
    out = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert out["norm"] > 0


def test_covering_dump(tmp_path):
    out = tmp_path / "cov"
    code = run("covering-dump", "--alpha", "0.5", "--eps", "0.5",
               "--output-dir", str(out))
    assert code == 0
    files = list(out.glob("*.csv"))
    assert files
    data = np.loadtxt(files[0], delimiter=",", skiprows=1)
    assert data.shape[1] == 8


def test_diagnostics_empty_eps_list(tmp_path):
    assert run("diagnostics", "--eps-list", "", "--alpha", "0.5",
               "--output-dir", str(tmp_path)) == 2


def test_config_file_with_flag_override(tmp_path, chirp_csv):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 0.5, "eps": 4.0,
                               "output_dir": str(tmp_path / "cfgout")}))
    # flag overrides the bad eps from the file
    code = run("roundtrip", chirp_csv, "--config", str(cfg),
               "--eps", "0.25")
    assert code == 0
    assert (tmp_path / "cfgout" / "roundtrip.json").exists()


def test_config_file_invalid_key(tmp_path, chirp_csv):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpah": 0.5}))
    assert run("roundtrip", chirp_csv, "--config", str(cfg),
               "--output-dir", str(tmp_path)) == 2


def test_deterministic_reports(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run("frame-info", "--alpha", "0.5", "--eps", "0.25",
                   "--grid-n", "64", "--grid-spacing", "0.25",
                   "--time-range=-8,8", "--freq-range=-2,2",
                   "--output-dir", str(out)) == 0
        outs.append((out / "frame_info.json").read_text())
    assert outs[0] == outs[1]
