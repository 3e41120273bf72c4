import json

import numpy as np
import pytest
from click.testing import CliRunner

from nonlocal_nls.cli import main


def _write_config(path, potential, **over):
    doc = {
        "potential": potential,
        "window": over.pop("window", {"z_max": 6.0, "n": 257}),
        "rays": over.pop("rays", [0.4]),
        "times": over.pop("times", [20.0, 40.0]),
        "pde": over.pop("pde", {"dt": 0.01}),
    }
    doc.update(over)
    path.write_text(json.dumps(doc))
    return path


ZERO_POT = {"kind": "zero", "amplitude": [0.0, 0.0], "sigma": 1,
            "L": 16.0, "N": 256, "params": {}}
BOX_POT = {"kind": "box", "amplitude": [0.3, 0.0], "sigma": 1,
           "L": 8.0, "N": 256, "params": {"left": -1.0, "right": 1.0}}


@pytest.fixture()
def runner():
    return CliRunner()


def test_scatter_zero_potential(tmp_path, runner):
    cfg = _write_config(tmp_path / "cfg.json", ZERO_POT)
    out = tmp_path / "out"
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out), "scatter"])
    assert res.exit_code == 0, res.output
    rows = (out / "scattering.csv").read_text().strip().splitlines()
    assert rows[0].startswith("z,re_a,im_a,re_b")
    first = rows[1].split(",")
    assert abs(float(first[1]) - 1.0) < 1e-10 and abs(float(first[3])) < 1e-10
    rep = json.loads((out / "genericity.json").read_text())
    assert rep["passed"] and rep["winding"] == 0


def test_scatter_matches_oracle_spotcheck(tmp_path, runner):
    from nonlocal_nls import Potential, exact_box_scattering
    cfg = _write_config(tmp_path / "cfg.json", BOX_POT)
    out = tmp_path / "out"
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out), "scatter"])
    assert res.exit_code == 0, res.output
    raw = np.loadtxt(out / "scattering.csv", delimiter=",", skiprows=1)
    pot = Potential.from_json_dict(BOX_POT)
    a = exact_box_scattering(pot, raw[:, 0])[0]
    assert np.abs(a - (raw[:, 1] + 1j * raw[:, 2])).max() < 1e-6


def test_malformed_json_exits_1(tmp_path, runner):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    res = runner.invoke(main, ["--config", str(bad), "scatter"])
    assert res.exit_code == 1


def test_missing_config_exits_1(runner):
    res = runner.invoke(main, ["scatter"])
    assert res.exit_code == 1


def test_genericity_violation_exits_2(tmp_path, runner):
    pot = dict(BOX_POT, amplitude=[4.5, 0.0], sigma=-1)
    cfg = _write_config(tmp_path / "cfg.json", pot)
    res = runner.invoke(main, ["--config", str(cfg), "--out",
                               str(tmp_path / "o"), "scatter"])
    assert res.exit_code == 2


def test_report_missing_inputs_exits_4(tmp_path, runner):
    cfg = _write_config(tmp_path / "cfg.json", ZERO_POT)
    res = runner.invoke(main, ["--config", str(cfg), "--out",
                               str(tmp_path / "empty"), "report"])
    assert res.exit_code == 4


def test_phase_and_asym_outputs(tmp_path, runner):
    cfg = _write_config(tmp_path / "cfg.json", BOX_POT)
    out = tmp_path / "out"
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out), "phase"])
    assert res.exit_code == 0, res.output
    doc = json.loads((out / "phase.json").read_text())
    assert len(doc["rays"]) == 1
    assert set(doc["rays"][0]) == {"xi", "nu", "delta0", "nu_tail",
                                   "branch_max_arg"}
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out), "asym"])
    assert res.exit_code == 0, res.output
    lines = (out / "asym.csv").read_text().strip().splitlines()
    assert lines[0] == "x,t,xi,re_q,im_q,abs_q,im_nu,validity"
    assert len(lines) == 1 + 2  # one ray x two times


def test_asym_queries_file(tmp_path, runner):
    cfg = _write_config(tmp_path / "cfg.json", BOX_POT)
    qf = tmp_path / "queries.jsonl"
    qf.write_text('{"x": -40.0, "t": 25.0}\n{"x": -96.0, "t": 60.0}\n')
    out = tmp_path / "out"
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out),
                               "asym", "--queries", str(qf)])
    assert res.exit_code == 0, res.output
    lines = (out / "asym.csv").read_text().strip().splitlines()
    assert len(lines) == 3


def test_evolve_csv_and_binary(tmp_path, runner):
    pot = {"kind": "gaussian", "amplitude": [0.1, 0.0], "sigma": 1,
           "L": 64.0, "N": 1024, "params": {"width": 1.0}}
    cfg = _write_config(tmp_path / "cfg.json", pot, times=[])
    out = tmp_path / "out"
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out),
                               "evolve", "--t", "1.0"])
    assert res.exit_code == 0, res.output
    assert (out / "snapshot.csv").exists()
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out),
                               "evolve", "--t", "1.0", "--format", "bin"])
    assert res.exit_code == 0
    blob = (out / "snapshot.bin").read_bytes()
    assert len(blob) == 1024 * 2 * 8
    arr = np.frombuffer(blob, dtype="<f8").reshape(-1, 2)
    csv = np.loadtxt(out / "snapshot.csv", delimiter=",", skiprows=1)
    assert np.allclose(arr[:, 0], csv[:, 1])


def test_determinism_byte_identical(tmp_path, runner):
    cfg = _write_config(tmp_path / "cfg.json", BOX_POT)
    outs = []
    for name in ("o1", "o2"):
        out = tmp_path / name
        res = runner.invoke(main, ["--config", str(cfg), "--out", str(out),
                                   "scatter"])
        assert res.exit_code == 0
        outs.append((out / "scattering.csv").read_bytes())
    assert outs[0] == outs[1]


def test_verify_subcommand(tmp_path, runner):
    cfg = _write_config(tmp_path / "cfg.json", BOX_POT)
    res = runner.invoke(main, ["--config", str(cfg), "--out",
                               str(tmp_path / "o"), "verify"])
    assert res.exit_code == 0, res.output
    assert "PASS" in res.output and "FAIL" not in res.output


def test_compare_and_report_small(tmp_path, runner):
    # tiny but honest end-to-end through the CLI on a light config
    pot = {"kind": "gaussian", "amplitude": [0.08, 0.0], "sigma": 1,
           "L": 128.0, "N": 4096, "params": {"width": 2.0}}
    cfg = _write_config(tmp_path / "cfg.json", pot,
                        rays=[0.25], times=[12.0, 18.0, 27.0],
                        window={"z_max": 8.0, "n": 513},
                        pde={"dt": 0.004}, t_min=10.0)
    out = tmp_path / "out"
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out), "compare"])
    assert res.exit_code == 0, res.output
    lines = (out / "compare.csv").read_text().strip().splitlines()
    assert len(lines) == 4
    res = runner.invoke(main, ["--config", str(cfg), "--out", str(out), "report"])
    assert res.exit_code in (0, 3)   # small-t fit may legitimately miss -0.65
    assert (out / "summary.json").exists()
    assert (out / "plot_long.csv").exists()
