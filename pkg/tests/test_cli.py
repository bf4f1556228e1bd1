import hashlib
import importlib.util
import json

import pytest

import acswipt.solver
from acswipt import SplitPair, cli
from acswipt.config import default_config_dict


def _write_config(path, **overrides):
    d = default_config_dict()
    d.update(overrides)
    with open(path, "w") as f:
        json.dump(d, f)
    return str(path)


def _sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_solve_default_config(capsys):
    assert cli.main(["solve"]) == 0
    out = capsys.readouterr().out
    assert "feasible: yes" in out
    assert "energy split rho:" in out
    assert "harvest sub-split phi:" in out
    assert "beamformer entries" in out


def test_solve_deterministic_output(capsys):
    cli.main(["solve", "--seed", "7"])
    first = capsys.readouterr().out
    cli.main(["solve", "--seed", "7"])
    second = capsys.readouterr().out
    assert first == second
    cli.main(["solve", "--seed", "8"])
    assert capsys.readouterr().out != first


def test_solve_channel_file(tmp_path, capsys):
    chan = tmp_path / "chan.json"
    chan.write_text(json.dumps([[0.2, 0.0], [0.0, 0.2], [0.1, 0.1], [-0.1, 0.05]]))
    assert cli.main(["solve", "--channel-file", str(chan)]) == 0
    assert "feasible:" in capsys.readouterr().out


def test_solve_channel_file_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["solve", "--channel-file", str(bad)]) == 2
    assert "config error" in capsys.readouterr().err

    notpairs = tmp_path / "notpairs.json"
    notpairs.write_text(json.dumps([1.0, 2.0, 3.0, 4.0]))
    assert cli.main(["solve", "--channel-file", str(notpairs)]) == 2

    short = tmp_path / "short.json"
    short.write_text(json.dumps([[1.0, 0.0], [0.0, 1.0]]))
    assert cli.main(["solve", "--channel-file", str(short)]) == 2
    assert "expects m=4" in capsys.readouterr().err


def test_solve_infeasible_reports_binding(tmp_path, capsys):
    cfg = _write_config(tmp_path / "c.json", p_dbm=-30.0, p_circ_dbm=-60.0)
    assert cli.main(["solve", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "feasible: no" in out
    assert "exceeds available" in out or "exceeds\navailable" in out.replace("  ", " ")


def test_solve_out_writes_solution_and_manifest(tmp_path):
    outdir = tmp_path / "sol"
    assert cli.main(["solve", "--out", str(outdir)]) == 0
    record = json.loads((outdir / "solution.json").read_text())
    manifest = json.loads((outdir / "solution.manifest.json").read_text())
    assert record["feasible"] is True
    assert isinstance(record["rho"], float) and 0.0 < record["rho"] < 1.0
    assert len(record["w_re"]) == 4
    assert manifest["outputs"]["solution.json"] == _sha256(outdir / "solution.json")
    assert manifest["command"] == "solve"
    assert manifest["config"]["m"] == 4


def test_config_errors_exit_2(tmp_path, capsys):
    no_headroom = _write_config(tmp_path / "a.json", p_dbm=0.0, p_circ_dbm=3.0)
    assert cli.main(["solve", "--config", no_headroom]) == 2
    assert "config error" in capsys.readouterr().err

    saturated = _write_config(tmp_path / "b.json", epsilon_mw=3.9)
    assert cli.main(["solve", "--config", saturated]) == 2
    assert "saturates" in capsys.readouterr().err

    unknown = _write_config(tmp_path / "c.json", mystery_knob=1.0)
    assert cli.main(["solve", "--config", unknown]) == 2
    assert "mystery_knob" in capsys.readouterr().err

    missing = tmp_path / "missing.json"
    assert cli.main(["solve", "--config", str(missing)]) == 2


def _region_args(outdir, seed="3"):
    return [
        "region",
        "--realizations",
        "40",
        "--eps-points",
        "5",
        "--seed",
        seed,
        "--out",
        str(outdir),
    ]


def test_region_outputs_and_reproducibility(tmp_path, capsys):
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    assert cli.main(_region_args(d1)) == 0
    assert cli.main(_region_args(d2)) == 0
    csv1 = (d1 / "rate_energy_region.csv").read_bytes()
    csv2 = (d2 / "rate_energy_region.csv").read_bytes()
    assert csv1 == csv2
    manifest = json.loads((d1 / "rate_energy_region.manifest.json").read_text())
    assert manifest["outputs"]["rate_energy_region.csv"] == _sha256(
        d1 / "rate_energy_region.csv"
    )
    assert manifest["seed"] == 3 and manifest["realizations"] == 40
    assert len(manifest["grid"]["epsilon_grid_mw"]) == 5
    capsys.readouterr()

    d3 = tmp_path / "r3"
    code = cli.main(
        [
            "region",
            "--from-manifest",
            str(d1 / "rate_energy_region.manifest.json"),
            "--out",
            str(d3),
        ]
    )
    assert code == 0
    assert "outputs match the manifest checksums" in capsys.readouterr().out
    assert (d3 / "rate_energy_region.csv").read_bytes() == csv1


def test_region_from_tampered_manifest_fails(tmp_path, capsys):
    d1 = tmp_path / "r1"
    assert cli.main(_region_args(d1)) == 0
    manifest_path = d1 / "rate_energy_region.manifest.json"
    manifest = json.loads(manifest_path.read_text())
    manifest["outputs"]["rate_energy_region.csv"] = "0" * 64
    manifest_path.write_text(json.dumps(manifest))
    capsys.readouterr()
    code = cli.main(
        ["region", "--from-manifest", str(manifest_path), "--out", str(tmp_path / "r2")]
    )
    assert code == 1
    assert "checksum mismatch" in capsys.readouterr().err


def test_region_rejects_zero_realizations(tmp_path, capsys):
    code = cli.main(
        ["region", "--realizations", "0", "--out", str(tmp_path), "--eps-points", "3"]
    )
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_csi_sweep_outputs_and_manifest_rerun(tmp_path, capsys):
    d1 = tmp_path / "c1"
    args = [
        "csi-sweep",
        "--realizations",
        "30",
        "--p0-min",
        "0",
        "--p0-max",
        "4",
        "--p0-step",
        "2",
        "--psi",
        "0.0",
        "0.05",
        "--out",
        str(d1),
    ]
    assert cli.main(args) == 0
    csv_path = d1 / "csi_sweep.csv"
    text = csv_path.read_text()
    assert text.startswith("p0_dbm,psi,mean_rate_bpshz,stderr_rate,feasible_frac\n")
    assert len(text.strip().split("\n")) == 1 + 3 * 2
    manifest = json.loads((d1 / "csi_sweep.manifest.json").read_text())
    assert manifest["grid"]["p0_grid_dbm"] == [0.0, 2.0, 4.0]
    assert manifest["outputs"]["csi_sweep.csv"] == _sha256(csv_path)
    capsys.readouterr()

    d2 = tmp_path / "c2"
    code = cli.main(
        ["csi-sweep", "--from-manifest", str(d1 / "csi_sweep.manifest.json"), "--out", str(d2)]
    )
    assert code == 0
    assert (d2 / "csi_sweep.csv").read_bytes() == csv_path.read_bytes()


def test_csi_rejects_bad_psi(tmp_path, capsys):
    code = cli.main(
        ["csi-sweep", "--realizations", "5", "--psi", "1.0", "--out", str(tmp_path)]
    )
    assert code == 2


def test_validate_fast_passes(tmp_path, capsys):
    outdir = tmp_path / "v"
    assert cli.main(["validate", "--level", "fast", "--out", str(outdir)]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 6
    assert "FAIL" not in out
    assert "tolerance=" in out and "margin=" in out
    report = json.loads((outdir / "validation_report.json").read_text())
    assert len(report) == 6
    assert all(entry["passed"] for entry in report)


def test_validate_detects_injected_fault(monkeypatch, capsys):
    honest = acswipt.solver.optimal_splits

    def skewed(gamma_mw, theta_mw, epsilon_bar_mw):
        s = honest(gamma_mw, theta_mw, epsilon_bar_mw)
        return SplitPair(rho=s.rho, phi=min(s.phi * 1.01, 1.0 - 1e-9))

    monkeypatch.setattr(acswipt.solver, "optimal_splits", skewed)
    assert cli.main(["validate", "--level", "fast"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "grid-equivalence-argmax" in out


def test_region_plot_flag(tmp_path, capsys):
    have_mpl = importlib.util.find_spec("matplotlib") is not None
    code = cli.main(_region_args(tmp_path / "p") + ["--plot"])
    if have_mpl:
        assert code == 0
        assert (tmp_path / "p" / "rate_energy_region.svg").exists()
    else:
        assert code == 2
        assert "matplotlib" in capsys.readouterr().err
