"""Command-line front end: solve, sweeps, validation, deterministic outputs.

Every sweep writes a manifest next to its CSV (config snapshot, grids,
seed, tool version, output checksums); re-running from the manifest
reproduces the files bit-exactly and verifies the recorded checksums.
Exit codes: 0 success, 1 validation/checksum failure, 2 config error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ChannelEstimate, sample_channel
from .config import (
    ConfigError,
    config_from_dict,
    default_config_dict,
    load_config_dict,
)
from .experiments import csi_impact_sweep, rate_energy_region
from .oracle import run_validation
from .solver import solve


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_config(args):
    d = load_config_dict(args.config) if args.config else default_config_dict()
    return config_from_dict(d), d


def _load_channel_file(path, m: int) -> ChannelEstimate:
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read channel file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"channel file {path} is not valid JSON: {e}") from e
    try:
        entries = [complex(re, im) for re, im in data]
    except (TypeError, ValueError) as e:
        raise ConfigError(
            f"channel file {path}: expected a list of [re, im] pairs"
        ) from e
    if len(entries) != m:
        raise ConfigError(
            f"channel file {path} has {len(entries)} entries, config expects m={m}"
        )
    try:
        return ChannelEstimate(h_hat=np.array(entries, dtype=complex))
    except ValueError as e:
        raise ConfigError(f"channel file {path}: {e}") from e


def _write_manifest(path: Path, payload: dict) -> None:
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def _verify_against_manifest(manifest: dict, outputs: dict) -> int:
    recorded = manifest.get("outputs", {})
    mismatched = sorted(
        name
        for name in recorded
        if outputs.get(name) != recorded[name]
    )
    if mismatched:
        print(
            "checksum mismatch against manifest for: " + ", ".join(mismatched),
            file=sys.stderr,
        )
        return 1
    print("outputs match the manifest checksums")
    return 0


def _read_manifest(path) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read manifest {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"manifest {path} is not valid JSON: {e}") from e


def cmd_solve(args) -> int:
    cfg, cfg_dict = _load_config(args)
    if args.channel_file:
        estimate = _load_channel_file(args.channel_file, cfg.m)
    else:
        estimate = sample_channel(cfg.fading, cfg.m, np.random.default_rng([args.seed, 0]))
    sol = solve(cfg, estimate)

    print(f"feasible: {'yes' if sol.feasible else 'no'}")
    print(f"worst-case received power (mW): {sol.gamma_mw!r}")
    print(f"required harvester input (mW): {sol.epsilon_bar_mw!r}")
    if sol.feasible:
        print(f"energy split rho: {sol.splits.rho!r}")
        print(f"harvest sub-split phi: {sol.splits.phi!r}")
        print(f"worst-case rate (bps/Hz): {sol.rate_bpshz!r}")
        print(f"AC supply power (mW): {sol.sp_ac_mw!r} (threshold {cfg.theta_mw!r})")
        print(f"harvested DC power (mW): {sol.eh_dc_mw!r} (threshold {cfg.epsilon_mw!r})")
    else:
        d = sol.diagnostics
        print(
            f"required worst-case power {d['required_gain_mw']!r} mW exceeds "
            f"available {d['available_gain_mw']!r} mW (binding: {d['binding']})"
        )
    print("beamformer entries (magnitude, phase rad):")
    for k, wk in enumerate(sol.w):
        print(f"  {k}: {float(abs(wk))!r}, {float(np.angle(wk))!r}")

    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        record = {
            "feasible": sol.feasible,
            "gamma_mw": sol.gamma_mw,
            "epsilon_bar_mw": sol.epsilon_bar_mw,
            "rho": sol.splits.rho if sol.feasible else None,
            "phi": sol.splits.phi if sol.feasible else None,
            "rate_bpshz": sol.rate_bpshz,
            "sp_ac_mw": sol.sp_ac_mw,
            "eh_dc_mw": sol.eh_dc_mw,
            "w_re": [float(x) for x in sol.w.real],
            "w_im": [float(x) for x in sol.w.imag],
            "diagnostics": sol.diagnostics,
        }
        record_path = outdir / "solution.json"
        with open(record_path, "w") as f:
            json.dump(record, f, indent=2, sort_keys=True)
            f.write("\n")
        _write_manifest(
            outdir / "solution.manifest.json",
            {
                "tool": "acswipt",
                "version": __version__,
                "command": "solve",
                "seed": args.seed,
                "config": cfg_dict,
                "outputs": {"solution.json": _sha256(record_path)},
            },
        )
        print(f"wrote {record_path}")
    return 0


def _run_region(cfg, cfg_dict, grid, seed, realizations, zero_rate, outdir, plot):
    result = rate_energy_region(
        cfg,
        grid["epsilon_grid_mw"],
        grid["theta_ac_mw"],
        grid["theta_dc_mw"],
        realizations,
        seed,
        infeasible_zero_rate=zero_rate,
    )
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "rate_energy_region.csv"
    result.write_csv(csv_path)
    outputs = {csv_path.name: _sha256(csv_path)}
    _write_manifest(
        outdir / "rate_energy_region.manifest.json",
        {
            "tool": "acswipt",
            "version": __version__,
            "command": "region",
            "seed": seed,
            "realizations": realizations,
            "infeasible_zero_rate": zero_rate,
            "config": cfg_dict,
            "grid": grid,
            "outputs": outputs,
        },
    )
    print(f"wrote {csv_path}")
    if plot:
        _plot_region(result, outdir / "rate_energy_region.svg")
    return outputs


def cmd_region(args) -> int:
    if args.from_manifest:
        manifest = _read_manifest(args.from_manifest)
        cfg_dict = manifest["config"]
        cfg = config_from_dict(cfg_dict)
        grid = manifest["grid"]
        seed = manifest["seed"]
        realizations = manifest["realizations"]
        zero_rate = manifest.get("infeasible_zero_rate", False)
    else:
        cfg, cfg_dict = _load_config(args)
        grid = {
            "epsilon_grid_mw": [
                float(e)
                for e in np.logspace(
                    np.log10(args.eps_min), np.log10(args.eps_max), args.eps_points
                )
            ],
            "theta_ac_mw": args.theta_ac_mw,
            "theta_dc_mw": args.theta_dc_mw,
        }
        seed = args.seed
        realizations = args.realizations
        zero_rate = args.infeasible_zero_rate
    outputs = _run_region(
        cfg, cfg_dict, grid, seed, realizations, zero_rate, Path(args.out), args.plot
    )
    if args.from_manifest:
        return _verify_against_manifest(manifest, outputs)
    return 0


def _run_csi(cfg, cfg_dict, grid, seed, realizations, zero_rate, outdir, plot):
    result = csi_impact_sweep(
        cfg,
        grid["p0_grid_dbm"],
        grid["psi_list"],
        realizations,
        seed,
        infeasible_zero_rate=zero_rate,
    )
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "csi_sweep.csv"
    result.write_csv(csv_path)
    outputs = {csv_path.name: _sha256(csv_path)}
    _write_manifest(
        outdir / "csi_sweep.manifest.json",
        {
            "tool": "acswipt",
            "version": __version__,
            "command": "csi-sweep",
            "seed": seed,
            "realizations": realizations,
            "infeasible_zero_rate": zero_rate,
            "config": cfg_dict,
            "grid": grid,
            "outputs": outputs,
        },
    )
    print(f"wrote {csv_path}")
    if plot:
        _plot_csi(result, outdir / "csi_sweep.svg")
    return outputs


def cmd_csi_sweep(args) -> int:
    if args.from_manifest:
        manifest = _read_manifest(args.from_manifest)
        cfg_dict = manifest["config"]
        cfg = config_from_dict(cfg_dict)
        grid = manifest["grid"]
        seed = manifest["seed"]
        realizations = manifest["realizations"]
        zero_rate = manifest.get("infeasible_zero_rate", False)
    else:
        cfg, cfg_dict = _load_config(args)
        n_points = int(round((args.p0_max - args.p0_min) / args.p0_step)) + 1
        grid = {
            "p0_grid_dbm": [args.p0_min + k * args.p0_step for k in range(n_points)],
            "psi_list": [float(p) for p in args.psi],
        }
        seed = args.seed
        realizations = args.realizations
        zero_rate = args.infeasible_zero_rate
    outputs = _run_csi(
        cfg, cfg_dict, grid, seed, realizations, zero_rate, Path(args.out), args.plot
    )
    if args.from_manifest:
        return _verify_against_manifest(manifest, outputs)
    return 0


def cmd_validate(args) -> int:
    cfg, _ = _load_config(args)
    checks = run_validation(cfg, seed=args.seed, level=args.level)
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name:<{width}}  tolerance={c.tolerance:.3e}  margin={c.margin:.3e}")
        if c.detail:
            print(f"      {c.detail}")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        report = [
            {
                "name": c.name,
                "passed": c.passed,
                "tolerance": c.tolerance,
                "margin": c.margin,
                "detail": c.detail,
            }
            for c in checks
        ]
        with open(outdir / "validation_report.json", "w") as f:
            json.dump(report, f, indent=2)
            f.write("\n")
    return 0 if all(c.passed for c in checks) else 1


def _scenario_series(rows, key_index, value_index, axis_index):
    series = {}
    for row in rows:
        series.setdefault(row[key_index], []).append(
            (row[axis_index], np.nan if row[value_index] is None else row[value_index])
        )
    return series


def _save_lines(series, xlabel, ylabel, path):
    try:
        import matplotlib
    except ImportError as e:
        raise ConfigError(
            "plotting requires matplotlib; install the package's plot extra"
        ) from e
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, points in series.items():
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(xs, ys, marker="o", markersize=3, label=str(label))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    print(f"wrote {path}")


def _plot_region(result, path):
    series = _scenario_series(result.rows, key_index=1, value_index=2, axis_index=0)
    _save_lines(
        series, "harvest threshold (mW)", "mean worst-case rate (bps/Hz)", path
    )


def _plot_csi(result, path):
    series = _scenario_series(result.rows, key_index=1, value_index=2, axis_index=0)
    series = {f"error factor {k}": v for k, v in series.items()}
    _save_lines(series, "radiated power (dBm)", "mean worst-case rate (bps/Hz)", path)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acswipt",
        description=(
            "Worst-case robust rate maximization for a power-splitting "
            "receiver that feeds AC computational logic"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="config JSON path (default: bundled config)")
        p.add_argument("--seed", type=int, default=1, help="master random seed")

    p_solve = sub.add_parser("solve", help="solve one channel instance")
    add_common(p_solve)
    p_solve.add_argument(
        "--channel-file",
        help="JSON list of [re, im] pairs to use as the channel estimate",
    )
    p_solve.add_argument("--out", help="directory for solution.json + manifest")
    p_solve.set_defaults(func=cmd_solve)

    p_region = sub.add_parser(
        "region", help="rate vs harvest-threshold sweep for AC and DC demands"
    )
    add_common(p_region)
    p_region.add_argument("--realizations", type=int, default=1000)
    p_region.add_argument("--eps-min", type=float, default=1e-3)
    p_region.add_argument("--eps-max", type=float, default=3.5)
    p_region.add_argument("--eps-points", type=int, default=40)
    p_region.add_argument("--theta-ac-mw", type=float, default=0.00027)
    p_region.add_argument("--theta-dc-mw", type=float, default=0.04764)
    p_region.add_argument(
        "--infeasible-zero-rate",
        action="store_true",
        help="count infeasible realizations as zero rate instead of excluding them",
    )
    p_region.add_argument("--out", default=".", help="output directory")
    p_region.add_argument("--plot", action="store_true", help="also write an SVG chart")
    p_region.add_argument(
        "--from-manifest",
        help="re-run from a manifest and verify the recorded checksums",
    )
    p_region.set_defaults(func=cmd_region)

    p_csi = sub.add_parser(
        "csi-sweep", help="rate vs radiated power for several channel-error sizes"
    )
    add_common(p_csi)
    p_csi.add_argument("--realizations", type=int, default=1000)
    p_csi.add_argument("--p0-min", type=float, default=0.0)
    p_csi.add_argument("--p0-max", type=float, default=20.0)
    p_csi.add_argument("--p0-step", type=float, default=2.0)
    p_csi.add_argument(
        "--psi", type=float, nargs="+", default=[0.0, 0.01, 0.05, 0.1]
    )
    p_csi.add_argument("--infeasible-zero-rate", action="store_true")
    p_csi.add_argument("--out", default=".", help="output directory")
    p_csi.add_argument("--plot", action="store_true", help="also write an SVG chart")
    p_csi.add_argument("--from-manifest")
    p_csi.set_defaults(func=cmd_csi_sweep)

    p_val = sub.add_parser("validate", help="run the brute-force certification suite")
    add_common(p_val)
    p_val.add_argument("--level", choices=("fast", "full"), default="fast")
    p_val.add_argument("--out", help="directory for validation_report.json")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
