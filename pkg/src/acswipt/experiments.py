"""Monte Carlo sweeps over the closed-form solver.

Two studies: the rate-energy region traced by sweeping the DC harvest
threshold under two AC-supply demands, and the impact of channel-error
size across a radiated-power grid. Scenario curves within one sweep
share channel realizations (same per-realization seeds), so dominance
claims hold sample by sample, not only in expectation.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass

import numpy as np

from .channel import sample_channel
from .solver import SystemConfig, solve

REGION_COLUMNS = (
    "epsilon_mw",
    "scenario",
    "mean_rate_bpshz",
    "stderr_rate",
    "mean_eh_mw",
    "feasible_frac",
    "n_feasible",
)

CSI_COLUMNS = (
    "p0_dbm",
    "psi",
    "mean_rate_bpshz",
    "stderr_rate",
    "feasible_frac",
)


@dataclass(frozen=True)
class SweepResult:
    """Tabular sweep output: one row per (axis value, scenario label).

    Cells are plain Python floats/ints/strings; absent statistics (no
    feasible realization, or a single one for the standard error) are
    None and serialize to empty CSV cells.
    """

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    realizations: int
    seed: int

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow(
                    [
                        ""
                        if v is None
                        else (repr(v) if isinstance(v, float) else v)
                        for v in row
                    ]
                )


def _draw_estimates(config: SystemConfig, n: int, seed: int):
    """One channel per realization index, stream keyed by (seed, index)."""
    return [
        sample_channel(config.fading, config.m, np.random.default_rng([seed, i]))
        for i in range(n)
    ]


def _cell_stats(solutions, infeasible_zero_rate: bool):
    """Aggregate one (axis, scenario) cell: means over the feasible set.

    With infeasible_zero_rate, infeasible realizations enter the means
    as zero rate / zero harvest instead of being excluded; the feasible
    count is reported either way.
    """
    n = len(solutions)
    rates = np.array(
        [s.rate_bpshz if s.feasible else 0.0 for s in solutions], dtype=float
    )
    ehs = np.array(
        [s.eh_dc_mw if s.feasible else 0.0 for s in solutions], dtype=float
    )
    feasible = np.array([s.feasible for s in solutions], dtype=bool)
    k = int(feasible.sum())
    if not infeasible_zero_rate:
        rates = rates[feasible]
        ehs = ehs[feasible]
    if rates.size == 0:
        mean_rate = stderr = mean_eh = None
    else:
        mean_rate = float(np.mean(rates))
        mean_eh = float(np.mean(ehs))
        stderr = (
            float(np.std(rates, ddof=1) / np.sqrt(rates.size)) if rates.size > 1 else None
        )
    return mean_rate, stderr, mean_eh, float(k) / n, k


def rate_energy_region(
    config: SystemConfig,
    epsilon_grid_mw,
    theta_ac_mw: float,
    theta_dc_mw: float,
    n_realizations: int,
    seed: int,
    infeasible_zero_rate: bool = False,
) -> SweepResult:
    """Mean worst-case rate vs harvest threshold for the two supply demands.

    For every threshold on the grid, solves each realization twice: once
    with the AC-supply demand and once with the DC one, on identical
    channels. Rows are ordered grid-major with scenario "AC" before "DC".
    """
    epsilon_grid_mw = [float(e) for e in epsilon_grid_mw]
    if not epsilon_grid_mw:
        raise ValueError("epsilon_grid_mw must be non-empty")
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    estimates = _draw_estimates(config, n_realizations, seed)

    rows = []
    for eps in epsilon_grid_mw:
        for label, theta in (("AC", theta_ac_mw), ("DC", theta_dc_mw)):
            cfg = dataclasses.replace(config, theta_mw=theta, epsilon_mw=eps)
            solutions = [solve(cfg, est) for est in estimates]
            mean_rate, stderr, mean_eh, frac, k = _cell_stats(
                solutions, infeasible_zero_rate
            )
            rows.append((eps, label, mean_rate, stderr, mean_eh, frac, k))
    return SweepResult(
        columns=REGION_COLUMNS,
        rows=tuple(rows),
        realizations=n_realizations,
        seed=seed,
    )


def csi_impact_sweep(
    config: SystemConfig,
    p0_grid_dbm,
    psi_list,
    n_realizations: int,
    seed: int,
    infeasible_zero_rate: bool = False,
) -> SweepResult:
    """Mean worst-case rate over a radiated-power grid for several error sizes.

    p0 is the radiated budget P - P_circ in dBm; the total budget is
    rebuilt per cell so the radiated power hits the grid value exactly.
    All cells share the same channel realizations.
    """
    p0_grid_dbm = [float(p) for p in p0_grid_dbm]
    psi_list = [float(p) for p in psi_list]
    if not p0_grid_dbm or not psi_list:
        raise ValueError("p0_grid_dbm and psi_list must be non-empty")
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    for p in psi_list:
        if not (0.0 <= p < 1.0):
            raise ValueError(f"error factor psi must be in [0, 1), got {p}")
    estimates = _draw_estimates(config, n_realizations, seed)

    rows = []
    for p0 in p0_grid_dbm:
        base = SystemConfig.from_radiated_budget(
            p0,
            config.p_circ_dbm,
            m=config.m,
            noise=config.noise,
            psi=config.psi,
            theta_mw=config.theta_mw,
            epsilon_mw=config.epsilon_mw,
            curve=config.curve,
            fading=config.fading,
        )
        for psi in psi_list:
            cfg = dataclasses.replace(base, psi=psi)
            solutions = [solve(cfg, est) for est in estimates]
            mean_rate, stderr, _, frac, _ = _cell_stats(solutions, infeasible_zero_rate)
            rows.append((p0, psi, mean_rate, stderr, frac))
    return SweepResult(
        columns=CSI_COLUMNS,
        rows=tuple(rows),
        realizations=n_realizations,
        seed=seed,
    )
