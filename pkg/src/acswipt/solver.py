"""Closed-form worst-case rate maximization for the AC-computing receiver.

Two-step solution: the beamformer that maximizes received power under
the budget is independent of the splits, so it is fixed first; the
splits then reduce to minimizing rho subject to both energy thresholds,
whose unique balanced optimum has a closed form. Infeasibility is data
(a flagged Solution), never an exception, so Monte Carlo sweeps can
aggregate feasible-fraction statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelEstimate, FadingParams
from .model import EhCurve, NoiseModel, SplitPair, dbm_to_mw, eh_dc, eh_dc_inverse, rate

# rho sitting within this of 1 is classified infeasible: the split bound
# is an open interval and a boundary rho leaves nothing for the decoder
FEASIBILITY_TOL = 1e-12

# floor for a vanished (zero) threshold; keeps the closed form defined
# while honoring the open-interval split constraints
DEGENERATE_FLOOR_MW = 1e-12


@dataclass(frozen=True)
class SystemConfig:
    """Full scenario description.

    m: transmit antenna count
    p_dbm: total transmit power budget (dBm)
    p_circ_dbm: transmit circuit power consumption (dBm)
    noise: receiver noise variances (mW)
    psi: channel error factor, fraction of ||h_hat||^2 bounding ||e||^2
    theta_mw: minimum AC supply power for the computational logic (mW)
    epsilon_mw: minimum harvested DC power (mW)
    curve: nonlinear harvest curve
    fading: channel fading / path-loss parameters
    """

    m: int
    p_dbm: float
    p_circ_dbm: float
    noise: NoiseModel
    psi: float
    theta_mw: float
    epsilon_mw: float
    curve: EhCurve
    fading: FadingParams

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"antenna count m must be >= 1, got {self.m}")
        if dbm_to_mw(self.p_dbm) <= dbm_to_mw(self.p_circ_dbm):
            raise ValueError(
                f"transmit budget p_dbm={self.p_dbm} must exceed circuit power "
                f"p_circ_dbm={self.p_circ_dbm} in linear scale (no radiated power left)"
            )
        if not (0.0 <= self.psi < 1.0):
            raise ValueError(f"error factor psi must be in [0, 1), got {self.psi}")
        if self.theta_mw < 0.0:
            raise ValueError(f"theta_mw must be non-negative, got {self.theta_mw}")
        if not (0.0 <= self.epsilon_mw < self.curve.m_eh_mw):
            raise ValueError(
                f"epsilon_mw={self.epsilon_mw} must lie in [0, {self.curve.m_eh_mw}) mW: "
                "the harvester saturates below any higher demand"
            )

    @property
    def radiated_power_mw(self) -> float:
        """Radiated budget P - P_circ in linear mW."""
        return dbm_to_mw(self.p_dbm) - dbm_to_mw(self.p_circ_dbm)

    @classmethod
    def from_radiated_budget(cls, p0_dbm: float, p_circ_dbm: float, **kwargs) -> "SystemConfig":
        """Build a config whose radiated budget P - P_circ equals p0_dbm exactly."""
        p_mw = dbm_to_mw(p0_dbm) + dbm_to_mw(p_circ_dbm)
        return cls(p_dbm=10.0 * np.log10(p_mw), p_circ_dbm=p_circ_dbm, **kwargs)


@dataclass(frozen=True)
class Solution:
    """Solver output for one channel realization.

    w: beamformer, length m (always filled; it does not depend on the splits)
    splits: optimal (rho, phi), None when infeasible
    gamma_mw: worst-case received signal power at the full budget
    epsilon_bar_mw: harvester input required to meet the DC threshold
    feasible: whether both energy thresholds fit inside the split bounds
    rate_bpshz / sp_ac_mw / eh_dc_mw: worst-case metrics, None when infeasible
    diagnostics: feasibility accounting (required vs available gain,
                 per-threshold shares, any degenerate-threshold clamps)
    """

    w: np.ndarray
    splits: SplitPair | None
    gamma_mw: float
    epsilon_bar_mw: float
    feasible: bool
    rate_bpshz: float | None
    sp_ac_mw: float | None
    eh_dc_mw: float | None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.array(self.w, dtype=complex, copy=True)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)


def optimal_beamformer(estimate: ChannelEstimate, p_mw: float) -> np.ndarray:
    """Budget-scaled beamformer maximizing |h_hat^H w|^2 under ||w||^2 = p_mw.

    The maximizer points along the principal eigenvector of the rank-one
    matrix h_hat h_hat^H, which is h_hat/||h_hat|| itself; no eigensolver
    is needed. Resulting gain: p_mw * ||h_hat||^2.
    """
    if not p_mw > 0.0:
        raise ValueError(f"radiated budget must be positive, got {p_mw} mW")
    return np.sqrt(p_mw) * estimate.h_hat / np.sqrt(estimate.norm_sq)


def worst_case_signal_power(estimate: ChannelEstimate, psi: float, p_mw: float) -> float:
    """Worst-case received power (1-sqrt(psi))^2 * p * ||h_hat||^2 under the optimal beamformer."""
    if not (0.0 <= psi < 1.0):
        raise ValueError(f"error factor psi must be in [0, 1), got {psi}")
    if not p_mw > 0.0:
        raise ValueError(f"radiated budget must be positive, got {p_mw} mW")
    return float((1.0 - np.sqrt(psi)) ** 2 * p_mw * estimate.norm_sq)


def optimal_splits(gamma_mw: float, theta_mw: float, epsilon_bar_mw: float) -> SplitPair:
    """Closed-form optimal splits for given worst-case gain and thresholds.

    phi* = eps_bar/(theta + eps_bar) balances the two energy constraints
    (each threshold met with equality); rho* = (theta + eps_bar)/gamma is
    the smallest energy split that satisfies both, and minimizing rho
    maximizes the rate. Raises when the pair is infeasible (rho* >= 1) or
    a threshold is non-positive; solve() handles those cases as data.
    """
    if not (gamma_mw > 0.0 and theta_mw > 0.0 and epsilon_bar_mw > 0.0):
        raise ValueError(
            "gamma_mw, theta_mw and epsilon_bar_mw must be strictly positive, got "
            f"{gamma_mw}, {theta_mw}, {epsilon_bar_mw}"
        )
    rho = (theta_mw + epsilon_bar_mw) / gamma_mw
    if rho >= 1.0 - FEASIBILITY_TOL:
        raise ValueError(
            f"infeasible: required energy split rho={rho} reaches the open bound at 1 "
            f"(worst-case gain {gamma_mw} mW cannot cover thresholds "
            f"{theta_mw} + {epsilon_bar_mw} mW)"
        )
    phi = epsilon_bar_mw / (theta_mw + epsilon_bar_mw)
    return SplitPair(rho=rho, phi=phi)


def solve(
    config: SystemConfig,
    estimate: ChannelEstimate,
    degenerate_floor_mw: float = DEGENERATE_FLOOR_MW,
) -> Solution:
    """Solve the full worst-case rate maximization for one channel estimate.

    Pipeline: invert the harvest curve to get the required input power,
    fix the budget-scaled beamformer, evaluate the worst-case gain, then
    apply the closed-form splits. Both energy constraints hold with
    equality at the optimum, so the worst-case metrics are evaluated at
    the worst-case gain directly. A zero threshold is clamped to
    degenerate_floor_mw (flagged in diagnostics) to keep the closed form
    inside the open split intervals.
    """
    if estimate.m != config.m:
        raise ValueError(
            f"channel estimate has {estimate.m} entries, config expects m={config.m}"
        )
    p_mw = config.radiated_power_mw
    w = optimal_beamformer(estimate, p_mw)
    gamma = worst_case_signal_power(estimate, config.psi, p_mw)
    eps_bar = eh_dc_inverse(config.epsilon_mw, config.curve)

    clamped = []
    theta_eff = config.theta_mw
    if theta_eff < degenerate_floor_mw:
        theta_eff = degenerate_floor_mw
        clamped.append("theta")
    eps_bar_eff = eps_bar
    if eps_bar_eff < degenerate_floor_mw:
        eps_bar_eff = degenerate_floor_mw
        clamped.append("epsilon_bar")

    required = theta_eff + eps_bar_eff
    diagnostics = {
        "required_gain_mw": required,
        "available_gain_mw": gamma,
        "ac_share": theta_eff / required,
        "dc_share": eps_bar_eff / required,
        "clamped_thresholds": clamped,
    }

    if required / gamma >= 1.0 - FEASIBILITY_TOL:
        diagnostics["binding"] = "ac" if theta_eff >= eps_bar_eff else "dc"
        return Solution(
            w=w,
            splits=None,
            gamma_mw=gamma,
            epsilon_bar_mw=eps_bar,
            feasible=False,
            rate_bpshz=None,
            sp_ac_mw=None,
            eh_dc_mw=None,
            diagnostics=diagnostics,
        )

    splits = optimal_splits(gamma, theta_eff, eps_bar_eff)
    return Solution(
        w=w,
        splits=splits,
        gamma_mw=gamma,
        epsilon_bar_mw=eps_bar,
        feasible=True,
        rate_bpshz=float(rate(gamma, splits.rho, config.noise)),
        sp_ac_mw=float(splits.rho * (1.0 - splits.phi) * gamma),
        eh_dc_mw=float(eh_dc(splits.rho * splits.phi * gamma, config.curve)),
        diagnostics=diagnostics,
    )
