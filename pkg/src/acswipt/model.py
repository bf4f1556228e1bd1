"""Closed-form link model for the power-splitting receiver with AC computing.

Everything here is a pure function of its arguments: unit conversions,
the decoder rate, the AC supply power, and the saturating nonlinear
harvest curve together with its exact inverse. All powers are linear mW
internally; dBm appears only at configuration and reporting boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# exp() overflows float64 beyond ~709; curve steepness a ~ 1500/mW makes
# naive sigmoid evaluation blow up for inputs above ~0.5 mW
_EXP_CLAMP = 700.0


@dataclass(frozen=True)
class EhCurve:
    """Saturating sigmoid harvest curve.

    m_eh_mw: saturation level of the harvester output (mW)
    a_per_mw: curve steepness (1/mW)
    b_mw: curve center (mW)
    """

    m_eh_mw: float
    a_per_mw: float
    b_mw: float

    def __post_init__(self):
        if not (self.m_eh_mw > 0 and self.a_per_mw > 0 and self.b_mw > 0):
            raise ValueError(
                "EhCurve parameters must be strictly positive, got "
                f"m_eh_mw={self.m_eh_mw}, a_per_mw={self.a_per_mw}, b_mw={self.b_mw}"
            )


@dataclass(frozen=True)
class SplitPair:
    """Receiver power-splitting ratios, both strictly inside (0, 1).

    rho: fraction of received power routed to the energy paths
         (the remaining 1-rho feeds the information decoder)
    phi: sub-split of the energy power between DC harvest (phi) and
         the AC computing supply (1-phi)
    """

    rho: float
    phi: float

    def __post_init__(self):
        if not (0.0 < self.rho < 1.0):
            raise ValueError(f"rho must be in (0, 1), got {self.rho}")
        if not (0.0 < self.phi < 1.0):
            raise ValueError(f"phi must be in (0, 1), got {self.phi}")


@dataclass(frozen=True)
class NoiseModel:
    """Receiver noise variances in linear mW.

    sigma0_sq_mw: antenna (RF front-end) noise variance
    sigma1_sq_mw: noise variance introduced by the information decoder
    """

    sigma0_sq_mw: float
    sigma1_sq_mw: float

    def __post_init__(self):
        if not (self.sigma0_sq_mw > 0 and self.sigma1_sq_mw > 0):
            raise ValueError(
                "noise variances must be strictly positive, got "
                f"sigma0_sq_mw={self.sigma0_sq_mw}, sigma1_sq_mw={self.sigma1_sq_mw}"
            )


def dbm_to_mw(dbm):
    """Convert a power level in dBm to linear milliwatts."""
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw):
    """Convert a power in milliwatts to dBm."""
    return 10.0 * np.log10(mw)


def rate(gain_mw, rho, noise: NoiseModel):
    """Spectral efficiency (bps/Hz) of the information decoder.

    gain_mw is the received signal power |h^H w|^2 and rho the split
    toward the energy paths; only the 1-rho fraction reaches the decoder,
    which inflates the decoder noise by 1/(1-rho).

    log base 2: the unit bps/Hz implies it.
    """
    if np.any(np.less_equal(rho, 0.0)) or np.any(np.greater_equal(rho, 1.0)):
        raise ValueError(f"rho must be in (0, 1), got {rho}")
    if np.any(np.less(gain_mw, 0.0)):
        raise ValueError(f"gain_mw must be non-negative, got {gain_mw}")
    denom = noise.sigma0_sq_mw + noise.sigma1_sq_mw / (1.0 - rho)
    return np.log2(1.0 + gain_mw / denom)


def ac_supply_power(gain_mw, splits: SplitPair):
    """AC signal power (mW) routed to the AC computational logic: rho*(1-phi)*gain."""
    if np.any(np.less(gain_mw, 0.0)):
        raise ValueError(f"gain_mw must be non-negative, got {gain_mw}")
    return splits.rho * (1.0 - splits.phi) * gain_mw


def eh_dc(input_mw, curve: EhCurve):
    """Harvested DC power (mW) for a pre-rectifier input power (mW).

    Normalized sigmoid: zero output at zero input, saturating at the
    curve's m_eh_mw. Exponent arguments are clamped so steep curves do
    not overflow; the clamp does not change any double-precision result.
    """
    if np.any(np.less(input_mw, 0.0)):
        raise ValueError(f"input_mw must be non-negative, got {input_mw}")
    m, a, b = curve.m_eh_mw, curve.a_per_mw, curve.b_mw
    sig = m / (1.0 + np.exp(np.clip(-a * (input_mw - b), -_EXP_CLAMP, _EXP_CLAMP)))
    # zero-input offset, computed with the identical clamp so eh_dc(0) == 0 exactly
    offset = m / (1.0 + np.exp(min(a * b, _EXP_CLAMP)))
    return (sig - offset) / (1.0 - offset / m)


def eh_dc_inverse(target_mw, curve: EhCurve):
    """Pre-rectifier input power (mW) at which the curve outputs target_mw.

    Exact closed-form inversion of eh_dc, strictly increasing in the
    target. The saturation level is unreachable: target >= m_eh_mw is an
    infeasible-target error.
    """
    if np.any(np.less(target_mw, 0.0)):
        raise ValueError(f"target_mw must be non-negative, got {target_mw}")
    if np.any(np.greater_equal(target_mw, curve.m_eh_mw)):
        raise ValueError(
            f"target_mw={target_mw} unreachable: harvester saturates at {curve.m_eh_mw} mW"
        )
    m, a, b = curve.m_eh_mw, curve.a_per_mw, curve.b_mw
    # log-safe form of  b - (1/a)*ln(e^(ab)(m-t) / (e^(ab)t + m)):
    # divide through by e^(ab) so steep curves never overflow
    out = b - (1.0 / a) * (
        np.log(m - target_mw) - np.log(target_mw + m * np.exp(-min(a * b, _EXP_CLAMP)))
    )
    # the exact root is >= 0; float rounding can leave a ~1e-19 negative residue,
    # and target 0 must map to exactly 0
    out = np.where(np.equal(target_mw, 0.0), 0.0, np.maximum(out, 0.0))
    return float(out) if np.ndim(out) == 0 else out
