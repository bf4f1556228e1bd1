"""Downlink channel generation and bounded-error geometry.

Estimated channels follow Rician small-scale fading scaled by a
distance power-law path loss. The true channel is the estimate plus an
error vector confined to the ball ||e||^2 <= psi*||h_hat||^2; the
functions here evaluate the received-power minimum over that ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FadingParams:
    """Rician fading plus power-law path loss.

    rician_k_db: ratio of specular to scattered power, in dB
                 (-inf gives pure Rayleigh scattering)
    pathloss_exponent: power-law decay exponent
    distance_m: transmitter-receiver distance in meters
    """

    rician_k_db: float
    pathloss_exponent: float
    distance_m: float

    def __post_init__(self):
        if not self.distance_m > 0:
            raise ValueError(f"distance_m must be positive, got {self.distance_m}")
        if not self.pathloss_exponent > 0:
            raise ValueError(
                f"pathloss_exponent must be positive, got {self.pathloss_exponent}"
            )


@dataclass(frozen=True)
class ChannelEstimate:
    """Estimated downlink channel vector with its cached power gain.

    h_hat: complex vector, one entry per transmit antenna (read-only copy)
    norm_sq: ||h_hat||^2
    """

    h_hat: np.ndarray
    norm_sq: float = field(init=False)

    def __post_init__(self):
        h = np.array(self.h_hat, dtype=complex, copy=True)
        if h.ndim != 1 or h.size < 1:
            raise ValueError(f"h_hat must be a non-empty 1-D vector, got shape {h.shape}")
        h.setflags(write=False)
        norm_sq = float(np.sum(np.abs(h) ** 2))
        if not norm_sq > 0.0:
            raise ValueError("degenerate all-zero channel estimate")
        object.__setattr__(self, "h_hat", h)
        object.__setattr__(self, "norm_sq", norm_sq)

    @property
    def m(self) -> int:
        return self.h_hat.size


def pathloss_gain(params: FadingParams) -> float:
    """Dimensionless power gain d^(-alpha), unit gain at 1 m reference."""
    return params.distance_m ** (-params.pathloss_exponent)


def sample_channel(params: FadingParams, m: int, rng: np.random.Generator) -> ChannelEstimate:
    """Draw one estimated channel of length m from the given random stream.

    Each entry is sqrt(G) * (sqrt(K/(K+1))*e^(j*theta) + sqrt(1/(K+1))*g)
    with G the path-loss gain, K the linear Rician factor, theta a
    uniform specular phase per antenna and g unit-variance circularly
    symmetric complex Gaussian. Bit-exact reproducible for a given rng
    state; draw order is fixed (phases first, then scatter).
    """
    if m < 1:
        raise ValueError(f"antenna count must be >= 1, got {m}")
    k_lin = 10.0 ** (params.rician_k_db / 10.0)
    if np.isinf(k_lin):
        los_amp, scatter_amp = 1.0, 0.0
    else:
        los_amp = np.sqrt(k_lin / (k_lin + 1.0))
        scatter_amp = np.sqrt(1.0 / (k_lin + 1.0))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=m)
    g = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
    h = np.sqrt(pathloss_gain(params)) * (los_amp * np.exp(1j * theta) + scatter_amp * g)
    return ChannelEstimate(h_hat=h)


def _check_psi(psi: float) -> None:
    if not (0.0 <= psi < 1.0):
        raise ValueError(f"error factor psi must be in [0, 1), got {psi}")


def worst_case_error(estimate: ChannelEstimate, psi: float) -> np.ndarray:
    """Extremal in-ball error -sqrt(psi)*h_hat, anti-parallel to the estimate.

    Its norm sits exactly on the ball boundary: ||e||^2 = psi*||h_hat||^2.
    psi >= 1 is rejected: the ball would contain -h_hat and the worst-case
    received power degenerates to zero.
    """
    _check_psi(psi)
    return -np.sqrt(psi) * estimate.h_hat


def worst_case_gain_mrt(estimate: ChannelEstimate, w: np.ndarray, psi: float) -> float:
    """Received power (1-sqrt(psi))^2 * |h_hat^H w|^2 under the anti-parallel error.

    This equals the exact ball minimum whenever w is collinear with the
    estimate (the maximum-ratio beamformer the solver produces); for a
    general w it evaluates one particular in-ball error and therefore
    upper-bounds the true minimum (see worst_case_gain_ball).
    """
    _check_psi(psi)
    inner = np.vdot(estimate.h_hat, np.asarray(w))
    return float((1.0 - np.sqrt(psi)) ** 2 * np.abs(inner) ** 2)


def worst_case_gain_ball(estimate: ChannelEstimate, w: np.ndarray, psi: float) -> float:
    """Exact minimum of |(h_hat+e)^H w|^2 over the ball ||e||^2 <= psi*||h_hat||^2.

    Cauchy-Schwarz: the ball shrinks |h_hat^H w| by at most
    sqrt(psi)*||h_hat||*||w||, and can null it entirely once that radius
    exceeds the aligned component.
    """
    _check_psi(psi)
    w = np.asarray(w)
    aligned = np.abs(np.vdot(estimate.h_hat, w))
    radius = np.sqrt(psi * estimate.norm_sq) * np.linalg.norm(w)
    return float(max(aligned - radius, 0.0) ** 2)
