import numpy as np
import pytest

from acswipt import (
    EhCurve,
    FadingParams,
    NoiseModel,
    SystemConfig,
    dbm_to_mw,
    eh_dc,
    mw_to_dbm,
    sample_channel,
)

# measurement-campaign style defaults used across the suite
CURVE = EhCurve(m_eh_mw=3.9, a_per_mw=1500.0, b_mw=0.0022)
NOISE = NoiseModel(sigma0_sq_mw=dbm_to_mw(-111.0), sigma1_sq_mw=dbm_to_mw(35.0))
FADING = FadingParams(rician_k_db=6.0, pathloss_exponent=2.6, distance_m=4.0)


@pytest.fixture
def curve():
    return CURVE


@pytest.fixture
def noise():
    return NOISE


@pytest.fixture
def fading():
    return FADING


def make_instance(rng, m=4):
    """Random feasible instance with spread-out target splits.

    Draws a channel, then derives the power budget so the required
    energy split and sub-split land at chosen targets: rho in
    [0.05, 0.9], phi in [0.1, 0.9], harvester input inside the band
    where the curve inverts cleanly in double precision.
    """
    estimate = sample_channel(FADING, m, rng)
    psi = rng.uniform(0.0, 0.25)
    rho_target = rng.uniform(0.05, 0.9)
    phi_target = rng.uniform(0.1, 0.9)
    eps_bar = rng.uniform(1e-4, 0.01)
    theta = eps_bar * (1.0 - phi_target) / phi_target
    gamma_target = (theta + eps_bar) / rho_target
    p_mw = gamma_target / ((1.0 - np.sqrt(psi)) ** 2 * estimate.norm_sq)
    config = SystemConfig(
        m=m,
        p_dbm=float(mw_to_dbm(p_mw)),
        p_circ_dbm=-300.0,
        noise=NOISE,
        psi=float(psi),
        theta_mw=float(theta),
        epsilon_mw=float(eh_dc(eps_bar, CURVE)),
        curve=CURVE,
        fading=FADING,
    )
    return config, estimate


@pytest.fixture
def instance_factory():
    return make_instance
