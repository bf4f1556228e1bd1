"""JSON configuration schema and loaders.

Powers cross the boundary in the units people quote them in (dBm for
budgets and noise, mW for the thresholds and the harvest curve); all
internal arithmetic is linear mW.
"""

from __future__ import annotations

import json
from pathlib import Path

from importlib import resources

from .channel import FadingParams
from .model import EhCurve, NoiseModel, dbm_to_mw, mw_to_dbm
from .solver import SystemConfig


class ConfigError(Exception):
    """Malformed configuration: message names the offending field."""


_TOP_FIELDS = {
    "m",
    "p_dbm",
    "p_circ_dbm",
    "sigma0_sq_dbm",
    "sigma1_sq_dbm",
    "psi",
    "theta_mw",
    "epsilon_mw",
    "eh_curve",
    "fading",
}
_CURVE_FIELDS = {"m_eh_mw", "a_per_mw", "b_mw"}
_FADING_FIELDS = {"rician_k_db", "pathloss_exponent", "distance_m"}


def _require_keys(d: dict, expected: set, where: str) -> None:
    missing = sorted(expected - d.keys())
    unknown = sorted(d.keys() - expected)
    if missing:
        raise ConfigError(f"{where}: missing field(s) {', '.join(missing)}")
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(unknown)}")


def _number(d: dict, key: str, where: str) -> float:
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    return float(v)


def _integer(d: dict, key: str, where: str) -> int:
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def config_from_dict(d: dict) -> SystemConfig:
    """Build a validated SystemConfig from a parsed JSON tree."""
    if not isinstance(d, dict):
        raise ConfigError(f"config root: expected an object, got {type(d).__name__}")
    _require_keys(d, _TOP_FIELDS, "config")
    for section, fields in (("eh_curve", _CURVE_FIELDS), ("fading", _FADING_FIELDS)):
        if not isinstance(d[section], dict):
            raise ConfigError(f"config.{section}: expected an object")
        _require_keys(d[section], fields, f"config.{section}")
    try:
        return SystemConfig(
            m=_integer(d, "m", "config"),
            p_dbm=_number(d, "p_dbm", "config"),
            p_circ_dbm=_number(d, "p_circ_dbm", "config"),
            noise=NoiseModel(
                sigma0_sq_mw=dbm_to_mw(_number(d, "sigma0_sq_dbm", "config")),
                sigma1_sq_mw=dbm_to_mw(_number(d, "sigma1_sq_dbm", "config")),
            ),
            psi=_number(d, "psi", "config"),
            theta_mw=_number(d, "theta_mw", "config"),
            epsilon_mw=_number(d, "epsilon_mw", "config"),
            curve=EhCurve(
                m_eh_mw=_number(d["eh_curve"], "m_eh_mw", "config.eh_curve"),
                a_per_mw=_number(d["eh_curve"], "a_per_mw", "config.eh_curve"),
                b_mw=_number(d["eh_curve"], "b_mw", "config.eh_curve"),
            ),
            fading=FadingParams(
                rician_k_db=_number(d["fading"], "rician_k_db", "config.fading"),
                pathloss_exponent=_number(
                    d["fading"], "pathloss_exponent", "config.fading"
                ),
                distance_m=_number(d["fading"], "distance_m", "config.fading"),
            ),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e


def config_to_dict(config: SystemConfig) -> dict:
    """Serialize a SystemConfig back to the JSON schema (noise in dBm)."""
    return {
        "m": config.m,
        "p_dbm": config.p_dbm,
        "p_circ_dbm": config.p_circ_dbm,
        "sigma0_sq_dbm": float(mw_to_dbm(config.noise.sigma0_sq_mw)),
        "sigma1_sq_dbm": float(mw_to_dbm(config.noise.sigma1_sq_mw)),
        "psi": config.psi,
        "theta_mw": config.theta_mw,
        "epsilon_mw": config.epsilon_mw,
        "eh_curve": {
            "m_eh_mw": config.curve.m_eh_mw,
            "a_per_mw": config.curve.a_per_mw,
            "b_mw": config.curve.b_mw,
        },
        "fading": {
            "rician_k_db": config.fading.rician_k_db,
            "pathloss_exponent": config.fading.pathloss_exponent,
            "distance_m": config.fading.distance_m,
        },
    }


def load_config_dict(path) -> dict:
    """Read and validate a config file, returning the raw JSON tree."""
    try:
        with open(path) as f:
            d = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    config_from_dict(d)
    return d


def load_config(path) -> SystemConfig:
    """Read a config file into a validated SystemConfig."""
    return config_from_dict(load_config_dict(path))


def dump_config(config: SystemConfig, path) -> None:
    """Write a SystemConfig as a schema-conforming JSON file."""
    with open(path, "w") as f:
        json.dump(config_to_dict(config), f, indent=2)
        f.write("\n")


def example_config_path() -> Path:
    """Path of the bundled default configuration file."""
    return Path(str(resources.files("acswipt").joinpath("data", "default_config.json")))


def default_config_dict() -> dict:
    """The bundled default configuration as a raw JSON tree."""
    return load_config_dict(example_config_path())


def default_config() -> SystemConfig:
    """The bundled default configuration, validated."""
    return load_config(example_config_path())
