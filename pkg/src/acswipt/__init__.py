"""Worst-case robust rate maximization for a SWIPT power-splitting receiver
whose computational logic runs directly on the harvested AC signal."""

__version__ = "0.1.0"

from .channel import (
    ChannelEstimate,
    FadingParams,
    pathloss_gain,
    sample_channel,
    worst_case_error,
    worst_case_gain_ball,
    worst_case_gain_mrt,
)
from .config import (
    ConfigError,
    config_from_dict,
    config_to_dict,
    default_config,
    dump_config,
    example_config_path,
    load_config,
)
from .experiments import (
    CSI_COLUMNS,
    REGION_COLUMNS,
    SweepResult,
    csi_impact_sweep,
    rate_energy_region,
)
from .model import (
    EhCurve,
    NoiseModel,
    SplitPair,
    ac_supply_power,
    dbm_to_mw,
    eh_dc,
    eh_dc_inverse,
    mw_to_dbm,
    rate,
)
from .oracle import (
    CheckResult,
    GridSearchResult,
    GridSpec,
    PerturbationReport,
    bisect_harvest_inverse,
    grid_search_splits,
    min_energy_split,
    run_validation,
    sample_error_ball,
    sampled_worst_case_check,
    split_perturbation_check,
)
from .solver import (
    Solution,
    SystemConfig,
    optimal_beamformer,
    optimal_splits,
    solve,
    worst_case_signal_power,
)

__all__ = [
    "__version__",
    "CSI_COLUMNS",
    "ChannelEstimate",
    "CheckResult",
    "ConfigError",
    "EhCurve",
    "FadingParams",
    "GridSearchResult",
    "GridSpec",
    "NoiseModel",
    "PerturbationReport",
    "REGION_COLUMNS",
    "Solution",
    "SplitPair",
    "SweepResult",
    "SystemConfig",
    "ac_supply_power",
    "bisect_harvest_inverse",
    "config_from_dict",
    "config_to_dict",
    "csi_impact_sweep",
    "dbm_to_mw",
    "default_config",
    "dump_config",
    "eh_dc",
    "eh_dc_inverse",
    "example_config_path",
    "grid_search_splits",
    "load_config",
    "min_energy_split",
    "mw_to_dbm",
    "optimal_beamformer",
    "optimal_splits",
    "pathloss_gain",
    "rate",
    "rate_energy_region",
    "run_validation",
    "sample_channel",
    "sample_error_ball",
    "sampled_worst_case_check",
    "solve",
    "split_perturbation_check",
    "worst_case_error",
    "worst_case_gain_ball",
    "worst_case_gain_mrt",
    "worst_case_signal_power",
]
