"""Joint active/passive beamforming for an IRS-assisted mmWave downlink.

The package minimizes base-station transmit power under per-user SINR
constraints: zero-forcing fixes the active precoder for any candidate
IRS phase configuration, and a cross-entropy search optimizes the
discrete reflection phases. Exhaustive search, successive refinement and
random sampling baselines verify the search at small scales.
"""

__version__ = "0.1.0"

from .baselines import BaselineResult, exhaustive_search, random_phases, successive_refinement
from .beamforming import (
    BeamformingSolution,
    ReflectionVector,
    SinrTargets,
    effective_channel,
    score_reflection,
    sinr_audit,
    zf_solution,
)
from .ce import (
    CeConfig,
    CeOutcome,
    CeTrace,
    ProbabilityModel,
    init_model,
    run_ce,
    sample_candidates,
    select_elites,
    update_bernoulli,
    update_categorical,
)
from .channel import (
    ChannelSet,
    PathLossModel,
    PathParams,
    UpaGeometry,
    apply_path_loss,
    draw_channel_set,
    generate_channel_G,
    generate_channel_hd,
    generate_channel_hr,
    steering_vector,
)
from .config import SystemConfig, load_config, scenario
from .exceptions import ConfigurationError, EliteSelectionError, InfeasibleSearchError
from .experiments import CostModel
from .units import db_to_linear, dbm_to_watt, linear_to_db, watt_to_dbm

__all__ = [
    "BaselineResult",
    "BeamformingSolution",
    "CeConfig",
    "CeOutcome",
    "CeTrace",
    "ChannelSet",
    "ConfigurationError",
    "CostModel",
    "EliteSelectionError",
    "InfeasibleSearchError",
    "PathLossModel",
    "PathParams",
    "ProbabilityModel",
    "ReflectionVector",
    "SinrTargets",
    "SystemConfig",
    "UpaGeometry",
    "apply_path_loss",
    "db_to_linear",
    "dbm_to_watt",
    "draw_channel_set",
    "effective_channel",
    "exhaustive_search",
    "generate_channel_G",
    "generate_channel_hd",
    "generate_channel_hr",
    "init_model",
    "linear_to_db",
    "load_config",
    "random_phases",
    "run_ce",
    "sample_candidates",
    "scenario",
    "score_reflection",
    "select_elites",
    "sinr_audit",
    "steering_vector",
    "successive_refinement",
    "update_bernoulli",
    "update_categorical",
    "watt_to_dbm",
    "zf_solution",
]
