"""Scenario configuration: system geometry, link budget, sweep grids.

Configs load from JSON files whose field names carry explicit units
(``*_db``, ``*_dbm``, ``*_m``). A file may set ``"scenario"`` to one
of the built-in names and override individual fields on top of it.
"""

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .ce import CeConfig
from .channel import ChannelSet, PathLossModel, UpaGeometry, draw_channel_set
from .exceptions import ConfigurationError

__all__ = ["SystemConfig", "SCENARIOS", "scenario", "load_config", "config_as_dict"]


@dataclass
class SystemConfig:
    """Everything a run needs besides the search budget.

    ``sinr_targets_db`` is the sweep grid; single-target experiments use
    its last entry. ``noise_dbm`` applies to every user. ``carrier_note``
    is informational only: the math depends on spacing/wavelength ratios,
    never on the absolute carrier.
    """

    bs_geometry: UpaGeometry
    irs_geometry: UpaGeometry
    num_users: int
    phase_bits: int
    paths_bs_irs: int
    paths_irs_user: int
    paths_bs_user: int
    path_loss: PathLossModel
    sinr_targets_db: list[float]
    noise_dbm: float
    seed: int
    monte_carlo_trials: int
    carrier_note: str = "30 GHz mmWave"

    def __post_init__(self):
        if self.num_users < 1:
            raise ConfigurationError(f"num_users must be >= 1, got {self.num_users}")
        if self.num_users > self.bs_geometry.size:
            raise ConfigurationError(
                f"num_users ({self.num_users}) exceeds BS antennas ({self.bs_geometry.size})"
            )
        if self.phase_bits < 1:
            raise ConfigurationError(f"phase_bits must be >= 1, got {self.phase_bits}")
        if self.monte_carlo_trials < 1:
            raise ConfigurationError(
                f"monte_carlo_trials must be >= 1, got {self.monte_carlo_trials}"
            )
        if not self.sinr_targets_db:
            raise ConfigurationError("sinr_targets_db must not be empty")

    @property
    def num_bs_antennas(self) -> int:
        return self.bs_geometry.size

    @property
    def num_irs_elements(self) -> int:
        return self.irs_geometry.size

    def channel_rng(self, trial: int) -> np.random.Generator:
        """Substream for the trial's channel draw, keyed (seed, 0, trial)."""
        return np.random.default_rng((self.seed, 0, trial))

    def draw_channels(self, trial: int) -> ChannelSet:
        """One path-loss-scaled channel realization for the given trial index."""
        return draw_channel_set(
            self.channel_rng(trial),
            geometry_bs=self.bs_geometry,
            geometry_irs=self.irs_geometry,
            num_users=self.num_users,
            paths_bs_irs=self.paths_bs_irs,
            paths_irs_user=self.paths_irs_user,
            paths_bs_user=self.paths_bs_user,
            path_loss=self.path_loss,
        )


def _default_path_loss() -> PathLossModel:
    return PathLossModel(
        distance_bs_irs_m=50.0, distance_irs_user_m=2.0, distance_bs_user_m=60.0
    )


def _desk() -> tuple[SystemConfig, CeConfig]:
    system = SystemConfig(
        bs_geometry=UpaGeometry(4, 2),
        irs_geometry=UpaGeometry(8, 4),
        num_users=2,
        phase_bits=1,
        paths_bs_irs=4,
        paths_irs_user=5,
        paths_bs_user=3,
        path_loss=_default_path_loss(),
        sinr_targets_db=[0.0, 5.0, 10.0, 15.0, 20.0],
        noise_dbm=-90.0,
        seed=42,
        monte_carlo_trials=20,
    )
    ce = CeConfig(num_candidates=50, num_elites=10, num_iterations=50)
    return system, ce


def _tiny() -> tuple[SystemConfig, CeConfig]:
    # exhaustive-search scale: 2 users, 4 antennas, 8 elements
    system = SystemConfig(
        bs_geometry=UpaGeometry(2, 2),
        irs_geometry=UpaGeometry(4, 2),
        num_users=2,
        phase_bits=1,
        paths_bs_irs=4,
        paths_irs_user=5,
        paths_bs_user=3,
        path_loss=_default_path_loss(),
        sinr_targets_db=[0.0, 5.0, 10.0, 15.0, 20.0],
        noise_dbm=-90.0,
        seed=42,
        monte_carlo_trials=20,
    )
    ce = CeConfig(num_candidates=10, num_elites=2, num_iterations=30)
    return system, ce


def _full() -> tuple[SystemConfig, CeConfig]:
    system = SystemConfig(
        bs_geometry=UpaGeometry(8, 8),
        irs_geometry=UpaGeometry(25, 25),
        num_users=4,
        phase_bits=1,
        paths_bs_irs=4,
        paths_irs_user=5,
        paths_bs_user=3,
        path_loss=_default_path_loss(),
        sinr_targets_db=[20.0],
        noise_dbm=-90.0,
        seed=42,
        monte_carlo_trials=10,
    )
    ce = CeConfig(num_candidates=200, num_elites=40, num_iterations=100)
    return system, ce


def _full_far_users() -> tuple[SystemConfig, CeConfig]:
    system, ce = _full()
    system = replace(
        system,
        path_loss=replace(system.path_loss, distance_irs_user_m=10.0),
        sinr_targets_db=[0.0, 5.0, 10.0, 15.0, 20.0],
    )
    return system, ce


# "desk" runs in seconds and is the CI default; "tiny" is small enough for
# exhaustive search; the "full" pair is the opt-in large-array setup
# (minutes to hours per experiment).
SCENARIOS = {
    "desk": _desk,
    "tiny": _tiny,
    "full": _full,
    "full-far-users": _full_far_users,
}


def scenario(name: str) -> tuple[SystemConfig, CeConfig]:
    """Return a fresh (SystemConfig, CeConfig) pair for a built-in scenario."""
    try:
        factory = SCENARIOS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown scenario {name!r}, available: {sorted(SCENARIOS)}"
        ) from None
    return factory()


_GEOMETRY_FIELDS = {"n1", "n2", "spacing_over_wavelength"}
_PATH_LOSS_FIELDS = {
    "distance_bs_irs_m",
    "distance_irs_user_m",
    "distance_bs_user_m",
    "reference_gain",
    "exponent_bs_irs",
    "exponent_irs_user",
    "exponent_bs_user",
}
_SYSTEM_SCALARS = {
    "num_users",
    "phase_bits",
    "paths_bs_irs",
    "paths_irs_user",
    "paths_bs_user",
    "sinr_targets_db",
    "noise_dbm",
    "seed",
    "monte_carlo_trials",
    "carrier_note",
}
_CE_FIELDS = {
    "num_candidates",
    "num_elites",
    "num_iterations",
    "smoothing",
    "stop_when_degenerate",
    "record_models",
}


def _check_keys(section: str, given: dict, allowed: set):
    unknown = set(given) - allowed
    if unknown:
        raise ConfigurationError(
            f"unknown field(s) in {section}: {sorted(unknown)} (allowed: {sorted(allowed)})"
        )


def _merge_system(system: SystemConfig, overrides: dict) -> SystemConfig:
    _check_keys(
        "system", overrides, _SYSTEM_SCALARS | {"bs_geometry", "irs_geometry", "path_loss"}
    )
    updates = {}
    for key in ("bs_geometry", "irs_geometry"):
        if key in overrides:
            _check_keys(f"system.{key}", overrides[key], _GEOMETRY_FIELDS)
            updates[key] = UpaGeometry(**overrides[key])
    if "path_loss" in overrides:
        _check_keys("system.path_loss", overrides["path_loss"], _PATH_LOSS_FIELDS)
        base = asdict(system.path_loss)
        base.update(overrides["path_loss"])
        updates["path_loss"] = PathLossModel(**base)
    for key in _SYSTEM_SCALARS & set(overrides):
        updates[key] = overrides[key]
    try:
        return replace(system, **updates)
    except TypeError as exc:
        raise ConfigurationError(f"bad system config: {exc}") from exc


def load_config(path: str | Path) -> tuple[SystemConfig, CeConfig]:
    """Load a JSON config file, layered over its base scenario.

    Raises ConfigurationError naming the offending field on bad input and
    FileNotFoundError (with the path) when the file is missing.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    _check_keys("config", raw, {"scenario", "system", "ce"})
    system, ce = scenario(raw.get("scenario", "desk"))
    if "system" in raw:
        system = _merge_system(system, raw["system"])
    if "ce" in raw:
        _check_keys("ce", raw["ce"], _CE_FIELDS)
        try:
            ce = replace(ce, **raw["ce"])
        except TypeError as exc:
            raise ConfigurationError(f"bad ce config: {exc}") from exc
    return system, ce


def config_as_dict(system: SystemConfig, ce: CeConfig) -> dict:
    """JSON-ready echo of a config pair, for run manifests."""
    return {"system": asdict(system), "ce": asdict(ce)}
