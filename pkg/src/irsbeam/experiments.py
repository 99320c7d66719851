"""Experiment runners: convergence traces, SINR sweeps, cost comparison,
and the search-vs-oracle gap report.

Each runner returns plain row dicts with a fixed column order so the CSV
schema is the stable interface. Trials are paired by construction: trial
t of any method sees the channel realization drawn from the substream
keyed (seed, 0, t), so cross-method orderings compare like with like.
Trial averages of powers are taken in dBm. Every row carries the master
seed that produced it.
"""

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .baselines import (
    DEFAULT_ENUMERATION_CAP,
    exhaustive_search,
    random_phases,
    successive_refinement,
)
from .beamforming import SinrTargets
from .ce import CeConfig, run_ce
from .config import SystemConfig, config_as_dict
from .exceptions import ConfigurationError
from .units import watt_to_dbm

__all__ = [
    "CostModel",
    "CONVERGENCE_COLUMNS",
    "SWEEP_COLUMNS",
    "COMPLEXITY_COLUMNS",
    "ORACLE_COLUMNS",
    "run_convergence",
    "run_sinr_sweep",
    "run_complexity",
    "run_oracle_compare",
    "write_csv",
    "write_manifest",
]

SWEEP_METHODS = ("ce", "exhaustive", "successive_refinement", "random")

CONVERGENCE_COLUMNS = ["num_candidates", "iteration", "mean_power_dbm", "std_power_dbm", "seed"]
SWEEP_COLUMNS = ["method", "gamma_db", "mean_power_dbm", "std_power_dbm", "mean_evaluations", "seed"]
COMPLEXITY_COLUMNS = [
    "num_irs_elements",
    "phase_bits",
    "ce_model_ops",
    "sr_model_ops",
    "ce_measured_evaluations",
    "sr_measured_evaluations",
    "seed",
]
ORACLE_COLUMNS = ["trial", "power_ce_dbm", "power_exhaustive_dbm", "gap_db", "exact_match", "seed"]


@dataclass
class CostModel:
    """Operation-count models for the two search algorithms.

    The stochastic search costs num_iterations * N * num_candidates * K^2
    operations; successive refinement costs (10 * N) * 2**bits * (K^3 +
    K^2 M + K M N), the 10 * N reflecting that its sweep count to
    convergence grows with the element count. Machine-independent, so
    comparisons do not depend on wall clocks.
    """

    num_iterations: int
    num_candidates: int = 200
    num_elites: int = 40
    num_bs_antennas: int = 64
    num_users: int = 4

    def ce_model_ops(self, num_elements: int) -> float:
        return float(
            self.num_iterations * num_elements * self.num_candidates * self.num_users**2
        )

    def sr_iterations(self, num_elements: int) -> int:
        return 10 * num_elements

    def sr_model_ops(self, num_elements: int, bits: int) -> float:
        k, m = self.num_users, self.num_bs_antennas
        per_iteration = 2**bits * (k**3 + k**2 * m + k * m * num_elements)
        return float(self.sr_iterations(num_elements) * per_iteration)

    def crossover_elements(self, bits: int) -> int:
        """Smallest N from which ce_model_ops < sr_model_ops for all larger N.

        Both costs are linear-plus-quadratic in N with the refinement side
        growing faster, so a single threshold exists.
        """
        k, m = self.num_users, self.num_bs_antennas
        ce_per_element = self.num_iterations * self.num_candidates * k**2
        sr_linear = 10 * 2**bits * (k**3 + k**2 * m)
        sr_quadratic = 10 * 2**bits * k * m
        boundary = (ce_per_element - sr_linear) / sr_quadratic
        return max(1, int(np.floor(boundary)) + 1)


def _targets(system: SystemConfig, gamma_db: float) -> SinrTargets:
    return SinrTargets.from_db(gamma_db, system.noise_dbm, system.num_users)


def _best_so_far_dbm(trace, num_iterations: int) -> np.ndarray:
    """Best-so-far curve in dBm, padded to full length after an early stop."""
    curve = list(trace.best_so_far_w)
    if len(curve) < num_iterations:
        curve += [curve[-1]] * (num_iterations - len(curve))
    return watt_to_dbm(np.array(curve))


def run_convergence(
    system: SystemConfig,
    ce_configs: Sequence[CeConfig],
    gamma_db: float | None = None,
) -> list[dict]:
    """Average best-so-far power per iteration for each candidate budget.

    One row per (num_candidates, iteration); power statistics are across
    ``system.monte_carlo_trials`` paired channel draws at the single
    target ``gamma_db`` (last sweep entry by default).
    """
    if gamma_db is None:
        gamma_db = system.sinr_targets_db[-1]
    targets = _targets(system, gamma_db)
    rows = []
    for cfg in ce_configs:
        curves = []
        for trial in range(system.monte_carlo_trials):
            channels = system.draw_channels(trial)
            outcome = run_ce(channels, targets, system.phase_bits, cfg, seed=(system.seed, 1, trial))
            curves.append(_best_so_far_dbm(outcome.trace, cfg.num_iterations))
        curves = np.vstack(curves)
        for iteration in range(cfg.num_iterations):
            rows.append(
                {
                    "num_candidates": cfg.num_candidates,
                    "iteration": iteration,
                    "mean_power_dbm": float(curves[:, iteration].mean()),
                    "std_power_dbm": float(curves[:, iteration].std()),
                    "seed": system.seed,
                }
            )
    return rows


def run_sinr_sweep(
    system: SystemConfig,
    ce_cfg: CeConfig,
    methods: Sequence[str] = SWEEP_METHODS,
    random_trials: int = 10,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[dict]:
    """Mean power versus SINR target for each requested method.

    The exhaustive method is dropped (not an error) when the phase grid
    exceeds ``enumeration_cap``. Within a trial every method and every
    target sees the same channel realization.
    """
    unknown = set(methods) - set(SWEEP_METHODS)
    if unknown:
        raise ConfigurationError(f"unknown method(s) {sorted(unknown)}, pick from {SWEEP_METHODS}")
    methods = [m for m in SWEEP_METHODS if m in methods]
    grid_size = (2**system.phase_bits) ** system.num_irs_elements
    if "exhaustive" in methods and grid_size > enumeration_cap:
        methods = [m for m in methods if m != "exhaustive"]

    powers = {m: np.empty((system.monte_carlo_trials, len(system.sinr_targets_db))) for m in methods}
    evaluations = {m: np.empty_like(powers[m]) for m in methods}
    for trial in range(system.monte_carlo_trials):
        channels = system.draw_channels(trial)
        for gi, gamma_db in enumerate(system.sinr_targets_db):
            targets = _targets(system, gamma_db)
            for method in methods:
                if method == "ce":
                    outcome = run_ce(
                        channels,
                        targets,
                        system.phase_bits,
                        ce_cfg,
                        seed=(system.seed, 1, trial, gi),
                    )
                    power, count = outcome.solution.total_power, outcome.trace.total_evaluations
                elif method == "exhaustive":
                    result = exhaustive_search(channels, targets, system.phase_bits, enumeration_cap)
                    power, count = result.solution.total_power, result.evaluations
                elif method == "successive_refinement":
                    result = successive_refinement(channels, targets, system.phase_bits)
                    power, count = result.solution.total_power, result.evaluations
                else:
                    rng = np.random.default_rng((system.seed, 2, trial, gi))
                    result = random_phases(rng, channels, targets, system.phase_bits, random_trials)
                    power, count = result.solution.total_power, result.evaluations
                powers[method][trial, gi] = watt_to_dbm(power)
                evaluations[method][trial, gi] = count

    rows = []
    for method in methods:
        for gi, gamma_db in enumerate(system.sinr_targets_db):
            rows.append(
                {
                    "method": method,
                    "gamma_db": gamma_db,
                    "mean_power_dbm": float(powers[method][:, gi].mean()),
                    "std_power_dbm": float(powers[method][:, gi].std()),
                    "mean_evaluations": float(evaluations[method][:, gi].mean()),
                    "seed": system.seed,
                }
            )
    return rows


def run_complexity(
    system: SystemConfig,
    ce_cfg: CeConfig,
    element_counts: Sequence[int],
    bits_list: Sequence[int] | None = None,
    cost_model: CostModel | None = None,
    measure: bool = True,
) -> list[dict]:
    """Model operation counts plus measured evaluation counts per element count.

    Model columns use the cost formulas (large-array constants by
    default); measured columns come from actually running both searches
    on a small instance with the requested element count, so they equal
    iterations * candidates and sweeps * N * 2**bits exactly.
    """
    if not element_counts or any(n < 1 for n in element_counts):
        raise ConfigurationError(f"element_counts must be positive, got {element_counts}")
    if bits_list is None:
        bits_list = [system.phase_bits]
    if cost_model is None:
        cost_model = CostModel(num_iterations=ce_cfg.num_iterations)

    rows = []
    for bits in bits_list:
        for num_elements in element_counts:
            row = {
                "num_irs_elements": num_elements,
                "phase_bits": bits,
                "ce_model_ops": cost_model.ce_model_ops(num_elements),
                "sr_model_ops": cost_model.sr_model_ops(num_elements, bits),
                "ce_measured_evaluations": "",
                "sr_measured_evaluations": "",
                "seed": system.seed,
            }
            if measure:
                probe = replace(
                    system,
                    irs_geometry=type(system.irs_geometry)(num_elements, 1),
                    phase_bits=bits,
                )
                channels = probe.draw_channels(0)
                targets = _targets(probe, probe.sinr_targets_db[-1])
                outcome = run_ce(
                    channels, targets, bits, ce_cfg, seed=(system.seed, 3, num_elements, bits)
                )
                refined = successive_refinement(channels, targets, bits)
                row["ce_measured_evaluations"] = outcome.trace.total_evaluations
                row["sr_measured_evaluations"] = refined.evaluations
            rows.append(row)
    return rows


def run_oracle_compare(
    system: SystemConfig,
    ce_cfg: CeConfig,
    num_trials: int | None = None,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[list[dict], dict]:
    """Per-trial gap between the stochastic search and the exhaustive optimum.

    Returns the per-trial rows and a summary with the median gap in dB
    and the exact-match rate. Requires an enumerable phase grid.
    """
    if num_trials is None:
        num_trials = system.monte_carlo_trials
    gamma_db = system.sinr_targets_db[-1]
    targets = _targets(system, gamma_db)
    rows = []
    gaps = []
    matches = 0
    for trial in range(num_trials):
        channels = system.draw_channels(trial)
        outcome = run_ce(channels, targets, system.phase_bits, ce_cfg, seed=(system.seed, 1, trial))
        oracle = exhaustive_search(channels, targets, system.phase_bits, enumeration_cap)
        ce_dbm = watt_to_dbm(outcome.solution.total_power)
        opt_dbm = watt_to_dbm(oracle.solution.total_power)
        gap = float(ce_dbm - opt_dbm)
        exact = bool(np.array_equal(outcome.phi.indices, oracle.phi.indices))
        matches += exact
        gaps.append(gap)
        rows.append(
            {
                "trial": trial,
                "power_ce_dbm": float(ce_dbm),
                "power_exhaustive_dbm": float(opt_dbm),
                "gap_db": gap,
                "exact_match": int(exact),
                "seed": system.seed,
            }
        )
    summary = {
        "num_trials": num_trials,
        "gamma_db": gamma_db,
        "median_gap_db": float(np.median(gaps)),
        "max_gap_db": float(np.max(gaps)),
        "match_rate": matches / num_trials,
    }
    return rows, summary


def _format_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path: str | Path, columns: Sequence[str], rows: Sequence[dict]) -> Path:
    """Write rows as UTF-8 CSV with a header and 12-significant-digit floats."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in columns])
    return path


def write_manifest(
    path: str | Path, command: str, system: SystemConfig, ce: CeConfig, extra: dict | None = None
) -> Path:
    """Write the JSON run manifest: config echo, seed, library versions."""
    import matplotlib
    import scipy

    manifest = {
        "command": command,
        "seed": system.seed,
        "config": config_as_dict(system, ce),
        "versions": {
            "irsbeam": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "matplotlib": matplotlib.__version__,
        },
    }
    if extra:
        manifest.update(extra)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path
