"""Cross-entropy search over discrete IRS reflection vectors.

Each iteration samples S candidate reflection vectors from a per-element
probability model, scores every candidate with the ZF power solve, keeps
the S_elite lowest-power candidates, and refits the model to the elites.
The refit has a closed form: every probability becomes the elite
frequency of its outcome. With one phase bit the model is a Bernoulli
vector (probability of coefficient +1 per element); with more bits it is
one categorical row per element over the 2**bits phase levels.

Sampling for iteration i draws from a generator keyed by (seed, i) and
fills candidates in index order, so traces are bit-reproducible and could
not change under any parallel scoring schedule (scoring is pure).
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .beamforming import BeamformingSolution, ReflectionVector, SinrTargets, score_reflection
from .channel import ChannelSet
from .exceptions import ConfigurationError, EliteSelectionError

__all__ = [
    "ProbabilityModel",
    "CeConfig",
    "CeTrace",
    "CeOutcome",
    "init_model",
    "sample_candidates",
    "select_elites",
    "update_bernoulli",
    "update_categorical",
    "update_model",
    "run_ce",
]


@dataclass
class ProbabilityModel:
    """Sampling distribution over reflection vectors, one factor per element.

    ``probs`` is a length-N vector of P(coefficient = +1) when ``bits`` is
    1, otherwise an N x 2**bits matrix whose row n is the level
    distribution of element n.
    """

    bits: int
    probs: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        expected_ndim = 1 if self.bits == 1 else 2
        if self.probs.ndim != expected_ndim:
            raise ConfigurationError(
                f"probs must be {expected_ndim}-D for bits={self.bits}, got shape {self.probs.shape}"
            )
        if self.bits > 1 and self.probs.shape[1] != 2**self.bits:
            raise ConfigurationError(
                f"categorical rows must have 2**bits={2**self.bits} columns, "
                f"got {self.probs.shape[1]}"
            )

    @property
    def mode(self) -> str:
        return "bernoulli" if self.bits == 1 else "categorical"

    @property
    def num_elements(self) -> int:
        return self.probs.shape[0]

    def validate(self, atol: float = 1e-12):
        """Check probability constraints, raising on violation."""
        if np.any(self.probs < 0) or np.any(self.probs > 1):
            raise ConfigurationError("probabilities must lie in [0, 1]")
        if self.bits > 1:
            row_sums = self.probs.sum(axis=1)
            if np.any(np.abs(row_sums - 1.0) > atol):
                raise ConfigurationError(
                    f"categorical rows must sum to 1, worst error "
                    f"{np.max(np.abs(row_sums - 1.0)):.3e}"
                )

    def is_degenerate(self) -> bool:
        """True when every element's distribution is a point mass."""
        if self.bits == 1:
            return bool(np.all((self.probs == 0.0) | (self.probs == 1.0)))
        return bool(np.all(self.probs.max(axis=1) == 1.0))


@dataclass
class CeConfig:
    """Search budget: candidates per iteration, elites kept, iterations run.

    ``smoothing`` = 1 is the plain elite-frequency update; values below 1
    blend the fresh frequencies with the previous model, which can keep a
    coordinate from locking at 0/1 on an unlucky early draw.
    """

    num_candidates: int
    num_elites: int
    num_iterations: int
    smoothing: float = 1.0
    stop_when_degenerate: bool = False
    record_models: bool = False

    def __post_init__(self):
        if self.num_candidates < 1:
            raise ConfigurationError(f"num_candidates must be >= 1, got {self.num_candidates}")
        if not 1 <= self.num_elites <= self.num_candidates:
            raise ConfigurationError(
                f"num_elites must be in [1, num_candidates], got {self.num_elites}"
            )
        if self.num_iterations < 1:
            raise ConfigurationError(f"num_iterations must be >= 1, got {self.num_iterations}")
        if not 0.0 < self.smoothing <= 1.0:
            raise ConfigurationError(f"smoothing must be in (0, 1], got {self.smoothing}")


@dataclass
class CeTrace:
    """Per-iteration convergence record of one search run."""

    seed: tuple
    iteration_best_w: list[float] = field(default_factory=list)
    best_so_far_w: list[float] = field(default_factory=list)
    elite_mean_w: list[float] = field(default_factory=list)
    candidates_evaluated: list[int] = field(default_factory=list)
    models: list[ProbabilityModel] | None = None

    @property
    def num_iterations(self) -> int:
        return len(self.iteration_best_w)

    @property
    def total_evaluations(self) -> int:
        return int(sum(self.candidates_evaluated))


class CeOutcome(NamedTuple):
    phi: ReflectionVector
    solution: BeamformingSolution
    trace: CeTrace


def init_model(num_elements: int, bits: int) -> ProbabilityModel:
    """Uninformative starting model: every outcome equally likely."""
    if num_elements < 1:
        raise ConfigurationError(f"num_elements must be >= 1, got {num_elements}")
    if bits < 1:
        raise ConfigurationError(f"bits must be >= 1, got {bits}")
    if bits == 1:
        return ProbabilityModel(bits=1, probs=np.full(num_elements, 0.5))
    return ProbabilityModel(bits=bits, probs=np.full((num_elements, 2**bits), 2.0**-bits))


def sample_candidates(
    rng: np.random.Generator, model: ProbabilityModel, count: int
) -> list[ReflectionVector]:
    """Draw ``count`` reflection vectors, each element independently.

    Inverse-CDF sampling: zero-probability levels can never be drawn, so
    a degenerate model always reproduces its point mass.
    """
    if count < 1:
        raise ConfigurationError(f"count must be >= 1, got {count}")
    uniforms = rng.random((count, model.num_elements))
    if model.bits == 1:
        # level 0 <-> coefficient +1, level 1 <-> coefficient -1
        indices = np.where(uniforms < model.probs[None, :], 0, 1).astype(np.int64)
    else:
        cdf = np.cumsum(model.probs, axis=1)
        cdf[:, -1] = 1.0
        indices = np.empty((count, model.num_elements), dtype=np.int64)
        for n in range(model.num_elements):
            indices[:, n] = np.searchsorted(cdf[n], uniforms[:, n], side="right")
    return [ReflectionVector(indices=row, bits=model.bits) for row in indices]


def select_elites(powers: np.ndarray, num_elites: int) -> np.ndarray:
    """Indices of the ``num_elites`` lowest powers, ties to the lower index.

    Raises
    ------
    EliteSelectionError
        When fewer than ``num_elites`` powers are finite (+inf marks
        infeasible candidates); carries the feasible count.
    """
    powers = np.asarray(powers, dtype=float)
    feasible = int(np.count_nonzero(np.isfinite(powers)))
    if feasible < num_elites:
        raise EliteSelectionError(
            f"only {feasible} of {powers.size} candidates feasible, need {num_elites} elites",
            feasible_count=feasible,
            required=num_elites,
        )
    order = np.argsort(powers, kind="stable")
    return order[:num_elites]


def _stack_indices(candidates) -> np.ndarray:
    if isinstance(candidates, np.ndarray):
        return candidates
    return np.stack([c.indices for c in candidates])


def _blend(fresh: np.ndarray, old: np.ndarray, smoothing: float) -> np.ndarray:
    if smoothing == 1.0:
        return fresh
    return smoothing * fresh + (1.0 - smoothing) * old


def update_bernoulli(
    model: ProbabilityModel, elites: Sequence[ReflectionVector], smoothing: float = 1.0
) -> ProbabilityModel:
    """Refit a one-bit model: each p_n becomes the elite fraction at +1."""
    if model.bits != 1:
        raise ConfigurationError("update_bernoulli requires a one-bit model")
    indices = _stack_indices(elites)
    if indices.shape[0] < 1:
        raise ConfigurationError("elite set must be non-empty")
    fresh = np.count_nonzero(indices == 0, axis=0) / indices.shape[0]
    return ProbabilityModel(bits=1, probs=_blend(fresh, model.probs, smoothing))


def update_categorical(
    model: ProbabilityModel, elites: Sequence[ReflectionVector], smoothing: float = 1.0
) -> ProbabilityModel:
    """Refit a multi-bit model: each row becomes the elite level frequencies."""
    if model.bits == 1:
        raise ConfigurationError("update_categorical requires bits > 1")
    indices = _stack_indices(elites)
    if indices.shape[0] < 1:
        raise ConfigurationError("elite set must be non-empty")
    levels = np.arange(2**model.bits)
    counts = (indices[:, :, None] == levels[None, None, :]).sum(axis=0)
    fresh = counts / indices.shape[0]
    return ProbabilityModel(bits=model.bits, probs=_blend(fresh, model.probs, smoothing))


def update_model(
    model: ProbabilityModel, elites: Sequence[ReflectionVector], smoothing: float = 1.0
) -> ProbabilityModel:
    """Dispatch to the Bernoulli or categorical refit by model width."""
    if model.bits == 1:
        return update_bernoulli(model, elites, smoothing)
    return update_categorical(model, elites, smoothing)


def _seed_key(seed) -> tuple:
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    return tuple(int(s) for s in seed)


def run_ce(
    channels: ChannelSet,
    targets: SinrTargets,
    bits: int,
    cfg: CeConfig,
    seed: int | Sequence[int],
) -> CeOutcome:
    """Run the full cross-entropy search and return the best candidate seen.

    Parameters
    ----------
    channels : ChannelSet
        Fixed channel realization to optimize over.
    targets : SinrTargets
        Per-user SINR requirements (linear) and noise powers (watts).
    bits : int
        Phase resolution of the IRS elements.
    cfg : CeConfig
        Sampling and iteration budget.
    seed : int or sequence of int
        Root of the sampling streams; iteration i draws from a generator
        keyed (seed..., i). Identical seed and config give bit-identical
        traces.

    Returns
    -------
    CeOutcome
        Best-so-far reflection vector across all iterations, its ZF
        solution, and the per-iteration trace. The returned power can
        never beat the exhaustive optimum over the discrete phase grid.

    Raises
    ------
    EliteSelectionError
        When some iteration yields fewer feasible candidates than elites
        requested; the message names the seed and iteration.
    """
    key = _seed_key(seed)
    model = init_model(channels.num_irs_elements, bits)
    trace = CeTrace(seed=key, models=[] if cfg.record_models else None)
    best_phi: ReflectionVector | None = None
    best_solution: BeamformingSolution | None = None
    best_power = np.inf

    for iteration in range(cfg.num_iterations):
        rng = np.random.default_rng(key + (iteration,))
        candidates = sample_candidates(rng, model, cfg.num_candidates)
        solutions = [score_reflection(channels, phi, targets) for phi in candidates]
        powers = np.array([s.total_power for s in solutions])
        try:
            elite_idx = select_elites(powers, cfg.num_elites)
        except EliteSelectionError as exc:
            raise EliteSelectionError(
                f"seed {key}, iteration {iteration}: {exc}",
                feasible_count=exc.feasible_count,
                required=exc.required,
            ) from exc

        leader = int(elite_idx[0])
        if powers[leader] < best_power:
            best_power = float(powers[leader])
            best_phi = candidates[leader]
            best_solution = solutions[leader]
        model = update_model(model, [candidates[j] for j in elite_idx], cfg.smoothing)

        trace.iteration_best_w.append(float(powers[leader]))
        trace.best_so_far_w.append(best_power)
        trace.elite_mean_w.append(float(powers[elite_idx].mean()))
        trace.candidates_evaluated.append(len(candidates))
        if trace.models is not None:
            trace.models.append(model)
        if cfg.stop_when_degenerate and model.is_degenerate():
            break

    return CeOutcome(phi=best_phi, solution=best_solution, trace=trace)
