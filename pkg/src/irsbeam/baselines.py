"""Reference solvers for the discrete phase search: exhaustive enumeration,
element-by-element successive refinement, and best-of-random sampling.

Exhaustive search is the ground-truth oracle at small element counts.
Every solver counts evaluations in the same unit as the stochastic
search: one effective-channel build plus one ZF solve per candidate.
"""

from dataclasses import dataclass, field

import numpy as np

from .beamforming import BeamformingSolution, ReflectionVector, SinrTargets, score_reflection
from .channel import ChannelSet
from .exceptions import ConfigurationError, InfeasibleSearchError

__all__ = [
    "BaselineResult",
    "DEFAULT_ENUMERATION_CAP",
    "exhaustive_search",
    "successive_refinement",
    "random_phases",
]

DEFAULT_ENUMERATION_CAP = 2**20


@dataclass
class BaselineResult:
    """Outcome of one baseline solver run."""

    method: str
    phi: ReflectionVector
    solution: BeamformingSolution
    evaluations: int
    sweeps: int = 0
    # power after each accepted single-element move (successive refinement only)
    power_trace: list[float] = field(default_factory=list, repr=False)
    # some element had no feasible level while the others were held fixed
    hit_infeasible_element: bool = False


def exhaustive_search(
    channels: ChannelSet,
    targets: SinrTargets,
    bits: int,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> BaselineResult:
    """Score every reflection vector on the phase grid; the global optimum.

    Enumeration is little-endian mixed-radix over element indices
    (element 0 cycles fastest) and ties keep the first candidate found,
    so results are deterministic.

    Raises
    ------
    ConfigurationError
        When (2**bits)**N exceeds ``enumeration_cap``; the message states
        both counts.
    InfeasibleSearchError
        When every candidate is ZF-infeasible.
    """
    num_elements = channels.num_irs_elements
    levels = 2**bits
    total = levels**num_elements
    if total > enumeration_cap:
        raise ConfigurationError(
            f"exhaustive search needs {total} evaluations, cap is {enumeration_cap}"
        )

    best_power = np.inf
    best: BaselineResult | None = None
    evaluations = 0
    for rank in range(total):
        digits = np.empty(num_elements, dtype=np.int64)
        remainder = rank
        for n in range(num_elements):
            remainder, digits[n] = divmod(remainder, levels)
        phi = ReflectionVector(indices=digits, bits=bits)
        solution = score_reflection(channels, phi, targets)
        evaluations += 1
        if solution.total_power < best_power:
            best_power = solution.total_power
            best = BaselineResult(
                method="exhaustive", phi=phi, solution=solution, evaluations=0
            )
    if best is None:
        raise InfeasibleSearchError(
            f"all {total} reflection vectors are ZF-infeasible on this channel"
        )
    best.evaluations = evaluations
    return best


def successive_refinement(
    channels: ChannelSet,
    targets: SinrTargets,
    bits: int,
    max_sweeps: int = 10,
    start: ReflectionVector | None = None,
) -> BaselineResult:
    """Coordinate descent over elements: best of 2**bits levels, one at a time.

    Starting from ``start`` (all phase level 0 by default), each sweep
    visits every element once, tries all its levels with the others held
    fixed, and keeps the power-minimizing level (ties to the lowest level
    index). Stops after a sweep that changes nothing or at ``max_sweeps``.
    The power after each accepted move never increases, and evaluations
    equal sweeps * N * 2**bits exactly.

    If every level of some element is infeasible, the current level is
    kept and the result is flagged.
    """
    if max_sweeps < 1:
        raise ConfigurationError(f"max_sweeps must be >= 1, got {max_sweeps}")
    num_elements = channels.num_irs_elements
    levels = 2**bits
    if start is None:
        indices = np.zeros(num_elements, dtype=np.int64)
    else:
        if start.num_elements != num_elements or start.bits != bits:
            raise ConfigurationError("start vector does not match channel size or bits")
        indices = start.indices.copy()

    result = BaselineResult(
        method="successive_refinement",
        phi=ReflectionVector(indices=indices.copy(), bits=bits),
        solution=BeamformingSolution.infeasible(),
        evaluations=0,
    )
    current_solution = None
    for sweep in range(max_sweeps):
        changed = False
        for n in range(num_elements):
            level_powers = np.empty(levels)
            level_solutions = []
            for level in range(levels):
                trial = indices.copy()
                trial[n] = level
                trial_solution = score_reflection(
                    channels, ReflectionVector(indices=trial, bits=bits), targets
                )
                level_powers[level] = trial_solution.total_power
                level_solutions.append(trial_solution)
                result.evaluations += 1
            if not np.any(np.isfinite(level_powers)):
                result.hit_infeasible_element = True
                continue
            chosen = int(np.argmin(level_powers))  # ties to the lowest level index
            if chosen != indices[n]:
                changed = True
            indices[n] = chosen
            current_solution = level_solutions[chosen]
            result.power_trace.append(level_powers[chosen])
        result.sweeps = sweep + 1
        if not changed:
            break

    result.phi = ReflectionVector(indices=indices, bits=bits)
    if current_solution is not None:
        result.solution = current_solution
    return result


def random_phases(
    rng: np.random.Generator,
    channels: ChannelSet,
    targets: SinrTargets,
    bits: int,
    trials: int,
) -> BaselineResult:
    """Best of ``trials`` uniformly random reflection vectors."""
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    num_elements = channels.num_irs_elements
    draws = rng.integers(0, 2**bits, size=(trials, num_elements))
    best_power = np.inf
    best: BaselineResult | None = None
    for row in draws:
        phi = ReflectionVector(indices=row, bits=bits)
        solution = score_reflection(channels, phi, targets)
        if best is None or solution.total_power < best_power:
            best_power = solution.total_power
            best = BaselineResult(method="random", phi=phi, solution=solution, evaluations=0)
    best.evaluations = trials
    return best
