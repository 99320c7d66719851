import numpy as np
import pytest

from irsbeam import (
    ConfigurationError,
    InfeasibleSearchError,
    ReflectionVector,
    SinrTargets,
    exhaustive_search,
    random_phases,
    score_reflection,
    successive_refinement,
)

from conftest import geometric_channel_set, random_channel_set


@pytest.fixture
def small_instance():
    channels = geometric_channel_set(np.random.default_rng(40), num_users=2, bs=(2, 2), irs=(4, 2))
    targets = SinrTargets.from_db(10.0, -90.0, 2)
    return channels, targets


class TestExhaustiveSearch:
    def test_two_point_grid(self):
        rng = np.random.default_rng(41)
        channels = random_channel_set(rng, 1, 2, 1)
        targets = SinrTargets(gamma=np.array([2.0]), sigma2=np.array([1.0]))
        result = exhaustive_search(channels, targets, 1)
        assert result.evaluations == 2

    def test_grid_size_eight_elements(self, small_instance):
        channels, targets = small_instance
        result = exhaustive_search(channels, targets, 1)
        assert result.evaluations == 256

    def test_beats_random_spot_checks(self, small_instance):
        """The enumerated optimum is at most the power of any sampled phi."""
        channels, targets = small_instance
        result = exhaustive_search(channels, targets, 1)
        rng = np.random.default_rng(42)
        for _ in range(100):
            phi = ReflectionVector(indices=rng.integers(0, 2, 8), bits=1)
            sampled = score_reflection(channels, phi, targets)
            assert result.solution.total_power <= sampled.total_power + 1e-15

    def test_cap_refused_with_counts(self, small_instance):
        channels, targets = small_instance
        with pytest.raises(ConfigurationError, match="256.*100"):
            exhaustive_search(channels, targets, 1, enumeration_cap=100)

    def test_all_infeasible_raises(self):
        rng = np.random.default_rng(43)
        base = random_channel_set(rng, 3, 4, 1)
        duplicated = type(base)(
            g=base.g, h_r=np.vstack([base.h_r] * 2), h_d=np.vstack([base.h_d] * 2)
        )
        targets = SinrTargets.from_db(10.0, -90.0, 2)
        with pytest.raises(InfeasibleSearchError):
            exhaustive_search(duplicated, targets, 1)

    def test_deterministic(self, small_instance):
        channels, targets = small_instance
        first = exhaustive_search(channels, targets, 1)
        second = exhaustive_search(channels, targets, 1)
        np.testing.assert_array_equal(first.phi.indices, second.phi.indices)


class TestSuccessiveRefinement:
    def test_single_element_equals_exhaustive(self):
        rng = np.random.default_rng(44)
        channels = random_channel_set(rng, 1, 2, 1)
        targets = SinrTargets(gamma=np.array([2.0]), sigma2=np.array([1.0]))
        refined = successive_refinement(channels, targets, 1)
        oracle = exhaustive_search(channels, targets, 1)
        np.testing.assert_allclose(
            refined.solution.total_power, oracle.solution.total_power, rtol=1e-12
        )

    def test_per_move_powers_never_increase(self, small_instance):
        channels, targets = small_instance
        result = successive_refinement(channels, targets, 1)
        trace = np.array(result.power_trace)
        assert np.all(np.diff(trace) <= 1e-15)

    def test_evaluation_count_exact(self, small_instance):
        """Evaluations are exactly sweeps * N * 2**bits."""
        channels, targets = small_instance
        for bits in (1, 2):
            result = successive_refinement(channels, targets, bits)
            assert result.evaluations == result.sweeps * 8 * 2**bits

    def test_never_below_exhaustive_and_often_equal(self):
        """Local refinement is bounded by the global optimum and frequently
        ties it. The 0.40 floor is calibrated on this seeded family (measured
        0.46 exact matches, median gap 0.17 dB)."""
        targets = SinrTargets.from_db(10.0, -90.0, 2)
        matches = 0
        seeds = 100
        for trial in range(seeds):
            channels = geometric_channel_set(np.random.default_rng(500 + trial))
            refined = successive_refinement(channels, targets, 1)
            oracle = exhaustive_search(channels, targets, 1)
            assert refined.solution.total_power >= oracle.solution.total_power - 1e-10
            matches += (
                refined.solution.total_power <= oracle.solution.total_power * (1 + 1e-10)
            )
        print(f"successive refinement exact-match rate: {matches / seeds:.2f}")
        assert matches / seeds >= 0.40, f"match rate {matches / seeds:.2f}"

    def test_respects_start_vector(self, small_instance):
        channels, targets = small_instance
        start = ReflectionVector(indices=np.array([1, 0, 1, 0, 1, 0, 1, 0]), bits=1)
        result = successive_refinement(channels, targets, 1, start=start)
        start_power = score_reflection(channels, start, targets).total_power
        assert result.solution.total_power <= start_power + 1e-15

    def test_max_sweeps_respected(self, small_instance):
        channels, targets = small_instance
        result = successive_refinement(channels, targets, 1, max_sweeps=1)
        assert result.sweeps == 1
        assert result.evaluations == 16

    def test_rejects_bad_start(self, small_instance):
        channels, targets = small_instance
        with pytest.raises(ConfigurationError):
            successive_refinement(channels, targets, 1, start=ReflectionVector.all_zero(5, 1))


class TestRandomPhases:
    def test_single_trial_counts_one_evaluation(self, small_instance):
        channels, targets = small_instance
        result = random_phases(np.random.default_rng(0), channels, targets, 1, trials=1)
        assert result.evaluations == 1
        assert result.solution.feasible

    def test_never_beats_exhaustive(self, small_instance):
        channels, targets = small_instance
        oracle = exhaustive_search(channels, targets, 1)
        result = random_phases(np.random.default_rng(1), channels, targets, 1, trials=256)
        assert result.solution.total_power >= oracle.solution.total_power - 1e-15

    def test_more_trials_help_in_the_median(self):
        """Median best power over seeds is non-increasing in the trial budget."""
        targets = SinrTargets.from_db(10.0, -90.0, 2)
        medians = []
        for trials in (1, 4, 16):
            powers = []
            for trial in range(30):
                channels = geometric_channel_set(np.random.default_rng(700 + trial))
                rng = np.random.default_rng((trial, trials))
                powers.append(
                    random_phases(rng, channels, targets, 1, trials=trials).solution.total_power
                )
            medians.append(np.median(powers))
        assert medians[0] >= medians[1] >= medians[2]

    def test_rejects_zero_trials(self, small_instance):
        channels, targets = small_instance
        with pytest.raises(ConfigurationError):
            random_phases(np.random.default_rng(0), channels, targets, 1, trials=0)


class TestBaselineOrdering:
    def test_exhaustive_refinement_random_chain(self):
        """Refinement started from the best random draw sits between the
        exhaustive optimum and the random result on every instance."""
        targets = SinrTargets.from_db(10.0, -90.0, 2)
        for trial in range(25):
            channels = geometric_channel_set(np.random.default_rng(900 + trial))
            oracle = exhaustive_search(channels, targets, 1)
            sampled = random_phases(
                np.random.default_rng(trial), channels, targets, 1, trials=10
            )
            refined = successive_refinement(channels, targets, 1, start=sampled.phi)
            assert (
                oracle.solution.total_power
                <= refined.solution.total_power + 1e-10
                <= sampled.solution.total_power + 2e-10
            )
