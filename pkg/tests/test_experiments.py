import json
from dataclasses import replace

import numpy as np
import pytest

from irsbeam import CeConfig, ConfigurationError, CostModel
from irsbeam.cli import main
from irsbeam.config import load_config, scenario
from irsbeam.experiments import (
    COMPLEXITY_COLUMNS,
    CONVERGENCE_COLUMNS,
    ORACLE_COLUMNS,
    SWEEP_COLUMNS,
    run_complexity,
    run_convergence,
    run_oracle_compare,
    run_sinr_sweep,
    write_csv,
)


def mini_system(**overrides):
    system, ce = scenario("tiny")
    system = replace(system, monte_carlo_trials=3, sinr_targets_db=[5.0, 15.0], **overrides)
    ce = replace(ce, num_iterations=10)
    return system, ce


class TestScenarios:
    def test_builtins_resolve(self):
        for name in ("desk", "tiny", "full", "full-far-users"):
            system, ce = scenario(name)
            assert system.num_users <= system.num_bs_antennas
            assert ce.num_elites <= ce.num_candidates

    def test_full_scale_dimensions(self):
        system, ce = scenario("full")
        assert (system.num_bs_antennas, system.num_irs_elements) == (64, 625)
        assert (ce.num_candidates, ce.num_elites) == (200, 40)

    def test_unknown_name_rejected(self):
        with pytest.raises(ConfigurationError, match="nope"):
            scenario("nope")


class TestLoadConfig:
    def test_layered_overrides(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(
            json.dumps(
                {
                    "scenario": "tiny",
                    "system": {
                        "seed": 7,
                        "noise_dbm": -80.0,
                        "path_loss": {"distance_irs_user_m": 10.0},
                        "irs_geometry": {"n1": 2, "n2": 2},
                    },
                    "ce": {"num_candidates": 20, "num_elites": 4},
                }
            )
        )
        system, ce = load_config(path)
        assert system.seed == 7
        assert system.noise_dbm == -80.0
        assert system.path_loss.distance_irs_user_m == 10.0
        assert system.path_loss.distance_bs_irs_m == 50.0
        assert system.num_irs_elements == 4
        assert ce.num_candidates == 20

    def test_unknown_field_named(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"system": {"num_userz": 3}}))
        with pytest.raises(ConfigurationError, match="num_userz"):
            load_config(path)

    def test_invalid_value_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"scenario": "tiny", "system": {"num_users": 9}}))
        with pytest.raises(ConfigurationError, match="num_users"):
            load_config(path)

    def test_missing_file_raises_with_path(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "absent.json")


class TestCostModel:
    def test_unit_case(self):
        model = CostModel(num_iterations=1, num_candidates=1, num_users=1, num_bs_antennas=1)
        assert model.ce_model_ops(1) == 1.0

    def test_refinement_cost_grows_quadratically(self):
        """sr cost is dominated by the K*M*N^2 term for large N."""
        model = CostModel(num_iterations=50)
        ratio = model.sr_model_ops(1000, 1) / model.sr_model_ops(100, 1)
        assert 95 < ratio < 105

    def test_crossover_threshold_is_tight(self):
        for bits in (1, 2):
            model = CostModel(num_iterations=50)
            threshold = model.crossover_elements(bits)
            assert model.ce_model_ops(threshold) < model.sr_model_ops(threshold, bits)
            if threshold > 1:
                previous = threshold - 1
                assert model.ce_model_ops(previous) >= model.sr_model_ops(previous, bits)


class TestRunConvergence:
    def test_rows_and_monotone_mean_curve(self):
        system, ce = mini_system()
        rows = run_convergence(system, [ce])
        assert len(rows) == ce.num_iterations
        assert list(rows[0]) == CONVERGENCE_COLUMNS
        mean = [r["mean_power_dbm"] for r in rows]
        assert np.all(np.diff(mean) <= 1e-12)
        assert all(r["seed"] == system.seed for r in rows)


class TestRunSinrSweep:
    def test_method_ordering_and_schema(self):
        system, ce = mini_system()
        rows = run_sinr_sweep(system, ce)
        assert list(rows[0]) == SWEEP_COLUMNS
        by_method = {
            m: {r["gamma_db"]: r["mean_power_dbm"] for r in rows if r["method"] == m}
            for m in ("ce", "exhaustive", "successive_refinement", "random")
        }
        for gamma in system.sinr_targets_db:
            assert by_method["exhaustive"][gamma] <= by_method["ce"][gamma] + 1e-9
            assert by_method["ce"][gamma] <= by_method["random"][gamma] + 1e-9

    def test_exhaustive_dropped_beyond_cap(self):
        system, ce = mini_system()
        rows = run_sinr_sweep(system, ce, methods=("ce", "exhaustive"), enumeration_cap=10)
        assert {r["method"] for r in rows} == {"ce"}

    def test_unknown_method_rejected(self):
        system, ce = mini_system()
        with pytest.raises(ConfigurationError, match="annealing"):
            run_sinr_sweep(system, ce, methods=("ce", "annealing"))


class TestRunComplexity:
    def test_measured_counts_match_closed_forms(self):
        system, ce = mini_system()
        rows = run_complexity(system, ce, [4, 8], bits_list=[1, 2])
        assert list(rows[0]) == COMPLEXITY_COLUMNS
        assert len(rows) == 4
        for row in rows:
            assert row["ce_measured_evaluations"] == ce.num_iterations * ce.num_candidates
            per_sweep = row["num_irs_elements"] * 2 ** row["phase_bits"]
            assert row["sr_measured_evaluations"] % per_sweep == 0
            assert 1 <= row["sr_measured_evaluations"] // per_sweep <= 10

    def test_model_only_mode(self):
        system, ce = mini_system()
        rows = run_complexity(system, ce, [8], measure=False)
        assert rows[0]["ce_measured_evaluations"] == ""
        assert rows[0]["ce_model_ops"] > 0


class TestRunOracleCompare:
    def test_summary_and_guarantee(self):
        system, ce = mini_system()
        rows, summary = run_oracle_compare(system, ce)
        assert list(rows[0]) == ORACLE_COLUMNS
        assert summary["num_trials"] == 3
        assert 0.0 <= summary["match_rate"] <= 1.0
        for row in rows:
            assert row["gap_db"] >= -1e-9


class TestWriteCsv:
    def test_deterministic_bytes(self, tmp_path):
        rows = [{"a": 1, "b": 0.123456789012345, "c": "x"}]
        first = write_csv(tmp_path / "one.csv", ["a", "b", "c"], rows)
        second = write_csv(tmp_path / "two.csv", ["a", "b", "c"], rows)
        assert first.read_bytes() == second.read_bytes()
        assert first.read_text().splitlines()[0] == "a,b,c"
        assert "0.123456789012" in first.read_text()


class TestCli:
    def test_oracle_compare_writes_artifacts(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(
            ["oracle-compare", "--scenario", "tiny", "--trials", "2", "--out", str(out)]
        )
        assert code == 0
        assert (out / "oracle_compare.csv").exists()
        assert (out / "oracle_compare.png").exists()
        manifest = json.loads((out / "manifest_oracle_compare.json").read_text())
        assert manifest["seed"] == 42
        assert manifest["versions"]["numpy"] == np.__version__
        assert "median gap" in capsys.readouterr().out

    def test_converge_respects_no_figures_and_seed(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(
            [
                "converge", "--scenario", "tiny", "--trials", "2", "--seed", "5",
                "--candidates", "6", "--out", str(out), "--no-figures",
            ]
        )
        assert code == 0
        assert (out / "convergence.csv").exists()
        assert not (out / "convergence.png").exists()
        manifest = json.loads((out / "manifest_convergence.json").read_text())
        assert manifest["seed"] == 5
        assert "seed 5" in capsys.readouterr().out

    def test_same_seed_gives_byte_identical_csv(self, tmp_path):
        args = ["sweep-sinr", "--scenario", "tiny", "--trials", "2", "--methods", "ce,random"]
        first, second = tmp_path / "first", tmp_path / "second"
        assert main(args + ["--out", str(first)]) == 0
        assert main(args + ["--out", str(second)]) == 0
        assert (first / "sinr_sweep.csv").read_bytes() == (second / "sinr_sweep.csv").read_bytes()

    def test_complexity_subcommand(self, tmp_path):
        out = tmp_path / "out"
        code = main(
            ["complexity", "--scenario", "tiny", "--elements", "4,8", "--out", str(out)]
        )
        assert code == 0
        lines = (out / "complexity.csv").read_text().splitlines()
        assert lines[0].split(",") == COMPLEXITY_COLUMNS
        assert len(lines) == 3

    def test_missing_config_exits_nonzero_with_path(self, tmp_path, capsys):
        missing = tmp_path / "nowhere.json"
        code = main(["converge", "--config", str(missing)])
        assert code == 2
        assert str(missing) in capsys.readouterr().err

    def test_config_file_drives_run(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(
            json.dumps(
                {
                    "scenario": "tiny",
                    "system": {"monte_carlo_trials": 2, "sinr_targets_db": [10.0]},
                    "ce": {"num_iterations": 5},
                }
            )
        )
        out = tmp_path / "out"
        code = main(["sweep-sinr", "--config", str(cfg), "--methods", "ce", "--out", str(out)])
        assert code == 0
        rows = (out / "sinr_sweep.csv").read_text().splitlines()
        assert len(rows) == 2  # header + one gamma for one method

    def test_bad_scenario_exits_two(self, capsys):
        assert main(["converge", "--scenario", "bogus"]) == 2
        assert "bogus" in capsys.readouterr().err
