"""Command-line entry point.

Each subcommand runs one experiment and writes, into the output
directory: the CSV table, a JSON run manifest (config echo + seed +
library versions), and a rendered figure unless --no-figures is given.
Identical seeds produce byte-identical CSV output.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .ce import CeConfig
from .config import SCENARIOS, load_config, scenario
from .exceptions import ConfigurationError, EliteSelectionError, InfeasibleSearchError
from . import experiments, plots


def _add_common(parser):
    parser.add_argument("--scenario", default=None, help=f"built-in scenario: {sorted(SCENARIOS)}")
    parser.add_argument("--config", default=None, help="JSON config file layered over its scenario")
    parser.add_argument("--out", default="out", help="output directory (default: out)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--trials", type=int, default=None, help="override monte_carlo_trials")
    parser.add_argument("--no-figures", action="store_true", help="skip figure rendering")


def _int_list(text):
    return [int(part) for part in text.split(",") if part]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="irsbeam",
        description="Transmit-power minimization for an IRS-assisted mmWave downlink: "
        "zero-forcing precoding with cross-entropy search over discrete phases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    converge = sub.add_parser("converge", help="best-so-far power vs iteration")
    _add_common(converge)
    converge.add_argument(
        "--candidates",
        type=_int_list,
        default=None,
        metavar="S1,S2,...",
        help="candidate budgets to compare (elites = S/5); default: the scenario's S",
    )

    sweep = sub.add_parser("sweep-sinr", help="power vs SINR target per method")
    _add_common(sweep)
    sweep.add_argument(
        "--methods",
        default="ce,successive_refinement,random",
        help="comma list from: " + ",".join(experiments.SWEEP_METHODS),
    )
    sweep.add_argument("--random-trials", type=int, default=10)

    complexity = sub.add_parser("complexity", help="model + measured operation counts vs N")
    _add_common(complexity)
    complexity.add_argument("--elements", type=_int_list, default=[8, 16, 32, 64], metavar="N1,N2,...")
    complexity.add_argument("--bits", type=_int_list, default=None, metavar="Q1,Q2,...")
    complexity.add_argument("--no-measure", action="store_true", help="model columns only")

    oracle = sub.add_parser("oracle-compare", help="search gap vs the exhaustive optimum")
    _add_common(oracle)

    return parser


def _load(args):
    if args.config is not None:
        system, ce = load_config(args.config)
        if args.scenario is not None:
            raise ConfigurationError("--scenario and --config are mutually exclusive")
    else:
        system, ce = scenario(args.scenario or "desk")
    if args.seed is not None:
        system = replace(system, seed=args.seed)
    if args.trials is not None:
        system = replace(system, monte_carlo_trials=args.trials)
    return system, ce


def _emit(args, name, command, system, ce, columns, rows, plot_fn, extra=None):
    out = Path(args.out)
    csv_path = experiments.write_csv(out / f"{name}.csv", columns, rows)
    experiments.write_manifest(out / f"manifest_{name}.json", command, system, ce, extra)
    artifacts = [str(csv_path)]
    if not args.no_figures:
        artifacts.append(str(plot_fn(rows, out / f"{name}.png")))
    return artifacts


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        system, ce = _load(args)

        if args.command == "converge":
            budgets = args.candidates or [ce.num_candidates]
            ce_cfgs = [
                replace(ce, num_candidates=s, num_elites=max(1, round(0.2 * s))) for s in budgets
            ]
            rows = experiments.run_convergence(system, ce_cfgs)
            artifacts = _emit(
                args, "convergence", "converge", system, ce,
                experiments.CONVERGENCE_COLUMNS, rows, plots.plot_convergence,
                extra={"candidate_budgets": budgets},
            )
            print(
                f"converge: {len(rows)} rows, budgets {budgets}, "
                f"{system.monte_carlo_trials} trials, seed {system.seed} -> {', '.join(artifacts)}"
            )

        elif args.command == "sweep-sinr":
            methods = [m for m in args.methods.split(",") if m]
            rows = experiments.run_sinr_sweep(system, ce, methods, random_trials=args.random_trials)
            artifacts = _emit(
                args, "sinr_sweep", "sweep-sinr", system, ce,
                experiments.SWEEP_COLUMNS, rows, plots.plot_sinr_sweep,
            )
            used = ",".join(dict.fromkeys(r["method"] for r in rows))
            print(
                f"sweep-sinr: {len(rows)} rows, methods {used}, "
                f"{system.monte_carlo_trials} trials, seed {system.seed} -> {', '.join(artifacts)}"
            )

        elif args.command == "complexity":
            rows = experiments.run_complexity(
                system, ce, args.elements, bits_list=args.bits, measure=not args.no_measure
            )
            artifacts = _emit(
                args, "complexity", "complexity", system, ce,
                experiments.COMPLEXITY_COLUMNS, rows, plots.plot_complexity,
            )
            print(
                f"complexity: {len(rows)} rows, elements {args.elements}, "
                f"seed {system.seed} -> {', '.join(artifacts)}"
            )

        else:  # oracle-compare
            rows, summary = experiments.run_oracle_compare(system, ce)
            artifacts = _emit(
                args, "oracle_compare", "oracle-compare", system, ce,
                experiments.ORACLE_COLUMNS, rows, plots.plot_oracle_compare,
                extra={"summary": summary},
            )
            print(
                f"oracle-compare: median gap {summary['median_gap_db']:.3f} dB, "
                f"exact match {summary['match_rate']:.0%} of {summary['num_trials']} trials, "
                f"seed {system.seed} -> {', '.join(artifacts)}"
            )

    except FileNotFoundError as exc:
        print(f"error: config file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EliteSelectionError, InfeasibleSearchError) as exc:
        print(f"error: infeasible run: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
