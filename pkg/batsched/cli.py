"""Command line interface.

Exit codes: 0 success, 1 internal error, 2 input error, 3 infeasible
deadline. Flags override the values stored in the graph file.
"""

import argparse
import dataclasses
import json
import logging
import sys
from typing import List, Optional

import numpy as np

from batsched.battery.model import estimate_lifetime
from batsched.core.api import open_graph_file
from batsched.constants import DEFAULT_MAX_ITERATIONS, ORACLE_BUDGET, WEIGHT_MODES
from batsched.exceptions import (
    DeadlineInfeasibleError,
    GraphFileError,
    InvalidArgumentError,
    InvalidGraphError,
    OracleBudgetError,
)
from batsched.graph.validation import require_valid, validate
from batsched.io._csv import _write_profile_csv
from batsched.schedule.baseline import baseline_schedule
from batsched.schedule.comparison import deadline_sweep
from batsched.schedule.driver import ScheduleOptions, schedule
from batsched.schedule.oracle import exhaustive_oracle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3


def _deadline_list(text: str) -> List[float]:
    try:
        deadlines = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma separated list of numbers, got {text!r}"
        )
    if not deadlines:
        raise argparse.ArgumentTypeError("expected at least one deadline")
    return deadlines


def _add_file(parser):
    parser.add_argument("file", help="Graph file (.json)")


def _add_battery(parser):
    parser.add_argument("--deadline", type=float, default=None, help="Deadline in minutes")
    parser.add_argument("--beta", type=float, default=None, help="Battery model constant")
    parser.add_argument(
        "--alpha", type=float, default=None, help="Available battery charge in mA min"
    )
    parser.add_argument(
        "--series-terms", type=int, default=None, help="Terms of the correction series"
    )


def _add_schedule(parser):
    parser.add_argument(
        "--max-iterations",
        type=int,
        default=DEFAULT_MAX_ITERATIONS,
        help="Upper bound on scheduling passes",
    )
    parser.add_argument(
        "--weight-mode",
        choices=WEIGHT_MODES,
        default="current",
        help="Weight of the initial sequence",
    )
    parser.add_argument(
        "--parallel", action="store_true", help="Evaluate design point windows concurrently"
    )


def _add_output(parser, formats=("json", "table")):
    parser.add_argument("--format", choices=formats, default=formats[0], help="Report format")
    parser.add_argument("--out", default=None, help="Write the report to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="batsched",
        description="Battery-aware task sequencing and design point allocation",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress (-v) or every scheduling step (-vv)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", help="Check a graph file")
    _add_file(p)

    p = commands.add_parser("schedule", help="Run the battery-aware scheduler")
    _add_file(p)
    _add_battery(p)
    _add_schedule(p)
    _add_output(p)

    p = commands.add_parser("baseline", help="Run the minimum energy baseline")
    _add_file(p)
    _add_battery(p)
    _add_output(p)

    p = commands.add_parser("compare", help="Compare scheduler and baseline per deadline")
    _add_file(p)
    _add_battery(p)
    _add_schedule(p)
    p.add_argument(
        "--deadlines",
        type=_deadline_list,
        default=None,
        help="Comma separated deadlines in minutes, defaults to the file deadline",
    )
    _add_output(p)

    p = commands.add_parser("profile", help="Discharge profile of the schedule as CSV")
    _add_file(p)
    _add_battery(p)
    _add_schedule(p)
    p.add_argument("--out", default=None, help="Write the CSV to this path")

    p = commands.add_parser("lifetime", help="Battery lifetime under the schedule")
    _add_file(p)
    _add_battery(p)
    _add_schedule(p)
    _add_output(p)

    p = commands.add_parser("oracle", help="Exhaustive search on tiny graphs")
    _add_file(p)
    _add_battery(p)
    p.add_argument(
        "--budget", type=int, default=ORACLE_BUDGET, help="Largest enumeration accepted"
    )
    _add_output(p)

    return parser


def _load(args):
    graph_file = open_graph_file(args.file)
    graph = graph_file.graph
    if getattr(args, "deadline", None) is not None:
        graph = require_valid(graph.with_deadline(args.deadline))

    overrides = {}
    if getattr(args, "beta", None) is not None:
        overrides["beta"] = args.beta
    if getattr(args, "alpha", None) is not None:
        overrides["alpha"] = args.alpha
    if getattr(args, "series_terms", None) is not None:
        overrides["series_terms"] = args.series_terms
    params = dataclasses.replace(graph_file.battery, **overrides)

    return graph, params


def _options(args) -> ScheduleOptions:
    return ScheduleOptions(
        max_iterations=args.max_iterations,
        weight_mode=args.weight_mode,
        parallel=args.parallel,
    )


def _emit(text: str, out: Optional[str]):
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _json(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _cmd_validate(args) -> int:
    graph_file = open_graph_file(args.file, validate=False)
    violations = validate(graph_file.graph)
    if violations:
        for violation in violations:
            print(violation)
        return EXIT_INPUT
    print("ok")
    return EXIT_OK


def _cmd_schedule(args) -> int:
    graph, params = _load(args)
    result = schedule(graph, params, _options(args))

    if args.format == "json":
        _emit(_json(result.to_dict()), args.out)
    else:
        lines = [
            "sequence: " + ",".join(result.sequence),
            "design points: "
            + ",".join(f"P{result.chosen[task_id]}" for task_id in result.sequence),
            f"sigma: {result.sigma:.6g} mA min",
            f"delta: {result.delta:.6g} min",
            f"converged: {result.converged}",
            "",
            result.window_table().to_string(float_format=lambda x: f"{x:.6g}"),
        ]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _cmd_baseline(args) -> int:
    graph, params = _load(args)
    result = baseline_schedule(graph, params)

    if args.format == "json":
        _emit(_json(result.to_dict()), args.out)
    else:
        lines = [
            "sequence: " + ",".join(result.sequence),
            "design points: "
            + ",".join(f"P{result.chosen[task_id]}" for task_id in result.sequence),
            f"sigma: {result.sigma:.6g} mA min",
            f"delta: {result.delta:.6g} min",
            f"total energy: {result.total_energy:.6g} mA min",
        ]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _cmd_compare(args) -> int:
    graph, params = _load(args)
    deadlines = args.deadlines if args.deadlines is not None else [graph.deadline]
    table = deadline_sweep(graph, params, deadlines, _options(args))

    if args.format == "json":
        records = [
            {
                key: (None if isinstance(value, float) and np.isnan(value) else value)
                for key, value in row.items()
            }
            for row in table.to_dict(orient="records")
        ]
        _emit(_json(records), args.out)
    else:
        _emit(table.to_string(index=False, float_format=lambda x: f"{x:.6g}"), args.out)
    return EXIT_OK


def _cmd_profile(args) -> int:
    graph, params = _load(args)
    profile = schedule(graph, params, _options(args)).to_profile()
    if args.out is None:
        sys.stdout.write(_write_profile_csv(profile))
    else:
        _write_profile_csv(profile, args.out)
    return EXIT_OK


def _cmd_lifetime(args) -> int:
    graph, params = _load(args)
    if params.alpha is None:
        raise InvalidArgumentError(
            "lifetime needs the available battery charge: pass --alpha or set "
            "battery.alpha_mA_min in the graph file"
        )
    profile = schedule(graph, params, _options(args)).to_profile()
    lifetime = estimate_lifetime(profile, params)

    if args.format == "json":
        report = {
            "alpha_mA_min": params.alpha,
            "lifetime_min": lifetime,
            "profile_duration_min": profile.total_duration,
        }
        _emit(_json(report), args.out)
    else:
        text = lifetime if isinstance(lifetime, str) else f"{lifetime:.3f} min"
        _emit(text, args.out)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    graph, params = _load(args)
    result = exhaustive_oracle(graph, params, budget=args.budget)

    if args.format == "json":
        _emit(_json(result.to_dict()), args.out)
    else:
        lines = [
            "best sequence: " + ",".join(result.best_sequence),
            "best design points: "
            + ",".join(f"P{result.best_chosen[task_id]}" for task_id in result.best_sequence),
            f"best sigma: {result.best_sigma:.6g} mA min",
            f"worst sigma: {result.worst_sigma:.6g} mA min",
            f"configurations: {result.enumerated_count}",
        ]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


COMMANDS = {
    "validate": _cmd_validate,
    "schedule": _cmd_schedule,
    "baseline": _cmd_baseline,
    "compare": _cmd_compare,
    "profile": _cmd_profile,
    "lifetime": _cmd_lifetime,
    "oracle": _cmd_oracle,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
        )

    try:
        return COMMANDS[args.command](args)
    except DeadlineInfeasibleError as e:
        print(f"batsched: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (
        GraphFileError,
        InvalidGraphError,
        InvalidArgumentError,
        OracleBudgetError,
        OSError,
    ) as e:
        print(f"batsched: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        logger.debug("internal error", exc_info=True)
        print(f"batsched: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
