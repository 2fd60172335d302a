"""Command-line interface: solve, bench, gen, validate.

JSON results go to stdout, logs to stderr. Exit codes: 0 success, 2 argument
or input-data errors, 3 infeasible constraints, 4 exhausted budgets or
degenerate instances.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bench import ALGORITHMS, AXES, run_sweep, summarize, write_records_csv
from .dataset import (
    FairnessConstraints,
    derive_proportional_bounds,
    generate_blobs,
    load_csv,
    validate_constraints,
    write_csv,
)
from .exceptions import (
    BudgetExceededError,
    DegenerateInstanceError,
    InfeasibleConstraintsError,
)
from .exact import solve_exact
from .geometry import MetricKind
from .greedy import greedy_max_min
from .oracle import brute_force_fair_max_min
from .scalable import FloorPolicy, ScalableConfig, solve_scalable
from .solution import Solution

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, default=str))


def _emit_error(kind: str, message: str, **extra) -> None:
    _emit({"error": {"type": kind, "message": message, **extra}})


def _add_dataset_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--input", help="CSV file with feature columns and a group column")
    sub.add_argument(
        "--group-col",
        default=None,
        help="group column: 0-based index, or name when --header is given",
    )
    sub.add_argument(
        "--header", action="store_true", help="treat the first CSV row as a header"
    )
    sub.add_argument(
        "--metric", choices=["l1", "l2", "angular"], default="l2", help="distance metric"
    )
    sub.add_argument("--n", type=int, help="generate a synthetic instance of n points instead of reading --input")
    sub.add_argument("--groups", type=int, default=2, help="group count for synthetic instances")
    sub.add_argument("--seed", type=int, default=0, help="seed for synthetic instances")


def _add_constraint_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--k", type=int, required=True, help="number of items to select")
    sub.add_argument(
        "--alpha",
        type=float,
        default=None,
        help="derive proportional bounds relaxed by (1 +/- alpha)",
    )
    sub.add_argument(
        "--bounds",
        default=None,
        help="explicit per-group bounds 'l1:h1,l2:h2,...' in group-index order",
    )


def _parse_bounds(text: str, k: int) -> FairnessConstraints:
    pairs = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        if not sep:
            raise ValueError(f"bad bounds entry {part!r}; expected 'lower:upper'")
        pairs.append((int(lo), int(hi)))
    return FairnessConstraints(k=k, bounds=tuple(pairs))


def _load_dataset(args: argparse.Namespace):
    if args.input and args.n:
        raise ValueError("give either --input or --n, not both")
    if args.input:
        if args.group_col is None:
            raise ValueError("--group-col is required with --input")
        gcol = args.group_col
        if not args.header:
            gcol = int(gcol)
        else:
            try:
                gcol = int(gcol)
            except ValueError:
                pass
        return load_csv(args.input, gcol, args.metric, header=args.header)
    if args.n:
        return generate_blobs(args.n, args.groups, args.seed)
    raise ValueError("a dataset is required: give --input or --n")


def _resolve_constraints(args: argparse.Namespace, dataset) -> FairnessConstraints:
    if args.bounds is not None:
        constraints = _parse_bounds(args.bounds, args.k)
        report = validate_constraints(dataset, constraints)
        if report:
            raise InfeasibleConstraintsError(report)
        return constraints
    alpha = 0.2 if args.alpha is None else args.alpha
    return derive_proportional_bounds(dataset, args.k, alpha)


def cmd_solve(args: argparse.Namespace) -> int:
    dataset = _load_dataset(args)
    _log(
        f"loaded dataset: n={len(dataset)}, groups={dataset.group_count}, "
        f"dim={dataset.dim}, metric={dataset.metric.value}"
    )
    if args.algo == "gmm":
        t0 = time.perf_counter()
        ids = greedy_max_min(dataset, args.k, start=args.start)
        solution = Solution.build(
            dataset, ids, {"elapsed_ms": (time.perf_counter() - t0) * 1000.0}
        )
        constraints = None
    else:
        constraints = _resolve_constraints(args, dataset)
        if args.algo == "exact":
            solution = solve_exact(dataset, constraints, node_budget=args.node_budget)
        elif args.algo == "scalable":
            config = ScalableConfig(
                epsilon=args.epsilon,
                start=args.start,
                floor_policy=FloorPolicy.parse(args.floor_policy),
            )
            solution = solve_scalable(
                dataset, constraints, config, node_budget=args.node_budget
            )
        else:
            solution = brute_force_fair_max_min(
                dataset, constraints, subset_budget=args.enum_budget
            )
    problems = solution.violations(dataset, constraints)
    if problems:  # defensive: solvers are expected to emit consistent output
        raise RuntimeError(f"inconsistent solution: {problems}")
    _emit(solution.to_dict(algorithm=args.algo, k=args.k))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    dataset = generate_blobs(args.n, args.groups, args.seed)
    write_csv(dataset, args.out, header=True)
    meta = dataset.metadata()
    meta["seed"] = args.seed
    meta["path"] = str(args.out)
    sidecar = Path(str(args.out) + ".meta.json")
    sidecar.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    _log(f"wrote {len(dataset)} rows to {args.out} (+ sidecar {sidecar})")
    _emit(meta)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    dataset = _load_dataset(args)
    if args.bounds is not None:
        constraints = _parse_bounds(args.bounds, args.k)
        report = validate_constraints(dataset, constraints)
    else:
        alpha = 0.2 if args.alpha is None else args.alpha
        try:
            constraints = derive_proportional_bounds(dataset, args.k, alpha)
            report = []
        except InfeasibleConstraintsError as exc:
            constraints = None
            report = list(exc.violations)
    payload = {
        "ok": not report,
        "violations": report,
    }
    if constraints is not None:
        payload["k"] = constraints.k
        payload["bounds"] = [list(b) for b in constraints.bounds]
    _emit(payload)
    return EXIT_OK if not report else EXIT_INFEASIBLE


def cmd_bench(args: argparse.Namespace) -> int:
    values = []
    for part in args.values.split(","):
        part = part.strip()
        values.append(float(part) if args.axis == "epsilon" else int(part))
    algorithms = tuple(a.strip() for a in args.algos.split(","))
    records, summary = run_sweep(
        args.axis,
        values,
        n=args.n,
        groups=args.groups,
        k=args.k,
        epsilon=args.epsilon,
        alpha=0.2 if args.alpha is None else args.alpha,
        algorithms=algorithms,
        trials=args.trials,
        seed=args.seed,
        node_budget=args.node_budget,
        floor_policy=args.floor_policy,
    )
    write_records_csv(records, args.out)
    _log(f"wrote {len(records)} trial rows to {args.out}")
    _emit(
        {
            "axis": args.axis,
            "values": values,
            "trials": args.trials,
            "rows": len(records),
            "csv": str(args.out),
            "summary": summary,
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairdiv",
        description="Fair max-min diversification: diverse subset selection "
        "under per-group cardinality bounds.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve one instance and print the solution JSON")
    solve.add_argument(
        "--algo", choices=["exact", "scalable", "gmm", "oracle"], required=True
    )
    _add_dataset_args(solve)
    _add_constraint_args(solve)
    solve.add_argument("--epsilon", type=float, default=0.05, help="scalable accuracy knob")
    solve.add_argument("--start", type=int, default=0, help="greedy start item id")
    solve.add_argument("--node-budget", type=int, default=None, help="feasibility search node cap")
    solve.add_argument(
        "--floor-policy", choices=["error", "zero-threshold"], default="error"
    )
    solve.add_argument(
        "--enum-budget", type=int, default=10_000_000, help="oracle subset enumeration cap"
    )
    solve.set_defaults(func=cmd_solve)

    gen = commands.add_parser("gen", help="generate a synthetic blob dataset CSV")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--groups", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.set_defaults(func=cmd_gen)

    validate = commands.add_parser("validate", help="check constraints against a dataset")
    _add_dataset_args(validate)
    _add_constraint_args(validate)
    validate.set_defaults(func=cmd_validate)

    bench = commands.add_parser("bench", help="run a parameter sweep and write trial rows as CSV")
    bench.add_argument("--axis", choices=list(AXES), required=True)
    bench.add_argument("--values", required=True, help="comma-separated axis values")
    bench.add_argument("--trials", type=int, default=10)
    bench.add_argument(
        "--algos",
        default="scalable",
        help=f"comma-separated algorithms from {ALGORITHMS}",
    )
    bench.add_argument("--n", type=int, default=1000)
    bench.add_argument("--groups", type=int, default=2)
    bench.add_argument("--k", type=int, default=10)
    bench.add_argument("--epsilon", type=float, default=0.05)
    bench.add_argument("--alpha", type=float, default=None)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--node-budget", type=int, default=None)
    bench.add_argument(
        "--floor-policy", choices=["error", "zero-threshold"], default="error"
    )
    bench.add_argument("--out", required=True, help="output CSV path for trial rows")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleConstraintsError as exc:
        _emit_error("infeasible", str(exc), violations=list(exc.violations))
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        _emit_error("budget", str(exc))
        return EXIT_BUDGET
    except DegenerateInstanceError as exc:
        _emit_error("degenerate", str(exc), groups=list(exc.groups))
        return EXIT_BUDGET
    except (OSError, ValueError) as exc:
        _emit_error("input", str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
