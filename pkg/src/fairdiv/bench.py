"""Benchmark harness: parameter sweeps over synthetic instances with
per-trial records and per-configuration summaries."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import derive_proportional_bounds, generate_blobs
from .exceptions import FairDivError
from .exact import solve_exact
from .greedy import greedy_max_min
from .oracle import brute_force_fair_max_min
from .scalable import ScalableConfig, solve_scalable
from .solution import Solution

AXES = ("k", "epsilon", "n", "C")
ALGORITHMS = ("exact", "scalable", "gmm", "oracle")

CSV_COLUMNS = [
    "algorithm",
    "dataset",
    "axis",
    "value",
    "n",
    "groups",
    "k",
    "epsilon",
    "trial",
    "seed",
    "start",
    "diversity",
    "elapsed_ms",
    "error",
    "diagnostics",
]


@dataclass(frozen=True)
class BenchRecord:
    """One trial of one algorithm on one sweep configuration."""

    algorithm: str
    dataset: str
    axis: str
    value: float
    n: int
    groups: int
    k: int
    epsilon: float | None
    trial: int
    seed: int
    start: int
    diversity: float | None
    elapsed_ms: float | None
    error: str | None = None
    diagnostics: dict = field(default_factory=dict)

    def row(self) -> list:
        return [
            self.algorithm,
            self.dataset,
            self.axis,
            self.value,
            self.n,
            self.groups,
            self.k,
            "" if self.epsilon is None else self.epsilon,
            self.trial,
            self.seed,
            self.start,
            "" if self.diversity is None else repr(self.diversity),
            "" if self.elapsed_ms is None else repr(self.elapsed_ms),
            self.error or "",
            json.dumps(self.diagnostics, sort_keys=True, default=str),
        ]


def _derived_seed(master: int, *path: int) -> int:
    # All randomness stems from the master seed; (master, config, trial)
    # paths give independent, replayable streams.
    seq = np.random.SeedSequence([int(master), *[int(p) for p in path]])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def run_sweep(
    axis: str,
    values: list,
    *,
    n: int = 1000,
    groups: int = 2,
    k: int = 10,
    epsilon: float = 0.05,
    alpha: float = 0.2,
    algorithms: tuple[str, ...] = ("scalable",),
    trials: int = 10,
    seed: int = 0,
    node_budget: int | None = None,
    floor_policy: str = "error",
    subset_budget: int | None = None,
) -> tuple[list[BenchRecord], list[dict]]:
    """Run ``trials`` repetitions of each algorithm at every value along one
    sweep axis (k, epsilon, n, or C), on seeded synthetic instances.

    The dataset of a configuration is fixed across trials; trials vary the
    greedy start row through the derived trial seed. Failures are recorded
    per row rather than aborting the sweep.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise ValueError(f"unknown algorithms {unknown}; expected subset of {ALGORITHMS}")
    if trials < 1:
        raise ValueError("trials must be at least 1")

    records: list[BenchRecord] = []
    for idx, value in enumerate(values):
        cfg = {"n": n, "groups": groups, "k": k, "epsilon": epsilon}
        if axis == "C":
            cfg["groups"] = int(value)
        elif axis == "epsilon":
            cfg["epsilon"] = float(value)
        else:
            cfg[axis] = int(value)

        dataset_seed = _derived_seed(seed, idx)
        descriptor = (
            f"blobs(n={cfg['n']},C={cfg['groups']},seed={dataset_seed})"
        )
        try:
            dataset = generate_blobs(cfg["n"], cfg["groups"], dataset_seed)
            constraints = derive_proportional_bounds(dataset, cfg["k"], alpha)
            setup_error = None
        except (FairDivError, ValueError) as exc:
            dataset = None
            constraints = None
            setup_error = f"{type(exc).__name__}: {exc}"

        for trial in range(trials):
            start_rng = np.random.default_rng(
                np.random.SeedSequence([int(seed), idx, trial])
            )
            start = int(start_rng.integers(cfg["n"])) if dataset is not None else 0
            for algo in algorithms:
                base = dict(
                    algorithm=algo,
                    dataset=descriptor,
                    axis=axis,
                    value=value,
                    n=cfg["n"],
                    groups=cfg["groups"],
                    k=cfg["k"],
                    epsilon=cfg["epsilon"] if algo == "scalable" else None,
                    trial=trial,
                    seed=dataset_seed,
                    start=start,
                )
                if setup_error is not None:
                    records.append(
                        BenchRecord(
                            **base, diversity=None, elapsed_ms=None, error=setup_error
                        )
                    )
                    continue
                records.append(
                    _run_one(
                        base,
                        dataset,
                        constraints,
                        algo,
                        cfg,
                        start,
                        node_budget,
                        floor_policy,
                        subset_budget,
                    )
                )
    return records, summarize(records)


def _run_one(
    base, dataset, constraints, algo, cfg, start, node_budget, floor_policy, subset_budget
):
    t0 = time.perf_counter()
    try:
        if algo == "exact":
            sol = solve_exact(dataset, constraints, node_budget=node_budget)
        elif algo == "scalable":
            config = ScalableConfig(
                epsilon=cfg["epsilon"], start=start, floor_policy=floor_policy
            )
            sol = solve_scalable(dataset, constraints, config, node_budget=node_budget)
        elif algo == "gmm":
            ids = greedy_max_min(dataset, cfg["k"], start=start)
            sol = Solution.build(dataset, ids)
        else:
            kwargs = {}
            if subset_budget is not None:
                kwargs["subset_budget"] = subset_budget
            sol = brute_force_fair_max_min(dataset, constraints, **kwargs)
    except FairDivError as exc:
        return BenchRecord(
            **base,
            diversity=None,
            elapsed_ms=(time.perf_counter() - t0) * 1000.0,
            error=f"{type(exc).__name__}: {exc}",
        )
    elapsed = (time.perf_counter() - t0) * 1000.0
    return BenchRecord(
        **base,
        diversity=sol.diversity,
        elapsed_ms=elapsed,
        diagnostics=sol.diagnostics,
    )


def summarize(records: list[BenchRecord]) -> list[dict]:
    """Per (configuration, algorithm) mean/min/max over successful trials."""
    keys: list[tuple] = []
    grouped: dict[tuple, list[BenchRecord]] = {}
    for rec in records:
        key = (rec.algorithm, rec.axis, rec.value, rec.n, rec.groups, rec.k, rec.epsilon)
        if key not in grouped:
            grouped[key] = []
            keys.append(key)
        grouped[key].append(rec)

    out = []
    for key in keys:
        rows = grouped[key]
        ok = [r for r in rows if r.error is None]
        entry = {
            "algorithm": key[0],
            "axis": key[1],
            "value": key[2],
            "n": key[3],
            "groups": key[4],
            "k": key[5],
            "epsilon": key[6],
            "trials": len(rows),
            "failures": len(rows) - len(ok),
        }
        if ok:
            divs = [r.diversity for r in ok]
            times = [r.elapsed_ms for r in ok]
            entry["diversity"] = {
                "mean": sum(divs) / len(divs),
                "min": min(divs),
                "max": max(divs),
            }
            entry["elapsed_ms"] = {
                "mean": sum(times) / len(times),
                "min": min(times),
                "max": max(times),
            }
        out.append(entry)
    return out


def write_records_csv(records: list[BenchRecord], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())
