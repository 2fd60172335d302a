"""Scalable approximate solver: greedy seeding, per-group coreset fill, and a
geometrically decaying diversity threshold."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import FairnessConstraints, GroupedDataset, require_valid
from .exceptions import BudgetExceededError, DegenerateInstanceError
from .geometry import diversity, pairwise_condensed
from .greedy import _fill_state, greedy_max_min
from .independent_set import FeasibilityStatus, ThresholdGraph, solve_fair_independent_set
from .solution import Solution


class FloorPolicy(enum.Enum):
    """What to do when the threshold decays past any useful level while the
    instance still has no feasible set (duplicate-heavy groups)."""

    ERROR = "error"
    ZERO_THRESHOLD = "zero-threshold"

    @classmethod
    def parse(cls, name: str) -> "FloorPolicy":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown floor policy {name!r}; expected 'error' or 'zero-threshold'"
            ) from None


@dataclass(frozen=True)
class ScalableConfig:
    epsilon: float = 0.05
    start: int = 0
    floor_policy: FloorPolicy = FloorPolicy.ERROR

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie strictly in (0, 1), got {self.epsilon}")
        if isinstance(self.floor_policy, str):
            object.__setattr__(self, "floor_policy", FloorPolicy.parse(self.floor_policy))


def solve_scalable(
    dataset: GroupedDataset,
    constraints: FairnessConstraints,
    config: ScalableConfig | None = None,
    node_budget: int | None = None,
) -> Solution:
    """Feasible subset with diversity at least (1 - epsilon)/5 of the optimum.

    Seeds with the unconstrained greedy selection U (twice its diversity
    upper-bounds the optimum), then repeatedly: grow each group's candidate
    set up to k items while additions keep that set's diversity >= d', build
    the conflict graph on the union at threshold d'/2, and search it for a
    feasible independent set. On failure d' decays by (1 - epsilon). The
    union never exceeds C*k items, so each search stays small regardless of
    the dataset size.

    The loop cannot succeed at any positive threshold when groups lack enough
    distinct points; once every group is capped, exhausted, or blocked by
    duplicates and the graph has shrunk to duplicate edges only, the answer
    can no longer change and ``floor_policy`` decides: raise a diagnosis, or
    re-solve on an edgeless graph accepting possibly-zero diversity.
    """
    config = config or ScalableConfig()
    require_valid(dataset, constraints)
    n = len(dataset)
    k = constraints.k
    if not (2 <= k <= n):
        raise ValueError(f"k must lie in [2, n={n}], got {k}")

    t0 = time.perf_counter()
    seed = greedy_max_min(dataset, k, start=config.start)
    greedy_div = diversity(dataset, seed)
    d_prime = 2.0 * greedy_div

    C = dataset.group_count
    per_group: list[tuple[int, ...]] = [tuple() for _ in range(C)]
    for item in seed:
        c = int(dataset.groups[item])
        per_group[c] = per_group[c] + (item,)

    iterations = 0
    total_nodes = 0
    coreset_sizes: list[int] = []
    while True:
        iterations += 1
        frozen_all = True
        for c in range(C):
            state = _fill_state(dataset, c, per_group[c], d_prime, k)
            per_group[c] = state.ids
            capped = len(state.ids) >= k
            exhausted = state.outside_best == -math.inf
            duplicates_only = state.outside_best == 0.0 or state.internal_diversity == 0.0
            if not (capped or exhausted or duplicates_only):
                frozen_all = False

        coreset = np.unique(np.concatenate([np.asarray(g, dtype=np.int64) for g in per_group]))
        size = int(coreset.size)
        if size > C * k:
            raise RuntimeError(f"coreset grew to {size} > C*k = {C * k}")
        coreset_sizes.append(size)

        values, pair_i, pair_j = pairwise_condensed(dataset, coreset)
        delta = d_prime / 2.0
        graph = ThresholdGraph.from_pairs(coreset, values, pair_i, pair_j, delta)
        outcome = solve_fair_independent_set(graph, dataset, constraints, node_budget)
        total_nodes += outcome.nodes_explored
        if outcome.status is FeasibilityStatus.BUDGET:
            raise BudgetExceededError(
                f"node budget {node_budget} exhausted in iteration {iterations}"
            )
        if outcome.feasible:
            return Solution.build(
                dataset,
                outcome.selected,
                diagnostics=_diagnostics(
                    iterations, d_prime, greedy_div, coreset_sizes, total_nodes, t0, False
                ),
            )

        positive = values[values > 0.0]
        min_positive = float(positive.min()) if positive.size else math.inf
        if frozen_all and delta <= min_positive:
            # Every group is stuck and only duplicate edges remain: no lower
            # threshold can change the answer.
            if config.floor_policy is FloorPolicy.ERROR:
                raise DegenerateInstanceError(
                    _degenerate_message(dataset, constraints),
                    groups=_short_groups(dataset, constraints),
                )
            return _solve_zero_threshold(
                dataset,
                constraints,
                per_group,
                node_budget,
                iterations,
                greedy_div,
                coreset_sizes,
                total_nodes,
                t0,
            )
        d_prime *= 1.0 - config.epsilon


def _solve_zero_threshold(
    dataset, constraints, per_group, node_budget, iterations, greedy_div,
    coreset_sizes, total_nodes, t0,
):
    # Refill at threshold 0 so duplicate points may enter, then solve on an
    # edgeless graph; validated constraints make this always feasible.
    k = constraints.k
    for c in range(len(per_group)):
        state = _fill_state(dataset, c, per_group[c], 0.0, k)
        per_group[c] = state.ids
    coreset = np.unique(np.concatenate([np.asarray(g, dtype=np.int64) for g in per_group]))
    coreset_sizes = coreset_sizes + [int(coreset.size)]
    values, pair_i, pair_j = pairwise_condensed(dataset, coreset)
    graph = ThresholdGraph.from_pairs(coreset, values, pair_i, pair_j, 0.0)
    outcome = solve_fair_independent_set(graph, dataset, constraints, node_budget)
    total_nodes += outcome.nodes_explored
    if outcome.status is FeasibilityStatus.BUDGET:
        raise BudgetExceededError(
            f"node budget {node_budget} exhausted in the zero-threshold fallback"
        )
    if not outcome.feasible:  # unreachable for validated constraints
        raise RuntimeError("zero-threshold fallback found no feasible set")
    return Solution.build(
        dataset,
        outcome.selected,
        diagnostics=_diagnostics(
            iterations, 0.0, greedy_div, coreset_sizes, total_nodes, t0, True
        ),
    )


def _diagnostics(iterations, final_threshold, greedy_div, coreset_sizes, nodes, t0, floored):
    return {
        "iterations": iterations,
        "final_threshold": final_threshold,
        "greedy_diversity": greedy_div,
        "coreset_sizes": list(coreset_sizes),
        "search_nodes": nodes,
        "floor_applied": floored,
        "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
    }


def _distinct_supply(dataset: GroupedDataset, c: int) -> int:
    rows = dataset.features[dataset.ids_in_group(c)]
    return int(np.unique(rows, axis=0).shape[0])


def _short_groups(dataset, constraints) -> tuple[int, ...]:
    return tuple(
        c
        for c, (lo, _) in enumerate(constraints.bounds)
        if _distinct_supply(dataset, c) < lo
    )


def _degenerate_message(dataset, constraints) -> str:
    short = _short_groups(dataset, constraints)
    if short:
        parts = ", ".join(
            f"group {c} has {_distinct_supply(dataset, c)} distinct points "
            f"but lower bound {constraints.bounds[c][0]}"
            for c in short
        )
        return f"no feasible set at any positive threshold: {parts}"
    supply = sum(
        min(hi, _distinct_supply(dataset, c))
        for c, (_, hi) in enumerate(constraints.bounds)
    )
    return (
        "no feasible set at any positive threshold: distinct points usable "
        f"across groups total {supply} < k = {constraints.k}"
    )
