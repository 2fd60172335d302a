"""Brute-force solvers used as ground truth in tests and acceptance runs."""

from __future__ import annotations

import itertools
import math
import time

import numpy as np

from .dataset import FairnessConstraints, GroupedDataset, require_valid
from .exceptions import BudgetExceededError, InfeasibleConstraintsError
from .geometry import pairwise_condensed
from .solution import Solution

DEFAULT_SUBSET_BUDGET = 10_000_000


def brute_force_fair_max_min(
    dataset: GroupedDataset,
    constraints: FairnessConstraints,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> Solution:
    """Enumerate every size-k subset meeting the group bounds and return the
    one with maximum diversity (ties: lexicographically smallest id tuple).

    Deliberately free of pruning so it stays obviously correct.
    """
    require_valid(dataset, constraints)
    return _enumerate(dataset, constraints.k, constraints, subset_budget)


def brute_force_max_min(
    dataset: GroupedDataset,
    k: int,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> Solution:
    """Unconstrained variant: best size-k subset by diversity."""
    return _enumerate(dataset, k, None, subset_budget)


def _enumerate(dataset, k, constraints, subset_budget):
    n = len(dataset)
    if not (1 <= k <= n):
        raise ValueError(f"k must lie in [1, n={n}], got {k}")
    total = math.comb(n, k)
    if total > subset_budget:
        raise BudgetExceededError(
            f"enumerating C({n}, {k}) = {total} subsets exceeds the budget "
            f"of {subset_budget}"
        )
    t0 = time.perf_counter()
    square = _square_distances(dataset)
    groups = dataset.groups.tolist()
    C = dataset.group_count
    lows = highs = None
    if constraints is not None:
        lows = [lo for lo, _ in constraints.bounds]
        highs = [hi for _, hi in constraints.bounds]

    best_ids = None
    best_div = -math.inf
    examined = 0
    for combo in itertools.combinations(range(n), k):
        examined += 1
        if constraints is not None:
            counts = [0] * C
            for i in combo:
                counts[groups[i]] += 1
            if any(c < lo or c > hi for c, lo, hi in zip(counts, lows, highs)):
                continue
        value = math.inf
        for a in range(k):
            row = square[combo[a]]
            for b in range(a + 1, k):
                d = row[combo[b]]
                if d < value:
                    value = d
        # Strict improvement keeps the lexicographically smallest witness,
        # since itertools.combinations yields subsets in lexicographic order.
        if best_ids is None or value > best_div:
            best_ids = combo
            best_div = value
    if best_ids is None:  # unreachable once constraints validate
        raise InfeasibleConstraintsError(["no subset satisfied the group bounds"])
    return Solution.build(
        dataset,
        best_ids,
        diagnostics={
            "subsets_examined": examined,
            "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
        },
    )


def _square_distances(dataset: GroupedDataset) -> np.ndarray:
    n = len(dataset)
    values, pair_i, pair_j = pairwise_condensed(dataset)
    square = np.zeros((n, n))
    square[pair_i, pair_j] = values
    square[pair_j, pair_i] = values
    return square
