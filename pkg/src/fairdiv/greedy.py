"""Farthest-point greedy selection and the per-group threshold fill."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dataset import GroupedDataset
from .geometry import diversity, point_distances


def greedy_max_min(dataset: GroupedDataset, k: int, start: int = 0) -> list[int]:
    """Farthest-point-first selection of ``k`` items (1/2-approximate for
    unconstrained max-min diversification).

    Each step adds the item maximizing the minimum distance to the current
    selection, ties toward the smallest id, so the output is deterministic
    for a fixed ``start``.
    """
    n = len(dataset)
    if not (1 <= k <= n):
        raise ValueError(f"k must lie in [1, n={n}], got {k}")
    if not (0 <= start < n):
        raise IndexError(f"start id {start} out of range for n={n}")
    selected = [start]
    min_dist = point_distances(dataset, start)
    min_dist[start] = -np.inf
    for _ in range(k - 1):
        nxt = int(np.argmax(min_dist))  # first max -> smallest id
        selected.append(nxt)
        np.minimum(min_dist, point_distances(dataset, nxt), out=min_dist)
        min_dist[nxt] = -np.inf
    return selected


@dataclass(frozen=True)
class _FillState:
    ids: tuple[int, ...]
    internal_diversity: float
    # Best min-distance among group members left outside, -inf when the
    # group is exhausted, irrelevant (nan) when capped.
    outside_best: float


def fill_group(
    dataset: GroupedDataset,
    group: int,
    seed: Iterable[int],
    threshold: float,
    cap: int,
) -> set[int]:
    """Grow ``seed`` within ``group`` by farthest-point additions while each
    addition keeps the set's diversity at or above ``threshold``.

    The farthest candidate maximizes the qualification value, so testing it
    alone decides whether any candidate qualifies. Stops at ``cap`` items or
    when the best candidate falls short; an empty seed always gains its first
    item (a one-item set has +inf diversity).
    """
    return set(_fill_state(dataset, group, seed, threshold, cap).ids)


def _fill_state(
    dataset: GroupedDataset,
    group: int,
    seed: Iterable[int],
    threshold: float,
    cap: int,
) -> _FillState:
    members = dataset.ids_in_group(group)
    seed_ids = sorted(set(int(i) for i in seed))
    member_set = set(members.tolist())
    outside = [i for i in seed_ids if i not in member_set]
    if outside:
        raise ValueError(f"seed items {outside} are not in group {group}")
    if cap < len(seed_ids):
        raise ValueError(f"cap {cap} below seed size {len(seed_ids)}")

    pos_of = {int(v): p for p, v in enumerate(members)}
    in_set = np.zeros(members.size, dtype=bool)
    min_dist = np.full(members.size, np.inf)
    for s in seed_ids:
        np.minimum(min_dist, point_distances(dataset, s)[members], out=min_dist)
        in_set[pos_of[s]] = True
    min_dist[in_set] = -np.inf

    current = list(seed_ids)
    div_value = diversity(dataset, current)
    while len(current) < cap:
        pos = int(np.argmax(min_dist))
        best = float(min_dist[pos])
        if best == -np.inf:  # group exhausted
            return _FillState(tuple(current), div_value, -math.inf)
        if min(div_value, best) < threshold:
            return _FillState(tuple(current), div_value, best)
        chosen = int(members[pos])
        current.append(chosen)
        div_value = min(div_value, best)
        np.minimum(min_dist, point_distances(dataset, chosen)[members], out=min_dist)
        min_dist[pos] = -np.inf
    return _FillState(tuple(current), div_value, math.nan)
