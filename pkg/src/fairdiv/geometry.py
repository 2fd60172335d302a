"""Distance metrics, the min-pairwise diversity objective, and pairwise-distance arrays."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .exceptions import BudgetExceededError

if TYPE_CHECKING:
    from .dataset import GroupedDataset


class MetricKind(enum.Enum):
    """Supported distance metrics."""

    L1 = "l1"
    L2 = "l2"
    ANGULAR = "angular"

    @classmethod
    def parse(cls, name: str) -> "MetricKind":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown metric {name!r}; expected one of 'l1', 'l2', 'angular'"
            ) from None


def _rows_to_vector(rows, row_norms, metric, v, v_norm):
    # Single reduction pattern shared by every distance entry point, so that
    # the same pair of points yields bit-identical values no matter which
    # call path computed it (binary search and oracles compare floats exactly).
    if metric is MetricKind.L1:
        return np.abs(rows - v).sum(axis=1)
    if metric is MetricKind.L2:
        return np.sqrt(((rows - v) ** 2).sum(axis=1))
    cos = (rows * v).sum(axis=1) / (row_norms * v_norm)
    return np.arccos(np.clip(cos, -1.0, 1.0))


def point_distances(dataset: "GroupedDataset", i: int) -> np.ndarray:
    """Distances from item ``i`` to every item in the dataset (length n)."""
    X = dataset.features
    norms = dataset.norms
    return _rows_to_vector(X, norms, dataset.metric, X[i], norms[i])


def distance(dataset: "GroupedDataset", i: int, j: int) -> float:
    """Distance between items ``i`` and ``j`` under the dataset's metric."""
    n = len(dataset)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"item ids ({i}, {j}) out of range for n={n}")
    X = dataset.features
    norms = dataset.norms
    return float(
        _rows_to_vector(X[j : j + 1], norms[j : j + 1], dataset.metric, X[i], norms[i])[0]
    )


def _as_id_array(dataset: "GroupedDataset", ids: Iterable[int]) -> np.ndarray:
    arr = np.unique(np.asarray(list(ids), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= len(dataset)):
        raise IndexError(f"item ids out of range for n={len(dataset)}")
    return arr


def diversity(dataset: "GroupedDataset", ids: Iterable[int]) -> float:
    """Minimum pairwise distance within ``ids``; +inf when fewer than 2 items."""
    arr = _as_id_array(dataset, ids)
    if arr.size <= 1:
        return math.inf
    values, _, _ = pairwise_condensed(dataset, arr)
    return float(values.min())


def pairwise_condensed(
    dataset: "GroupedDataset", ids: Iterable[int] | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All distinct-pair distances among ``ids`` (default: all items).

    Returns ``(values, pair_i, pair_j)`` in (i, j)-lexicographic order with
    ``pair_i < pair_j`` elementwise; pair arrays hold item ids.
    """
    if ids is None:
        arr = np.arange(len(dataset), dtype=np.int64)
    else:
        arr = _as_id_array(dataset, ids)
    m = arr.size
    if m < 2:
        return (
            np.empty(0, dtype=np.float64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
        )
    X = dataset.features[arr]
    norms = dataset.norms[arr]
    total = m * (m - 1) // 2
    values = np.empty(total, dtype=np.float64)
    pair_i = np.empty(total, dtype=np.int64)
    pair_j = np.empty(total, dtype=np.int64)
    pos = 0
    for a in range(m - 1):
        cnt = m - 1 - a
        values[pos : pos + cnt] = _rows_to_vector(
            X[a + 1 :], norms[a + 1 :], dataset.metric, X[a], norms[a]
        )
        pair_i[pos : pos + cnt] = arr[a]
        pair_j[pos : pos + cnt] = arr[a + 1 :]
        pos += cnt
    return values, pair_i, pair_j


@dataclass(frozen=True)
class SortedDistances:
    """All n(n-1)/2 pairwise distances in ascending order.

    ``pair_i[t] < pair_j[t]`` is the item pair realizing ``values[t]``; ties
    keep (i, j)-lexicographic order.
    """

    values: np.ndarray
    pair_i: np.ndarray
    pair_j: np.ndarray

    def __len__(self) -> int:
        return self.values.size


def sorted_pairwise(dataset: "GroupedDataset", max_items: int = 20_000) -> SortedDistances:
    """Sorted pairwise-distance array for the whole dataset.

    Refuses datasets above ``max_items`` items: the array holds n(n-1)/2
    entries and grows quadratically (roughly 1.6 GB of values at the default
    cap of 20,000 items).
    """
    n = len(dataset)
    if n < 2:
        raise ValueError(f"need at least 2 items to form pairs, got n={n}")
    if n > max_items:
        raise BudgetExceededError(
            f"pairwise array for n={n} exceeds the memory budget of "
            f"{max_items} items ({n * (n - 1) // 2} pairs); "
            "raise max_items explicitly to override"
        )
    values, pair_i, pair_j = pairwise_condensed(dataset)
    # Stable sort keeps the construction's (i, j)-lexicographic order on ties.
    order = np.argsort(values, kind="stable")
    return SortedDistances(
        values=values[order], pair_i=pair_i[order], pair_j=pair_j[order]
    )


def farthest_from_set(
    dataset: "GroupedDataset",
    candidates: Iterable[int],
    anchor: Iterable[int],
) -> tuple[int, float]:
    """Candidate maximizing the minimum distance to ``anchor``.

    Ties break toward the smallest candidate id. Returns ``(id, min_dist)``.
    """
    cands = _as_id_array(dataset, candidates)
    anchors = _as_id_array(dataset, anchor)
    if cands.size == 0:
        raise ValueError("candidates must be non-empty")
    if anchors.size == 0:
        raise ValueError("anchor must be non-empty")
    X = dataset.features
    norms = dataset.norms
    best = np.full(cands.size, np.inf)
    rows = X[cands]
    row_norms = norms[cands]
    for a in anchors:
        d = _rows_to_vector(rows, row_norms, dataset.metric, X[a], norms[a])
        np.minimum(best, d, out=best)
    pos = int(np.argmax(best))  # first max -> smallest id (cands ascending)
    return int(cands[pos]), float(best[pos])
