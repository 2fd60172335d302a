"""Threshold graphs and an exact solver for size-k independent sets under
per-group cardinality bounds, with export to LP text format."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .dataset import FairnessConstraints, GroupedDataset
from .geometry import pairwise_condensed


@dataclass(frozen=True)
class ThresholdGraph:
    """Undirected conflict graph joining items strictly closer than ``threshold``.

    ``vertex_ids`` is ascending; ``adjacency[p]`` holds neighbor positions
    (indices into ``vertex_ids``), sorted, symmetric, without self-loops.
    """

    vertex_ids: np.ndarray
    adjacency: tuple[np.ndarray, ...]
    threshold: float

    @property
    def vertex_count(self) -> int:
        return self.vertex_ids.size

    @property
    def edge_count(self) -> int:
        return sum(a.size for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (id, id) pairs with the smaller id first, sorted."""
        out = []
        for p, neigh in enumerate(self.adjacency):
            for q in neigh:
                if p < q:
                    out.append((int(self.vertex_ids[p]), int(self.vertex_ids[q])))
        return out

    @classmethod
    def from_pairs(
        cls,
        vertex_ids: np.ndarray,
        values: np.ndarray,
        pair_i: np.ndarray,
        pair_j: np.ndarray,
        threshold: float,
    ) -> "ThresholdGraph":
        """Build from precomputed pair distances; keeps pairs with d < threshold."""
        vertex_ids = np.asarray(vertex_ids, dtype=np.int64)
        mask = values < threshold
        pi = np.searchsorted(vertex_ids, pair_i[mask])
        pj = np.searchsorted(vertex_ids, pair_j[mask])
        m = vertex_ids.size
        src = np.concatenate([pi, pj])
        dst = np.concatenate([pj, pi])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        counts = np.bincount(src, minlength=m)
        offsets = np.concatenate([[0], np.cumsum(counts)])
        adjacency = tuple(
            dst[offsets[p] : offsets[p + 1]].copy() for p in range(m)
        )
        return cls(vertex_ids=vertex_ids, adjacency=adjacency, threshold=float(threshold))


def build_threshold_graph(
    dataset: GroupedDataset, scope: Iterable[int], delta: float
) -> ThresholdGraph:
    """Graph over ``scope`` with an edge wherever d(u, v) < ``delta``."""
    ids = np.unique(np.asarray(list(scope), dtype=np.int64))
    if ids.size == 0:
        raise ValueError("scope must be non-empty")
    values, pair_i, pair_j = pairwise_condensed(dataset, ids)
    return ThresholdGraph.from_pairs(ids, values, pair_i, pair_j, delta)


class FeasibilityStatus(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    BUDGET = "budget"


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of one independent-set feasibility search."""

    status: FeasibilityStatus
    selected: tuple[int, ...] | None
    nodes_explored: int
    elapsed_ms: float

    @property
    def feasible(self) -> bool:
        return self.status is FeasibilityStatus.FEASIBLE


def solve_fair_independent_set(
    graph: ThresholdGraph,
    dataset: GroupedDataset,
    constraints: FairnessConstraints,
    node_budget: int | None = None,
) -> FeasibilityResult:
    """Complete search for an independent set of size exactly k whose
    per-group counts fall within the constraint bounds.

    Branch and bound over vertex statuses: branch on the undecided vertex of
    maximum degree within the undecided subgraph (ties toward the smallest
    id), include-branch explored first. A subtree is pruned when
      (a) the group-capped supply of undecided vertices cannot reach k,
      (b) some group cannot reach its lower bound anymore, or the lower
          bounds left to satisfy exceed the remaining slots,
      (c) including a vertex would push its group past its upper bound
          (enforced structurally: such include branches are never created).
    A scope whose group supply cannot meet the bounds is an ordinary
    infeasible answer, not an error. ``node_budget`` caps explored nodes and
    yields a distinct BUDGET outcome so callers never mistake it for a proof
    of infeasibility.
    """
    t0 = time.perf_counter()
    ids = graph.vertex_ids
    m = ids.size
    k = constraints.k
    groups = dataset.groups[ids]
    C = dataset.group_count
    lows = constraints.lowers()
    highs = constraints.uppers()
    adjacency = graph.adjacency

    def result(status, selected, nodes):
        return FeasibilityResult(
            status=status,
            selected=selected,
            nodes_explored=nodes,
            elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        )

    if constraints.group_count != C:
        raise ValueError(
            f"constraints define {constraints.group_count} groups, dataset has {C}"
        )

    nodes = 0
    # Stack entries: (status vector, per-group included counts, included total).
    stack = [(np.zeros(m, dtype=np.int8), np.zeros(C, dtype=np.int64), 0)]
    while stack:
        status, counts, included = stack.pop()
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            return result(FeasibilityStatus.BUDGET, None, nodes - 1)

        undecided = status == 0
        avail = np.bincount(groups[undecided], minlength=C)
        # (b) lower bounds out of reach, either per group or in aggregate
        if np.any(counts + avail < lows):
            continue
        if int(np.maximum(lows - counts, 0).sum()) > k - included:
            continue
        # (a) remaining selectable vertices, capped by group headroom
        selectable = int(np.minimum(highs - counts, avail).sum())
        if included + selectable < k:
            continue
        if included == k:
            if np.all(counts >= lows):  # uppers hold by construction
                chosen = tuple(int(v) for v in ids[status == 1])
                return result(FeasibilityStatus.FEASIBLE, chosen, nodes)
            continue

        und_pos = np.flatnonzero(undecided)
        degrees = np.fromiter(
            (int(np.count_nonzero(status[adjacency[p]] == 0)) for p in und_pos),
            dtype=np.int64,
            count=und_pos.size,
        )
        v = int(und_pos[int(np.argmax(degrees))])  # first max -> smallest id
        g = int(groups[v])

        # Exclude branch pushed first so the include branch is explored first.
        st_ex = status.copy()
        st_ex[v] = -1
        stack.append((st_ex, counts.copy(), included))
        if counts[g] < highs[g]:
            st_in = status.copy()
            st_in[v] = 1
            neigh = adjacency[v]
            st_in[neigh[st_in[neigh] == 0]] = -1
            cnt_in = counts.copy()
            cnt_in[g] += 1
            stack.append((st_in, cnt_in, included + 1))
    return result(FeasibilityStatus.INFEASIBLE, None, nodes)


def export_lp(
    graph: ThresholdGraph,
    dataset: GroupedDataset,
    constraints: FairnessConstraints,
    path: str | Path,
) -> None:
    """Write the feasibility instance as an LP-format integer program.

    Maximize the number of chosen vertices subject to one row per conflict
    edge (x_u + x_v <= 1), one cardinality row (sum <= k), a lower and an
    upper row per group, and binary variables. The instance is feasible for
    size k exactly when the optimum equals k; any LP-format MILP solver can
    cross-check the built-in search. Output is byte-identical for identical
    inputs.
    """
    ids = graph.vertex_ids
    groups = dataset.groups[ids]
    if np.bincount(groups, minlength=dataset.group_count).min() == 0:
        raise ValueError("scope must contain at least one vertex of every group")

    def term_sum(vertex_ids):
        return " + ".join(f"x{int(v)}" for v in vertex_ids)

    lines = ["Maximize", f" obj: {term_sum(ids)}", "Subject To"]
    for t, (u, v) in enumerate(graph.edges()):
        lines.append(f" edge{t}: x{u} + x{v} <= 1")
    lines.append(f" cardinality: {term_sum(ids)} <= {constraints.k}")
    for c, (lo, hi) in enumerate(constraints.bounds):
        expr = term_sum(ids[groups == c])
        lines.append(f" group{c}_lower: {expr} >= {lo}")
        lines.append(f" group{c}_upper: {expr} <= {hi}")
    lines.append("Binary")
    lines.extend(f" x{int(v)}" for v in ids)
    lines.append("End")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
