"""Solver result type with self-validation and JSON serialization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .dataset import FairnessConstraints, GroupedDataset
from .geometry import diversity


@dataclass(frozen=True)
class Solution:
    """A selected subset with its diversity value and solver diagnostics.

    ``selected`` is canonically sorted; ``diversity`` is +inf for at most one
    selected item; ``group_counts[c]`` counts selected items in group c.
    """

    selected: tuple[int, ...]
    diversity: float
    group_counts: tuple[int, ...]
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        dataset: GroupedDataset,
        selected: Iterable[int],
        diagnostics: dict | None = None,
    ) -> "Solution":
        ids = tuple(sorted(int(i) for i in set(selected)))
        counts = np.bincount(
            dataset.groups[list(ids)], minlength=dataset.group_count
        ) if ids else np.zeros(dataset.group_count, dtype=np.int64)
        return cls(
            selected=ids,
            diversity=diversity(dataset, ids),
            group_counts=tuple(int(c) for c in counts),
            diagnostics=dict(diagnostics or {}),
        )

    def violations(
        self,
        dataset: GroupedDataset,
        constraints: FairnessConstraints | None = None,
    ) -> list[str]:
        """Recheck every invariant; empty list means the solution is consistent."""
        out = []
        n = len(dataset)
        if any(not (0 <= i < n) for i in self.selected):
            out.append("selected ids out of range")
            return out
        counts = np.bincount(
            dataset.groups[list(self.selected)], minlength=dataset.group_count
        ) if self.selected else np.zeros(dataset.group_count, dtype=np.int64)
        if tuple(int(c) for c in counts) != self.group_counts:
            out.append("group_counts disagree with the selected items")
        recomputed = diversity(dataset, self.selected)
        if recomputed != self.diversity and not (
            math.isinf(recomputed) and math.isinf(self.diversity)
        ):
            out.append(
                f"diversity {self.diversity!r} differs from recomputed {recomputed!r}"
            )
        if constraints is not None:
            if len(self.selected) != constraints.k:
                out.append(
                    f"selected {len(self.selected)} items, expected k={constraints.k}"
                )
            for c, (lo, hi) in enumerate(constraints.bounds):
                if not (lo <= counts[c] <= hi):
                    out.append(
                        f"group {c}: count {int(counts[c])} outside [{lo}, {hi}]"
                    )
        return out

    def to_dict(self, algorithm: str | None = None, k: int | None = None) -> dict:
        out = {}
        if algorithm is not None:
            out["algorithm"] = algorithm
        if k is not None:
            out["k"] = k
        out.update(
            {
                "diversity": self.diversity,
                "selected": list(self.selected),
                "group_counts": list(self.group_counts),
                "diagnostics": self.diagnostics,
            }
        )
        return out
