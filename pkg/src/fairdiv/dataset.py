"""Data model, CSV ingestion, synthetic instance generation, and constraint handling."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InfeasibleConstraintsError
from .geometry import MetricKind

# Number of Gaussian blobs used by the synthetic generator, independent of
# the number of fairness groups.
BLOB_COUNT = 10
BLOB_BOX = 10.0


@dataclass(frozen=True)
class Item:
    """One data point: dense id, group index, feature vector."""

    id: int
    group: int
    features: np.ndarray


@dataclass(frozen=True)
class GroupedDataset:
    """Immutable item collection partitioned into disjoint groups.

    ``features`` is an (n, dim) float array, ``groups`` an (n,) int array of
    group indices in [0, group_count). Every group index must be represented
    by at least one item. ``group_labels`` optionally retains the original
    labels (e.g. CSV strings) in index order for reporting.
    """

    features: np.ndarray
    groups: np.ndarray
    group_count: int
    metric: MetricKind
    group_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        features = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        groups = np.ascontiguousarray(np.asarray(self.groups, dtype=np.int64))
        if features.ndim != 2 or features.shape[1] < 1:
            raise ValueError("features must be a 2-D array with at least one column")
        if groups.ndim != 1 or groups.shape[0] != features.shape[0]:
            raise ValueError("groups must be a 1-D array aligned with features rows")
        if features.shape[0] == 0:
            raise ValueError("dataset must contain at least one item")
        if not np.all(np.isfinite(features)):
            bad = np.argwhere(~np.isfinite(features))[0]
            raise ValueError(
                f"non-finite feature at item {bad[0]}, component {bad[1]}"
            )
        if self.group_count < 1:
            raise ValueError("group_count must be at least 1")
        if groups.min() < 0 or groups.max() >= self.group_count:
            raise ValueError(
                f"group indices must lie in [0, {self.group_count - 1}]"
            )
        sizes = np.bincount(groups, minlength=self.group_count)
        empty = np.flatnonzero(sizes == 0)
        if empty.size:
            raise ValueError(f"groups {empty.tolist()} contain no items")
        if self.group_labels is not None and len(self.group_labels) != self.group_count:
            raise ValueError("group_labels must have one entry per group")
        if self.metric is MetricKind.ANGULAR:
            zero = np.flatnonzero((features != 0.0).sum(axis=1) == 0)
            if zero.size:
                raise ValueError(
                    f"angular metric requires non-zero vectors; items "
                    f"{zero[:5].tolist()} are all-zero"
                )
        features.setflags(write=False)
        groups.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "groups", groups)

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @cached_property
    def norms(self) -> np.ndarray:
        out = np.sqrt((self.features**2).sum(axis=1))
        out.setflags(write=False)
        return out

    @cached_property
    def group_sizes(self) -> tuple[int, ...]:
        return tuple(np.bincount(self.groups, minlength=self.group_count).tolist())

    def ids_in_group(self, c: int) -> np.ndarray:
        if not (0 <= c < self.group_count):
            raise IndexError(f"group {c} out of range for C={self.group_count}")
        return np.flatnonzero(self.groups == c)

    def item(self, i: int) -> Item:
        return Item(id=int(i), group=int(self.groups[i]), features=self.features[i])

    def __iter__(self):
        return (self.item(i) for i in range(len(self)))

    @classmethod
    def from_labels(
        cls,
        features: np.ndarray,
        labels: Sequence,
        metric: MetricKind,
    ) -> "GroupedDataset":
        """Build a dataset mapping arbitrary group labels to dense indices.

        Labels map to 0..C-1 in first-appearance order, which keeps runs
        reproducible for a fixed input row order.
        """
        index_of: dict[object, int] = {}
        groups = np.empty(len(labels), dtype=np.int64)
        for i, lab in enumerate(labels):
            if lab not in index_of:
                index_of[lab] = len(index_of)
            groups[i] = index_of[lab]
        return cls(
            features=np.asarray(features, dtype=np.float64),
            groups=groups,
            group_count=len(index_of),
            metric=metric,
            group_labels=tuple(str(lab) for lab in index_of),
        )

    def metadata(self) -> dict:
        """JSON-ready sidecar metadata."""
        return {
            "n": len(self),
            "groups": self.group_count,
            "dim": self.dim,
            "metric": self.metric.value,
            "group_labels": list(self.group_labels)
            if self.group_labels is not None
            else [str(c) for c in range(self.group_count)],
        }


@dataclass(frozen=True)
class FairnessConstraints:
    """Target size ``k`` plus inclusive per-group bounds ``(lower, upper)``.

    Construction checks only local sanity (non-negative integers, k >= 1);
    cross-checks against a dataset live in :func:`validate_constraints`.
    """

    k: int
    bounds: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        bounds = tuple((int(lo), int(hi)) for lo, hi in self.bounds)
        if not bounds:
            raise ValueError("bounds must contain at least one group")
        for c, (lo, hi) in enumerate(bounds):
            if lo < 0 or hi < 0:
                raise ValueError(f"group {c}: bounds must be non-negative")
        object.__setattr__(self, "bounds", bounds)

    @property
    def group_count(self) -> int:
        return len(self.bounds)

    def lowers(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds], dtype=np.int64)

    def uppers(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds], dtype=np.int64)


def validate_constraints(
    dataset: GroupedDataset, constraints: FairnessConstraints
) -> list[str]:
    """Check constraints against a dataset; returns every violated clause.

    An empty list means the constraints admit at least one feasible selection
    (ignoring distances): lower <= upper <= group size for every group, and
    sum(lower) <= k <= sum(upper).
    """
    if constraints.group_count != dataset.group_count:
        return [
            f"constraints define {constraints.group_count} groups but the "
            f"dataset has {dataset.group_count}"
        ]
    violations = []
    sizes = dataset.group_sizes
    for c, (lo, hi) in enumerate(constraints.bounds):
        if lo > hi:
            violations.append(f"group {c}: lower bound {lo} > upper bound {hi}")
        if hi > sizes[c]:
            violations.append(f"group {c}: upper bound {hi} > group size {sizes[c]}")
    total_lo = sum(lo for lo, _ in constraints.bounds)
    total_hi = sum(hi for _, hi in constraints.bounds)
    if total_lo > constraints.k:
        violations.append(
            f"sum of lower bounds {total_lo} > k = {constraints.k}"
        )
    if constraints.k > total_hi:
        violations.append(
            f"k = {constraints.k} > sum of upper bounds {total_hi}"
        )
    return violations


def require_valid(dataset: GroupedDataset, constraints: FairnessConstraints) -> None:
    report = validate_constraints(dataset, constraints)
    if report:
        raise InfeasibleConstraintsError(report)


def derive_proportional_bounds(
    dataset: GroupedDataset, k: int, alpha: float
) -> FairnessConstraints:
    """Per-group bounds proportional to group share, relaxed by (1 +/- alpha).

    lower_c = max(1, floor((1 - alpha) * k * |V_c| / n)) and
    upper_c = min(ceil((1 + alpha) * k * |V_c| / n), |V_c|): floor/ceil give
    the widest integer relaxation, and the clamp keeps uppers attainable.
    Raises when the derived bounds are infeasible.
    """
    n = len(dataset)
    if not (1 <= k <= n):
        raise ValueError(f"k must lie in [1, n={n}], got {k}")
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    bounds = []
    for size in dataset.group_sizes:
        share = k * size / n
        lo = max(1, math.floor((1.0 - alpha) * share))
        hi = min(math.ceil((1.0 + alpha) * share), size)
        bounds.append((lo, hi))
    constraints = FairnessConstraints(k=k, bounds=tuple(bounds))
    require_valid(dataset, constraints)
    return constraints


def load_csv(
    path: str | Path,
    group_column: str | int,
    metric: MetricKind | str,
    header: bool = False,
) -> GroupedDataset:
    """Load a dataset from a UTF-8, comma-separated file.

    Every column except ``group_column`` must parse as a finite real and
    becomes a feature, in the original column order. ``group_column`` is a
    0-based index, or a column name when ``header`` is true. Row and column
    positions in error messages are 1-based over data rows.
    """
    metric = MetricKind.parse(metric) if isinstance(metric, str) else metric
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)

    names = None
    if header:
        if not rows:
            raise ValueError(f"{path}: file is empty, expected a header row")
        names = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no data rows")

    width = len(rows[0])
    if isinstance(group_column, str):
        if names is None:
            raise ValueError(
                "group_column given by name requires header=True"
            )
        try:
            gcol = names.index(group_column)
        except ValueError:
            raise ValueError(
                f"{path}: no column named {group_column!r} in header {names}"
            ) from None
    else:
        gcol = int(group_column)
        if gcol < 0:
            gcol += width
    if not (0 <= gcol < width):
        raise ValueError(
            f"{path}: group column index {group_column} out of range for "
            f"{width} columns"
        )
    if width < 2:
        raise ValueError(f"{path}: rows need at least one feature column")

    labels = []
    feats = np.empty((len(rows), width - 1), dtype=np.float64)
    for r, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ValueError(
                f"{path}: row {r} has {len(row)} columns, expected {width}"
            )
        out_c = 0
        for c, cell in enumerate(row):
            if c == gcol:
                label = cell.strip()
                if not label:
                    raise ValueError(
                        f"{path}: row {r}, column {c + 1}: empty group label"
                    )
                labels.append(label)
                continue
            try:
                value = float(cell)
            except ValueError:
                raise ValueError(
                    f"{path}: row {r}, column {c + 1}: not a number: {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise ValueError(
                    f"{path}: row {r}, column {c + 1}: non-finite value {cell!r}"
                )
            feats[r - 1, out_c] = value
            out_c += 1
    return GroupedDataset.from_labels(feats, labels, metric)


def write_csv(dataset: GroupedDataset, path: str | Path, header: bool = True) -> None:
    """Write features plus a trailing group-label column, round-trippable by
    :func:`load_csv` (floats use shortest round-trip formatting)."""
    path = Path(path)
    labels = dataset.group_labels or tuple(str(c) for c in range(dataset.group_count))
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow([f"f{c}" for c in range(dataset.dim)] + ["group"])
        for i in range(len(dataset)):
            writer.writerow(
                [repr(float(v)) for v in dataset.features[i]]
                + [labels[dataset.groups[i]]]
            )


def generate_blobs(n: int, groups: int, seed: int) -> GroupedDataset:
    """Synthetic 2-D instance: ten unit-variance Gaussian blobs with centers
    drawn uniformly from [-10, 10]^2, items assigned to groups uniformly at
    random, L2 metric.

    Uses the counter-based Philox generator, so identical seeds reproduce the
    dataset bit-exactly across platforms. If sampling leaves a group empty,
    items are reassigned deterministically (smallest ids from groups that can
    spare one).
    """
    if groups < 1:
        raise ValueError(f"groups must be at least 1, got {groups}")
    if n < groups:
        raise ValueError(f"need n >= groups so every group is non-empty; got n={n}, groups={groups}")
    rng = np.random.Generator(np.random.Philox(seed))
    centers = _sample_blob_centers(rng)
    blob = rng.integers(BLOB_COUNT, size=n)
    features = centers[blob] + rng.standard_normal((n, 2))
    assignment = rng.integers(groups, size=n)

    sizes = np.bincount(assignment, minlength=groups)
    for c in np.flatnonzero(sizes == 0):
        for i in range(n):
            if sizes[assignment[i]] >= 2:
                sizes[assignment[i]] -= 1
                assignment[i] = c
                sizes[c] += 1
                break
    return GroupedDataset(
        features=features,
        groups=assignment,
        group_count=groups,
        metric=MetricKind.L2,
        group_labels=tuple(str(c) for c in range(groups)),
    )


def _sample_blob_centers(rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-BLOB_BOX, BLOB_BOX, size=(BLOB_COUNT, 2))
