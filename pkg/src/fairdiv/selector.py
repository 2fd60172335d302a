"""Scikit-learn compatible estimator wrapping the solvers."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .dataset import FairnessConstraints, GroupedDataset, derive_proportional_bounds
from .exact import solve_exact
from .geometry import MetricKind
from .greedy import greedy_max_min
from .scalable import ScalableConfig, solve_scalable
from .solution import Solution


class FairMaxMinSelector(BaseEstimator, TransformerMixin):
    """Select a maximally diverse, group-balanced subset of the fitted rows.

    Fitting solves fair max-min diversification on ``X`` with group labels
    ``y``: pick ``k`` rows maximizing the minimum pairwise distance while the
    count from each group stays within per-group bounds. ``transform`` then
    selects those rows from any row-aligned matrix.

    Parameters
    ----------
    k : int, default=10
        Number of rows to select.
    algorithm : {'scalable', 'exact', 'greedy'}, default='scalable'
        'exact' guarantees the optimum but only suits small inputs;
        'scalable' guarantees diversity >= (1 - epsilon)/5 of the optimum;
        'greedy' ignores the group bounds (plain farthest-point selection).
    metric : {'l2', 'l1', 'angular'}, default='l2'
    epsilon : float, default=0.05
        Accuracy knob for the scalable algorithm.
    alpha : float, default=0.2
        Proportional-representation relaxation used to derive bounds when
        ``bounds`` is None: each group's share of k, widened by (1 +/- alpha).
    bounds : sequence of (lower, upper) pairs, optional
        Explicit per-group bounds in group-index order (first appearance
        order of labels in ``y``). Overrides ``alpha``.
    start : int, default=0
        Seed row for the greedy phases.
    node_budget : int, optional
        Cap on feasibility-search nodes; exhausting it raises.
    floor_policy : {'error', 'zero-threshold'}, default='error'
        Behavior on duplicate-degenerate inputs (scalable algorithm only).

    Attributes
    ----------
    selected_ids_ : ndarray of shape (k,)
        Sorted indices of the selected rows.
    diversity_ : float
        Minimum pairwise distance among the selected rows.
    solution_ : Solution
        Full result with diagnostics.
    dataset_ : GroupedDataset
    constraints_ : FairnessConstraints or None
        None for ``algorithm='greedy'``.

    Examples
    --------
    >>> import numpy as np
    >>> X = np.array([[0.0], [1.0], [4.0], [9.0]])
    >>> groups = ["a", "a", "b", "b"]
    >>> sel = FairMaxMinSelector(k=2, algorithm="exact")
    >>> sel.fit(X, groups).selected_ids_
    array([0, 3])
    """

    def __init__(
        self,
        k=10,
        *,
        algorithm="scalable",
        metric="l2",
        epsilon=0.05,
        alpha=0.2,
        bounds=None,
        start=0,
        node_budget=None,
        floor_policy="error",
    ):
        self.k = k
        self.algorithm = algorithm
        self.metric = metric
        self.epsilon = epsilon
        self.alpha = alpha
        self.bounds = bounds
        self.start = start
        self.node_budget = node_budget
        self.floor_policy = floor_policy

    def fit(self, X, y=None):
        """Solve the selection problem on ``X`` with group labels ``y``.

        ``y`` may hold arbitrary hashable labels; omitted labels place all
        rows in a single group.
        """
        X = check_array(X, dtype=np.float64)
        if y is None:
            labels = [0] * X.shape[0]
        else:
            labels = np.asarray(y)
            if labels.ndim != 1 or labels.shape[0] != X.shape[0]:
                raise ValueError(
                    f"y must be a 1-D label array of length {X.shape[0]}"
                )
            labels = labels.tolist()
        dataset = GroupedDataset.from_labels(X, labels, MetricKind.parse(self.metric))

        if self.algorithm == "greedy":
            ids = greedy_max_min(dataset, self.k, start=self.start)
            solution = Solution.build(dataset, ids)
            constraints = None
        else:
            if self.bounds is not None:
                constraints = FairnessConstraints(
                    k=self.k, bounds=tuple((int(lo), int(hi)) for lo, hi in self.bounds)
                )
            else:
                constraints = derive_proportional_bounds(dataset, self.k, self.alpha)
            if self.algorithm == "exact":
                solution = solve_exact(dataset, constraints, node_budget=self.node_budget)
            elif self.algorithm == "scalable":
                config = ScalableConfig(
                    epsilon=self.epsilon,
                    start=self.start,
                    floor_policy=self.floor_policy,
                )
                solution = solve_scalable(
                    dataset, constraints, config, node_budget=self.node_budget
                )
            else:
                raise ValueError(
                    f"unknown algorithm {self.algorithm!r}; expected "
                    "'scalable', 'exact', or 'greedy'"
                )

        self.dataset_ = dataset
        self.constraints_ = constraints
        self.solution_ = solution
        self.selected_ids_ = np.asarray(solution.selected, dtype=np.int64)
        self.diversity_ = solution.diversity
        self.n_features_in_ = X.shape[1]
        self._n_rows = X.shape[0]
        return self

    def transform(self, X):
        """Select the fitted rows from a row-aligned matrix."""
        check_is_fitted(self, "selected_ids_")
        X = check_array(X, dtype=None, ensure_2d=True)
        if X.shape[0] != self._n_rows:
            raise ValueError(
                f"X has {X.shape[0]} rows but the selector was fitted on "
                f"{self._n_rows}; transform selects rows, so inputs must be "
                "row-aligned with the fitted data"
            )
        return X[self.selected_ids_]
