"""Fair max-min diversification: pick k items maximizing the minimum pairwise
distance while each group's selection count stays within given bounds.

Exact solving (binary search over realized distances with a built-in
branch-and-bound feasibility core), a scalable coreset-based approximation
with a (1 - epsilon)/5 guarantee, brute-force oracles, data ingestion, and a
benchmark harness. A scikit-learn compatible selector wraps the solvers.
"""

from .dataset import (
    FairnessConstraints,
    GroupedDataset,
    Item,
    derive_proportional_bounds,
    generate_blobs,
    load_csv,
    validate_constraints,
    write_csv,
)
from .exact import solve_exact
from .exceptions import (
    BudgetExceededError,
    DegenerateInstanceError,
    FairDivError,
    InfeasibleConstraintsError,
)
from .geometry import (
    MetricKind,
    SortedDistances,
    distance,
    diversity,
    farthest_from_set,
    sorted_pairwise,
)
from .greedy import fill_group, greedy_max_min
from .independent_set import (
    FeasibilityResult,
    FeasibilityStatus,
    ThresholdGraph,
    build_threshold_graph,
    export_lp,
    solve_fair_independent_set,
)
from .oracle import brute_force_fair_max_min, brute_force_max_min
from .scalable import FloorPolicy, ScalableConfig, solve_scalable
from .selector import FairMaxMinSelector
from .solution import Solution

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "DegenerateInstanceError",
    "FairDivError",
    "FairMaxMinSelector",
    "FairnessConstraints",
    "FeasibilityResult",
    "FeasibilityStatus",
    "FloorPolicy",
    "GroupedDataset",
    "InfeasibleConstraintsError",
    "Item",
    "MetricKind",
    "ScalableConfig",
    "Solution",
    "SortedDistances",
    "ThresholdGraph",
    "brute_force_fair_max_min",
    "brute_force_max_min",
    "build_threshold_graph",
    "derive_proportional_bounds",
    "distance",
    "diversity",
    "export_lp",
    "farthest_from_set",
    "fill_group",
    "generate_blobs",
    "greedy_max_min",
    "load_csv",
    "solve_exact",
    "solve_fair_independent_set",
    "solve_scalable",
    "sorted_pairwise",
    "validate_constraints",
    "write_csv",
]
