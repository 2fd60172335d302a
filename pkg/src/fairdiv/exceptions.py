"""Exception types shared across the package."""

from __future__ import annotations


class FairDivError(Exception):
    """Base class for all fairdiv errors."""


class InfeasibleConstraintsError(FairDivError):
    """The fairness constraints admit no feasible selection.

    Carries the individual violated clauses so callers can report them all.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(self.violations) or "infeasible constraints")


class BudgetExceededError(FairDivError):
    """A node, enumeration, or memory budget was exhausted before completion.

    ``partial`` holds the best solution found so far, when one exists.
    """

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class DegenerateInstanceError(FairDivError):
    """No feasible selection exists at any positive diversity threshold.

    ``groups`` names the group indices whose supply of distinct points falls
    short of their lower bounds.
    """

    def __init__(self, message, groups=()):
        self.groups = tuple(groups)
        super().__init__(message)
