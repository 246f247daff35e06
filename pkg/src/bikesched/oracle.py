"""Independent brute-force certification on tiny instances.

The search space is every schedule matrix with at most m columns (larger ones
are never needed: any feasible schedule reduces to one of size <= m with no
worse makespan) where each column assigns the currently active bikes
injectively to agents.  Bike usage is always a prefix of the columns, so a
candidate is described by which bikes are abandoned, after how many columns
each of them retires, and a rider assignment per column.  Each matrix is
scored by the exact LP, which places the continuous abandonment positions
optimally for that matrix, and the overall exact minimum is returned.

Agent-relabeling symmetry is removed by fixing the first column to a
canonical assignment, and consecutive identical columns are skipped (merging
them never changes the optimum).  With pruning enabled (the default), whole
candidate families are skipped using two elementary bounds -- the makespan is
at least every column's average crossing time, and at least u_k for any bike
k ridden in the final column -- and families are visited in ascending bound
order so the search can stop as soon as no remaining family can win.  The
pruned and unpruned searches return identical values (property-tested); turn
pruning off to make the search a pure exhaustive sweep.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .lp import solve_partition
from .model import ProblemInstance, Schedule, ScheduleMatrix, abandonment_vector

ZERO = Fraction(0)
ONE = Fraction(1)


class BudgetExceededError(ValueError):
    """Raised when an instance is too large for the enumeration budget."""


@dataclass(frozen=True)
class EnumerationBudget:
    """Hard ceiling on brute-force instance size.

    ``max_columns`` of None means "as many columns as agents", which is
    always enough; raising it only slows the search down.  ``prune`` toggles
    the lower-bound pruning described in the module docstring.
    """

    max_agents: int = 4
    max_bikes: int = 3
    max_columns: Optional[int] = None
    prune: bool = True

    def check(self, inst: ProblemInstance) -> None:
        if inst.agents > self.max_agents or inst.bikes > self.max_bikes:
            raise BudgetExceededError(
                f"instance ({inst.agents} agents, {inst.bikes} bikes) exceeds "
                f"budget ({self.max_agents}, {self.max_bikes})"
            )


@dataclass(frozen=True)
class _Family:
    """One enumeration family: a column count, the retired bikes and their
    prefix lengths, plus a makespan lower bound shared by all its matrices."""

    n: int
    prefixes: tuple[tuple[int, int], ...]  # (bike, columns ridden), bike 1-based
    bound: Fraction


def brute_force_bs(
    inst: ProblemInstance, budget: EnumerationBudget = EnumerationBudget()
) -> tuple[Fraction, Schedule]:
    """Exact optimum over every full-delivery matrix within the budget."""
    budget.check(inst)
    tau, sched = _search(inst, budget, abandon_limit=0)
    return tau, sched


def brute_force_rbs(
    inst: ProblemInstance,
    budget: EnumerationBudget = EnumerationBudget(),
    abandon_limit: Optional[int] = None,
) -> tuple[Fraction, Schedule, tuple[Fraction, ...]]:
    """Exact optimum when up to ``abandon_limit`` bikes may retire early.

    The limit defaults to the instance's own.  Any limit is accepted here
    (the search just grows); limits >= 2 are exploratory only -- no fast
    solver exists to cross-check them.
    """
    budget.check(inst)
    limit = inst.abandonment_limit if abandon_limit is None else abandon_limit
    tau, sched = _search(inst, budget, abandon_limit=limit)
    return tau, sched, abandonment_vector(sched, inst)


def _column_average(inst: ProblemInstance, active: tuple[int, ...]) -> Fraction:
    riding = sum((inst.inverse_speeds[k - 1] for k in active), ZERO)
    walkers = inst.agents - len(active)
    return (walkers + riding) / inst.agents


def _families(
    inst: ProblemInstance, abandon_limit: int, max_cols: int
) -> list[_Family]:
    b = inst.bikes
    u = inst.inverse_speeds
    families = []
    for n in range(1, max_cols + 1):
        for count in range(0, min(abandon_limit, b) + 1):
            for retired in itertools.combinations(range(1, b + 1), count):
                survivors = [k for k in range(1, b + 1) if k not in retired]
                final_bound = max((u[k - 1] for k in survivors), default=ZERO)
                for lengths in itertools.product(range(n), repeat=count):
                    column_bound = None
                    for c in range(n):
                        active = tuple(
                            k
                            for k in range(1, b + 1)
                            if k not in retired or lengths[retired.index(k)] > c
                        )
                        avg = _column_average(inst, active)
                        if column_bound is None or avg < column_bound:
                            column_bound = avg
                    families.append(
                        _Family(
                            n,
                            tuple(zip(retired, lengths)),
                            max(column_bound, final_bound),
                        )
                    )
    return families


def _search(
    inst: ProblemInstance, budget: EnumerationBudget, abandon_limit: int
) -> tuple[Fraction, Schedule]:
    m = inst.agents
    max_cols = budget.max_columns if budget.max_columns is not None else m
    families = _families(inst, abandon_limit, max_cols)
    if budget.prune:
        families.sort(key=lambda f: (f.bound, f.n, f.prefixes))
    placements: dict[tuple[int, ...], list[tuple[int, ...]]] = {}

    best_tau: Optional[Fraction] = None
    best: Optional[Schedule] = None
    for family in families:
        if budget.prune and best_tau is not None and family.bound >= best_tau:
            break  # families are bound-sorted: nothing later can win
        for matrix in _family_matrices(inst, family, placements):
            x, tau = solve_partition(matrix, inst)
            if budget.prune:
                assert tau >= family.bound, "family bound must be a lower bound"
            if best_tau is None or tau < best_tau:
                best_tau = tau
                best = Schedule(x, matrix)
                if budget.prune and best_tau <= family.bound:
                    break  # this family cannot do strictly better
    assert best_tau is not None and best is not None
    return best_tau, best


def _family_matrices(
    inst: ProblemInstance,
    family: _Family,
    placements: dict[tuple[int, ...], list[tuple[int, ...]]],
) -> Iterator[ScheduleMatrix]:
    m = inst.agents
    retired = dict(family.prefixes)
    choice_lists = []
    for c in range(family.n):
        active = tuple(
            k
            for k in range(1, inst.bikes + 1)
            if k not in retired or retired[k] > c
        )
        if active not in placements:
            cols = []
            for rows in itertools.permutations(range(m), len(active)):
                col = [0] * m
                for bike, row in zip(active, rows):
                    col[row] = bike
                cols.append(tuple(col))
            placements[active] = cols
        if c == 0:
            # Canonical first column kills agent-relabeling symmetry.
            col = [0] * m
            for row, bike in enumerate(active):
                col[row] = bike
            choice_lists.append([tuple(col)])
        else:
            choice_lists.append(placements[active])
    for combo in itertools.product(*choice_lists):
        if any(combo[c] == combo[c - 1] for c in range(1, family.n)):
            continue  # a merged duplicate column is enumerated at n - 1
        rows = tuple(tuple(col[i] for col in combo) for i in range(m))
        yield ScheduleMatrix(rows)
