"""Schedule hygiene: standard form and size reduction.

A feasible schedule is in *standard form* when it has no zero-length columns,
no two consecutive identical columns, and no handover happening at exactly
equal arrival times (a "swap-switch", removable by swapping the two agents'
remaining schedules).  ``standardize`` rewrites any feasible schedule into
standard form without changing any agent's completion time; ``reduce_schedule``
alternates it with exact LP re-solves until the schedule is in standard form,
which forces its size down to at most the number of agents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .lp import build_lp, solve_partition, vertex_from_point
from .model import (
    ProblemInstance,
    Schedule,
    ScheduleMatrix,
    check_feasible,
    completion_profile,
)

ZERO = Fraction(0)


@dataclass(frozen=True)
class StandardFormReport:
    zero_columns_removed: int
    redundant_columns_merged: int
    swap_switches_resolved: int


def standardize(
    s: Schedule, inst: ProblemInstance
) -> tuple[Schedule, StandardFormReport]:
    """Rewrite a feasible schedule into standard form.

    Zero-length columns are deleted, consecutive identical columns merged
    (interval lengths summed), and equal-time handovers eliminated by swapping
    the two agents' row suffixes.  Completion times are preserved exactly.

    Waiting entries ride along: merged columns add their waits, swapped rows
    swap their wait suffixes, and waits sitting on a deleted zero-length
    column are folded into the adjacent kept column (the previous one when it
    exists).  The rewritten schedule is re-checked and an error raised if any
    of this ever broke feasibility.
    """
    report = check_feasible(s, inst)
    if not report.ok:
        raise ValueError(f"cannot standardize an infeasible schedule: {report.violations}")

    m, n = s.agents, s.size
    labels = [list(row) for row in s.matrix.rows]
    waits = [list(row) for row in s.waits] if s.waits is not None else None

    out_cols: list[tuple[int, ...]] = []
    out_x: list[Fraction] = []
    out_d: list[list[Fraction]] = []
    pending = [ZERO] * m  # waits from zero columns before the first kept one
    reach = [ZERO] * m  # completion time through the columns processed so far
    zero_removed = merged = swaps = 0

    for j in range(n):
        if s.partition[j] == 0:
            zero_removed += 1
            if waits is not None:
                for i in range(m):
                    w = waits[i][j]
                    if w != 0:
                        if out_cols:
                            out_d[-1][i] += w
                        else:
                            pending[i] += w
                        reach[i] += w
            continue
        if out_cols:
            # Resolve swap-switches against the last kept column before
            # deciding whether this column is redundant.
            i = 0
            while i < m:
                lab = labels[i][j]
                if lab != 0 and lab != out_cols[-1][i]:
                    dropper = out_cols[-1].index(lab)
                    if reach[i] == reach[dropper]:
                        swaps += 1
                        for col in range(j, n):
                            labels[i][col], labels[dropper][col] = (
                                labels[dropper][col],
                                labels[i][col],
                            )
                            if waits is not None:
                                waits[i][col], waits[dropper][col] = (
                                    waits[dropper][col],
                                    waits[i][col],
                                )
                        continue  # re-examine row i with its new suffix
                i += 1
        column = tuple(labels[i][j] for i in range(m))
        col_d = [waits[i][j] for i in range(m)] if waits is not None else [ZERO] * m
        if out_cols and column == out_cols[-1]:
            merged += 1
            out_x[-1] += s.partition[j]
            for i in range(m):
                out_d[-1][i] += col_d[i]
        else:
            out_cols.append(column)
            out_x.append(s.partition[j])
            if not out_cols[1:]:  # first kept column absorbs leading waits
                col_d = [col_d[i] + pending[i] for i in range(m)]
            out_d.append(col_d)
        for i in range(m):
            reach[i] += inst.speed_of(labels[i][j]) * s.partition[j]
            if waits is not None:
                reach[i] += waits[i][j]

    if not out_cols:
        # Degenerate zero-length schedule: keep one column so the shape stays valid.
        out_cols = [s.matrix.column(0)]
        out_x = [ZERO]
        out_d = [list(pending)]

    rows = tuple(tuple(col[i] for col in out_cols) for i in range(m))
    new_waits = None
    if waits is not None:
        new_waits = tuple(tuple(out_d[j][i] for j in range(len(out_cols))) for i in range(m))
    result = Schedule(tuple(out_x), ScheduleMatrix(rows), new_waits)
    after = check_feasible(result, inst)
    if not after.ok:
        raise RuntimeError(
            "standardization broke feasibility (waits on deleted zero columns "
            f"interact with a handover): {after.violations}"
        )
    return result, StandardFormReport(zero_removed, merged, swaps)


def is_standard_form(s: Schedule, inst: ProblemInstance) -> bool:
    """True when a feasible schedule has no zero columns, no consecutive
    identical columns, and strictly earlier dropper arrival at every handover."""
    if any(x == 0 for x in s.partition):
        return False
    cols = s.matrix.columns()
    for j in range(1, s.size):
        if cols[j] == cols[j - 1]:
            return False
    profile = completion_profile(s, inst)
    for j in range(1, s.size):
        for i, lab in enumerate(cols[j]):
            if lab != 0 and cols[j - 1][i] != lab:
                dropper = cols[j - 1].index(lab)
                if profile.partial[dropper][j - 1] == profile.partial[i][j - 1]:
                    return False
    return True


def reduce_schedule(
    matrix: ScheduleMatrix,
    inst: ProblemInstance,
    initial: Optional[tuple[Fraction, ...]] = None,
) -> Schedule:
    """Shrink a matrix to an equally good schedule of size <= agent count.

    Alternates a vertex-optimal partition with standardization until the pair
    is in standard form.  At a vertex, a schedule larger than the agent count
    always has a zero column or an equal-time handover, so each round
    strictly shrinks either the size or the handover count; the loop
    terminates, in standard form, at size <= agents, never increasing the
    makespan.

    Without ``initial`` the partition comes from the exact LP each round.
    With ``initial`` -- a feasible partition the caller already knows to be
    optimal for the matrix (the solvers build such partitions directly) --
    the LP is skipped entirely: the partition is slid to a vertex of equal
    or better makespan instead, which is all the size argument needs.
    """
    warm: Optional[Schedule] = None
    if initial is not None:
        warm, _ = standardize(Schedule(tuple(initial), matrix), inst)
        matrix = warm.matrix
    best_tau = None
    prev_measure = None
    while True:
        if warm is None:
            x, tau = solve_partition(matrix, inst)
        else:
            x, tau = vertex_from_point(
                build_lp(matrix, inst),
                warm.partition,
                completion_profile(warm, inst).makespan,
            )
        if best_tau is not None and tau > best_tau:
            raise AssertionError("reduction increased the makespan")
        best_tau = tau
        sched = Schedule(x, matrix)
        if is_standard_form(sched, inst):
            if sched.size > inst.agents:
                raise AssertionError(
                    f"reduced schedule has size {sched.size} > {inst.agents} agents"
                )
            return sched
        measure = (matrix.size, len(build_lp(matrix, inst).switches))
        if prev_measure is not None and measure >= prev_measure:
            raise AssertionError("reduction stopped making progress")
        prev_measure = measure
        sched, _ = standardize(sched, inst)
        matrix = sched.matrix
        if warm is not None:
            warm = sched
