"""Solvers for the relaxed problem: all agents must finish, but up to
``abandonment_limit`` bikes may be left behind.

With one abandonable bike the structure mirrors the full-delivery case.  If
the slowest bike keeps up with the average bound nothing is abandoned.  If it
lags but the second-slowest does not, the optimum dedicates the last agent to
riding the slowest bike up to the balance point y*, abandoning it there and
switching to the fastest bike, while everyone else relays the remaining bikes
so that the whole crew ties at the one-abandonment bound.  If even the
second-slowest bike lags, it gets a solo rider and the rest of the crew
recurses on the remaining bikes (keeping the slowest, which is still the one
abandoned), making the second-slowest bike's arrival the makespan.

Abandonment limits of two or more are an open problem and rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bs import (
    NestedColumn,
    expand_with_partition,
    relay_schedule,
    solve_bs,
    solve_sync_partition,
)
from .model import (
    TIGHT_AVERAGE,
    TIGHT_ONE_ABANDONED,
    TIGHT_SECOND_SLOWEST,
    BoundCertificate,
    ProblemInstance,
    Schedule,
    ScheduleMatrix,
    abandonment_vector,
    average_bound,
    one_abandonment_bound,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class UnsupportedAbandonmentError(ValueError):
    """Raised for abandonment limits >= 2, which this library does not solve."""


@dataclass(frozen=True)
class RbsSolution:
    """A relaxed-problem answer: the schedule, how far each bike was ridden,
    the bound certificate, and the (bike, position) pairs left behind."""

    schedule: Schedule
    abandonment: tuple[Fraction, ...]
    certificate: BoundCertificate
    abandoned: tuple[tuple[int, Fraction], ...]


def shared_prefix(inst: ProblemInstance) -> int:
    """Largest q such that the q fastest bikes can be relayed by m-b+q agents
    at their average bound (i.e. u_q is not a bottleneck in that subproblem)."""
    best = 0
    for q in range(1, inst.bikes + 1):
        if inst.inverse_speeds[q - 1] <= average_bound(inst.sub_instance(q)):
            best = q
    if best == 0:
        raise ValueError("no shareable prefix; invalid instance")
    return best


def _relabeled(s: Schedule, mapping) -> Schedule:
    rows = tuple(
        tuple(mapping(c) if c != 0 else 0 for c in row) for row in s.matrix.rows
    )
    return Schedule(s.partition, ScheduleMatrix(rows), s.waits)


def abandon_slowest(inst: ProblemInstance) -> RbsSolution:
    """Optimal one-abandonment schedule for the case where only the slowest
    bike lags (u_b above the average bound, u_{b-1} at most the relaxed bound).

    Agent m rides the slowest bike to the balance point y* and finishes on the
    fastest bike; the others relay the q fastest bikes over [0, y*], then the
    crew absorbs the solo riders of bikes q+1, ..., b-1 one at a time, exactly
    as in the full-delivery relay but with the fastest bike reserved for agent
    m.  Everyone ties at the one-abandonment bound.
    """
    m, b = inst.agents, inst.bikes
    u = inst.inverse_speeds
    t_avg = average_bound(inst)
    if b < 2 or inst.slowest <= t_avg:
        raise ValueError("abandoning helps only when the slowest bike lags")
    t_one, y_star = one_abandonment_bound(inst)
    if u[b - 2] > t_one:
        raise ValueError(
            "second-slowest bike is also a bottleneck; use the solo split"
        )
    q = shared_prefix(inst)
    walkers = m - b
    intervals = b - q + 1

    group_sizes = [walkers + q] + [walkers + q + c - 1 for c in range(1, intervals)]
    blocks: list[Schedule] = [relay_schedule(ProblemInstance(walkers + q, u[:q]))]
    # The handover of the fastest bike to agent m at y* must be on time.
    assert average_bound(ProblemInstance(walkers + q, u[:q])) <= inst.slowest
    for c in range(1, intervals):
        block = relay_schedule(ProblemInstance(group_sizes[c], u[1 : q + c - 1]))
        blocks.append(_relabeled(block, lambda lab: lab + 1))

    columns = [
        NestedColumn(
            block=blocks[0],
            tail=tuple(i - walkers + 1 for i in range(group_sizes[0], m)),
        )
    ]
    paces = [[ZERO] * intervals for _ in range(m)]
    for i in range(m):
        paces[i][0] = (
            average_bound(ProblemInstance(walkers + q, u[:q]))
            if i < group_sizes[0]
            else u[i - walkers]
        )
    for c in range(1, intervals):
        g = group_sizes[c]
        pace_g = average_bound(ProblemInstance(g, u[1 : q + c - 1]))
        for i in range(m):
            if i < g:
                paces[i][c] = pace_g
            elif i < m - 1:
                paces[i][c] = u[i - walkers]
            else:
                paces[i][c] = u[0]
        columns.append(
            NestedColumn(
                block=blocks[c],
                tail=tuple(i - walkers + 1 for i in range(g, m - 1)) + (1,),
            )
        )
    sync = tuple((group_sizes[c], group_sizes[c] - 1) for c in range(1, intervals))

    z = solve_sync_partition([tuple(r) for r in paces], sync)
    total = sum(z, ZERO)
    z = tuple(v / total for v in z)
    assert z[0] == y_star, "balance point must match the bound's crossing"
    sched = expand_with_partition(z, columns)

    usage = abandonment_vector(sched, inst)
    assert usage == (ONE,) * (b - 1) + (y_star,)
    cert = BoundCertificate(
        average=t_avg,
        slowest=inst.slowest,
        tight=TIGHT_ONE_ABANDONED,
        one_abandoned=t_one,
    )
    return RbsSolution(sched, usage, cert, ((b, y_star),))


def solo_split_relaxed(inst: ProblemInstance) -> int:
    """Smallest k such that giving the k slowest *deliverable* bikes solo
    riders leaves a crew that can finish, abandoning the slowest bike, by the
    time bike b-1 arrives.

    Applies when both the slowest and second-slowest bikes lag their bounds;
    the returned k in [1, b-2] satisfies
    u_{b-k-1} <= one-abandonment bound of (m-k, {u_1..u_{b-k-1}, u_b}) <= u_{b-1}.
    """
    m, b = inst.agents, inst.bikes
    u = inst.inverse_speeds
    for k in range(1, b - 1):
        rest = ProblemInstance(m - k, u[: b - k - 1] + (u[-1],))
        bound, _ = one_abandonment_bound(rest)
        if u[b - k - 2] <= bound <= u[b - 2]:
            return k
    raise ValueError("no valid solo split; preconditions violated")


def solve_rbs(inst: ProblemInstance) -> RbsSolution:
    """Optimal schedule under the instance's abandonment limit (0 or 1).

    Dispatch for limit 1: nothing abandoned when the slowest bike keeps up
    (makespan = average bound); otherwise abandon it at y* (makespan = the
    one-abandonment bound) unless the second-slowest bike lags too, in which
    case the k slowest deliverable bikes ride solo above a recursive solve
    and the makespan is exactly u_{b-1}.
    """
    limit = inst.abandonment_limit
    if limit >= 2:
        raise UnsupportedAbandonmentError(
            f"unsupported abandonment limit {limit}; only 0 and 1 are solved"
        )
    m, b = inst.agents, inst.bikes
    u = inst.inverse_speeds
    if limit == 0:
        sched, cert = solve_bs(inst)
        return RbsSolution(sched, (ONE,) * b, cert, ())
    t_avg = average_bound(inst)
    if b == 0 or inst.slowest <= t_avg:
        sched = relay_schedule(ProblemInstance(m, u))
        cert = BoundCertificate(
            average=t_avg,
            slowest=inst.slowest if b else None,
            tight=TIGHT_AVERAGE,
            one_abandoned=t_avg,
        )
        return RbsSolution(sched, (ONE,) * b, cert, ())
    t_one, _ = one_abandonment_bound(inst)
    if u[b - 2] <= t_one:
        return abandon_slowest(inst)

    k = solo_split_relaxed(inst)
    rest = ProblemInstance(m - k, u[: b - k - 1] + (u[-1],), abandonment_limit=1)
    inner = solve_rbs(rest)
    # Bike b - k in the subproblem is the original bike b.
    lifted = _relabeled(inner.schedule, lambda lab: b if lab == b - k else lab)
    solo_rows = tuple((b - k + i,) * lifted.size for i in range(k))
    sched = Schedule(lifted.partition, ScheduleMatrix(lifted.matrix.rows + solo_rows))
    usage = abandonment_vector(sched, inst)
    abandoned = tuple(
        (bike + 1, pos) for bike, pos in enumerate(usage) if pos < ONE
    )
    assert len(abandoned) <= 1
    cert = BoundCertificate(
        average=t_avg,
        slowest=inst.slowest,
        tight=TIGHT_SECOND_SLOWEST,
        one_abandoned=t_one,
    )
    return RbsSolution(sched, usage, cert, abandoned)
