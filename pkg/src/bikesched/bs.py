"""Solvers for the full-delivery problem: every agent and every bike must
reach the end of the interval.

When even the slowest bike is fast enough (u_b at most the average bound),
the optimal schedule is a *relay*: the bikes cascade backwards through the
agents until a synchronized group has formed in front, then catch up with and
get absorbed by that group one at a time, fastest first, with the slowest
bike arriving exactly at the end.  Interval lengths are chosen so that each
absorbed agent meets the group precisely at an interval boundary, which makes
everyone finish together at the average bound.

Two constructions are provided: ``relay_reference`` expands every recursive
group schedule in place (its size grows exponentially with the bike count;
it exists for differential testing), while ``relay_schedule`` reuses one
reduced schedule per distinct subproblem and reduces after every step, giving
size at most m in polynomial time.  When the slowest bike is too slow, the
optimum instead dedicates solo riders to the slowest bikes (``solve_bs``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .model import (
    TIGHT_AVERAGE,
    TIGHT_SLOWEST,
    BoundCertificate,
    ProblemInstance,
    Schedule,
    ScheduleMatrix,
    average_bound,
    completion_profile,
)
from .normalize import reduce_schedule

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class NestedColumn:
    """One unexpanded interval: a group sub-schedule stacked on solo riders.

    ``tail`` gives the bike labels of the rows below the block; when ``block``
    is None the tail covers every row and the column is already flat.
    """

    tail: tuple[int, ...]
    block: Optional[Schedule] = None


@dataclass(frozen=True)
class UnexpandedSchedule:
    """Interval lengths for the relay before group blocks are spliced in.

    ``paces`` holds each agent's effective inverse speed per interval, with a
    whole synchronized group represented by its average pace.  ``sync`` lists,
    for every interval after the first, the (catcher, group) row pair that
    must reach the interval's end simultaneously; ``z`` is the resulting
    partition, unnormalized (z_1 = 1 except in pace-tie corner cases, where
    leading intervals collapse to zero).
    """

    z: tuple[Fraction, ...]
    paces: tuple[tuple[Fraction, ...], ...]
    sync: tuple[tuple[int, int], ...]

    def sync_gaps(self) -> tuple[Fraction, ...]:
        """Arrival-time differences at each sync point; all zero when valid."""
        gaps = []
        for c, (catcher, group) in enumerate(self.sync, start=1):
            gap = ZERO
            for p in range(c + 1):
                gap += (self.paces[catcher][p] - self.paces[group][p]) * self.z[p]
            gaps.append(gap)
        return tuple(gaps)


def solve_sync_partition(
    paces: Sequence[Sequence[Fraction]], sync: Sequence[tuple[int, int]]
) -> tuple[Fraction, ...]:
    """Interval lengths making each catcher meet its group on time.

    The catcher trails its group by a time gap accumulated over earlier
    intervals; the gap closes at a rate equal to the pace difference inside
    the interval, so the interval's length is gap / rate.  A zero rate with a
    zero gap leaves the length free (taken as 0); a zero rate with a positive
    gap means the catcher can never close it inside this interval, so all
    earlier intervals are collapsed to zero, which resets every gap.
    """
    n = len(paces[0])
    z: list[Fraction] = [ONE] + [ZERO] * (n - 1)
    for c in range(1, n):
        catcher, group = sync[c - 1]
        gap = ZERO
        for p in range(c):
            gap += (paces[catcher][p] - paces[group][p]) * z[p]
        rate = paces[group][c] - paces[catcher][c]
        if rate == 0:
            if gap == 0:
                z[c] = ZERO
            else:
                for p in range(c):
                    z[p] = ZERO
                z[c] = ONE
        else:
            z[c] = gap / rate
            if z[c] < 0:
                raise AssertionError(f"negative interval length {z[c]} at {c}")
    return tuple(z)


def _relay_paces(inst: ProblemInstance) -> UnexpandedSchedule:
    m, b = inst.agents, inst.bikes
    u = inst.inverse_speeds
    walkers = m - b
    paces = []
    for i in range(m):
        row = []
        for j in range(walkers):
            row.append(u[i - j] if j <= i <= j + b - 1 else ONE)
        for k in range(b):
            mk = walkers + k
            row.append(average_bound(inst.sub_instance(k)) if i < mk else u[k + i - mk])
        paces.append(tuple(row))
    sync = tuple((c, c - 1) for c in range(1, m))
    return UnexpandedSchedule(z=(), paces=tuple(paces), sync=sync)


def unexpanded_partition(inst: ProblemInstance) -> UnexpandedSchedule:
    """Unnormalized relay interval lengths for an instance with b >= 1 bikes."""
    _check_relay_precondition(inst)
    if inst.bikes == 0:
        raise ValueError("relay partition needs at least one bike")
    shape = _relay_paces(inst)
    z = solve_sync_partition(shape.paces, shape.sync)
    return UnexpandedSchedule(z=z, paces=shape.paces, sync=shape.sync)


def expand(columns: Sequence[NestedColumn]) -> ScheduleMatrix:
    """Flatten nested columns: a block of n' columns replaces its host column
    with n' columns, replicating the host's tail rows across all of them."""
    m = None
    out_cols: list[tuple[int, ...]] = []
    for col in columns:
        if col.block is None:
            width = len(col.tail)
            m = width if m is None else m
            if width != m:
                raise ValueError("inconsistent column heights")
            out_cols.append(col.tail)
        else:
            height = col.block.agents + len(col.tail)
            m = height if m is None else m
            if height != m:
                raise ValueError("inconsistent block + tail heights")
            for j in range(col.block.size):
                sub_col = col.block.matrix.column(j)
                out_cols.append(sub_col + col.tail)
    rows = tuple(tuple(c[i] for c in out_cols) for i in range(m))
    return ScheduleMatrix(rows)


def expand_with_partition(
    z: Sequence[Fraction], columns: Sequence[NestedColumn]
) -> Schedule:
    """Expand nested columns and splice each block's partition, scaled by its
    host interval length, into the host position."""
    if len(z) != len(columns):
        raise ValueError("one interval length per nested column required")
    xs: list[Fraction] = []
    for length, col in zip(z, columns):
        if col.block is None:
            xs.append(length)
        else:
            xs.extend(length * x for x in col.block.partition)
    return Schedule(tuple(xs), expand(columns))


def _check_relay_precondition(inst: ProblemInstance) -> None:
    if inst.bikes and inst.slowest > average_bound(inst):
        raise ValueError(
            f"slowest bike (u={inst.slowest}) is slower than the average bound "
            f"{average_bound(inst)}; no full-delivery relay exists"
        )


def _walk_schedule(agents: int) -> Schedule:
    return Schedule((ONE,), ScheduleMatrix(((0,),) * agents))


def _relay_columns(
    inst: ProblemInstance, blocks: Sequence[Optional[Schedule]]
) -> list[NestedColumn]:
    m, b = inst.agents, inst.bikes
    walkers = m - b
    cols = []
    for j in range(walkers):
        cols.append(
            NestedColumn(
                tail=tuple(
                    i - j + 1 if j <= i <= j + b - 1 else 0 for i in range(m)
                )
            )
        )
    for k in range(b):
        mk = walkers + k
        block = blocks[k]
        if (block is None) != (mk == 0):
            raise ValueError("need one group schedule per non-empty block")
        if block is not None and (block.agents != mk or block.length != 1):
            raise ValueError("group schedule has the wrong shape")
        tail = tuple(i - walkers + 1 for i in range(mk, m))
        cols.append(NestedColumn(tail=tail, block=block))
    return cols


def _build_relay(
    inst: ProblemInstance, group_solver: Callable[[ProblemInstance], Schedule]
) -> Schedule:
    b = inst.bikes
    blocks = [
        group_solver(inst.sub_instance(k)) if inst.sub_agents(k) > 0 else None
        for k in range(b)
    ]
    columns = _relay_columns(inst, blocks)
    unexp = unexpanded_partition(inst)
    total = sum(unexp.z, ZERO)
    assert total > 0
    z = tuple(v / total for v in unexp.z)
    return expand_with_partition(z, columns)


def relay_reference(inst: ProblemInstance) -> Schedule:
    """Fully expanded recursive relay; every agent finishes at the average
    bound and every bike reaches the end.

    For b >= 1 its size is 2^(b-1) * (m - b + 1): each of the b group blocks
    recursively contains all smaller blocks.  Intended for small bike counts
    and differential testing only; ``relay_schedule`` is the production path.
    The partition comes from the synchronization recursion; as a cross-check,
    the exact LP is solved once on the final matrix and must reproduce the
    same makespan.
    """
    sched = _relay_reference_impl(inst)
    if inst.bikes:
        from .lp import solve_partition  # local import: lp does not need bs

        _, tau = solve_partition(sched.matrix, inst)
        assert tau == average_bound(inst), "LP disagrees with the relay partition"
    return sched


def _relay_reference_impl(inst: ProblemInstance) -> Schedule:
    _check_relay_precondition(inst)
    if inst.bikes == 0:
        return _walk_schedule(inst.agents)
    return _build_relay(inst, _relay_reference_impl)


def relay_schedule(inst: ProblemInstance) -> Schedule:
    """Relay of size <= m built bottom-up, one reduced schedule per distinct
    subproblem.

    Every subproblem keeps the same walker surplus m - b, so the k-fastest-
    bikes subproblem on m - b + k agents is the only one ever needed at level
    k.  Each level splices the already-reduced smaller schedules into its own
    relay, then reduces; intermediate sizes stay below m * b.
    """
    _check_relay_precondition(inst)
    m, b = inst.agents, inst.bikes
    if b == 0:
        return _walk_schedule(m)
    for k in range(1, b + 1):
        # Absorbing bike k into the group must keep the relay precondition.
        assert inst.inverse_speeds[k - 1] <= average_bound(inst.sub_instance(k))
    table: list[Optional[Schedule]] = [None] * (b + 1)
    if m - b > 0:
        table[0] = _walk_schedule(m - b)
    for k in range(1, b + 1):
        sub = inst.sub_instance(k)
        raw = _build_relay(sub, lambda s, _t=table: _t[s.bikes])
        assert raw.size <= m * b, "intermediate relay grew beyond the m*b bound"
        table[k] = reduce_schedule(raw.matrix, sub, initial=raw.partition)
        assert (
            completion_profile(table[k], sub).makespan == average_bound(sub)
        ), "reduced group schedule lost its optimal pace"
    result = table[b]
    assert result is not None
    return result


def solo_split(inst: ProblemInstance) -> int:
    """Smallest number k of dedicated solo riders for the slowest k bikes such
    that the remaining agents can relay the remaining bikes at least as fast.

    Only meaningful when the slowest bike is the bottleneck (u_b above the
    average bound); the returned k in [1, b-1] satisfies
    u_{b-k} <= average bound of (m-k agents, fastest b-k bikes) <= u_b.
    """
    m, b = inst.agents, inst.bikes
    u = inst.inverse_speeds
    if b == 0 or inst.slowest <= average_bound(inst):
        raise ValueError("solo riders only help when the slowest bike lags")
    for k in range(1, b):
        rest = ProblemInstance(m - k, u[: b - k])
        if u[b - k - 1] <= average_bound(rest):
            assert average_bound(rest) <= inst.slowest
            return k
    raise ValueError("no valid solo split; instance violates the precondition")


def solve_bs(inst: ProblemInstance) -> tuple[Schedule, BoundCertificate]:
    """Optimal full-delivery schedule and its tight lower bound.

    The makespan is exactly max(u_b, average bound): the relay achieves the
    average bound when every bike keeps up, otherwise the k slowest bikes get
    solo riders (finishing at u_b) stacked under the relay of the rest.
    """
    t_avg = average_bound(inst)
    m, b = inst.agents, inst.bikes
    if b == 0 or inst.slowest <= t_avg:
        sched = relay_schedule(inst)
        cert = BoundCertificate(
            average=t_avg,
            slowest=inst.inverse_speeds[-1] if b else None,
            tight=TIGHT_AVERAGE,
        )
    else:
        k = solo_split(inst)
        shared = relay_schedule(ProblemInstance(m - k, inst.inverse_speeds[: b - k]))
        solo_rows = tuple(
            (b - k + i + 1,) * shared.size for i in range(k)
        )  # solo columns refined to the shared partition
        sched = Schedule(
            shared.partition, ScheduleMatrix(shared.matrix.rows + solo_rows)
        )
        cert = BoundCertificate(
            average=t_avg, slowest=inst.slowest, tight=TIGHT_SLOWEST
        )
    return sched, cert
