"""Core schedule model: problem instances, schedules, completion times,
feasibility checking, and the closed-form lower bounds on the makespan.

A problem is m agents (walking speed 1) and b <= m bikes with inverse speeds
0 < u_1 <= ... <= u_b < 1, all starting at 0 on the unit interval.  A schedule
is a partition of [0,1] into n sub-intervals plus an m x n matrix of bike
labels (0 = walk) saying who rides what in each sub-interval, optionally with
an m x n matrix of waiting times spent at the end of each sub-interval.

All arithmetic is exact rational arithmetic; every equality test below is
exact, with no tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .rational import RationalLike, to_fraction

ZERO = Fraction(0)
ONE = Fraction(1)

# Tags naming which lower bound a solver's makespan attains exactly.
TIGHT_AVERAGE = "average"
TIGHT_SLOWEST = "slowest-bike"
TIGHT_ONE_ABANDONED = "one-abandoned"
TIGHT_SECOND_SLOWEST = "second-slowest-bike"


def _as_fractions(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


@dataclass(frozen=True)
class ProblemInstance:
    """m agents plus a sorted multiset of inverse bike speeds.

    ``inverse_speeds`` holds u_k = 1/v_k for bike speeds v_k > 1, sorted
    ascending (fastest bike first).  ``abandonment_limit`` is the number of
    bikes that may be left behind (relaxed problem only; 0 means every bike
    must reach the end).
    """

    agents: int
    inverse_speeds: tuple[Fraction, ...]
    abandonment_limit: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.agents, int) or self.agents < 1:
            raise ValueError(f"need at least one agent, got {self.agents!r}")
        u = _as_fractions(self.inverse_speeds)
        object.__setattr__(self, "inverse_speeds", tuple(sorted(u)))
        if len(u) > self.agents:
            raise ValueError(
                f"{len(u)} bikes but only {self.agents} agents; bikes cannot "
                "outnumber agents"
            )
        for uk in self.inverse_speeds:
            if not ZERO < uk < ONE:
                raise ValueError(
                    f"inverse speed {uk} out of range; bikes must be strictly "
                    "faster than walking (0 < u < 1)"
                )
        if self.abandonment_limit < 0:
            raise ValueError("abandonment limit must be >= 0")

    @property
    def bikes(self) -> int:
        return len(self.inverse_speeds)

    @property
    def slowest(self) -> Fraction:
        if not self.inverse_speeds:
            raise ValueError("no bikes")
        return self.inverse_speeds[-1]

    def sub_agents(self, k: int) -> int:
        """Agent count of the k-fastest-bikes subproblem (walker count fixed)."""
        return self.agents - self.bikes + k

    def sub_speeds(self, k: int) -> tuple[Fraction, ...]:
        """The k fastest inverse speeds."""
        return self.inverse_speeds[:k]

    def sub_instance(self, k: int) -> "ProblemInstance":
        """Subproblem with the k fastest bikes and the same number of walkers."""
        if not 0 <= k <= self.bikes:
            raise ValueError(f"k={k} out of range [0, {self.bikes}]")
        return ProblemInstance(self.sub_agents(k), self.sub_speeds(k))

    def speed_of(self, label: int) -> Fraction:
        """Inverse speed of a bike label; label 0 means walking (speed 1)."""
        if label == 0:
            return ONE
        if not 1 <= label <= self.bikes:
            raise ValueError(f"bike label {label} out of range [0, {self.bikes}]")
        return self.inverse_speeds[label - 1]


@dataclass(frozen=True)
class ScheduleMatrix:
    """An m x n grid of bike labels in {0, 1, ..., b}; 0 means walking.

    Construction only checks shape and non-negative integer labels so that the
    feasibility checker can report structural violations.  A feasible matrix
    additionally has each bike ridden by at most one agent per column, and
    ridden in column j-1 whenever it is ridden in column j > 1.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or not rows[0]:
            raise ValueError("schedule matrix must have at least one row and column")
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged schedule matrix")
            for label in r:
                if not isinstance(label, int) or label < 0:
                    raise ValueError(f"bad bike label {label!r}")

    @property
    def agents(self) -> int:
        return len(self.rows)

    @property
    def size(self) -> int:
        """Number of columns."""
        return len(self.rows[0])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.size)]

    def max_label(self) -> int:
        return max(max(r) for r in self.rows)

    def bikes_in_final_column(self) -> frozenset[int]:
        return frozenset(label for label in self.column(self.size - 1) if label != 0)

    def induced_speeds(self, inst: ProblemInstance) -> tuple[tuple[Fraction, ...], ...]:
        """Replace labels by inverse speeds (0 -> 1)."""
        if self.max_label() > inst.bikes:
            raise ValueError(
                f"matrix uses bike label {self.max_label()} but instance has "
                f"{inst.bikes} bikes"
            )
        return tuple(tuple(inst.speed_of(c) for c in r) for r in self.rows)


@dataclass(frozen=True)
class Schedule:
    """A partition of the interval plus a schedule matrix, optionally with a
    waiting matrix giving idle time spent after each sub-interval."""

    partition: tuple[Fraction, ...]
    matrix: ScheduleMatrix
    waits: Optional[tuple[tuple[Fraction, ...], ...]] = None

    def __post_init__(self) -> None:
        part = _as_fractions(self.partition)
        object.__setattr__(self, "partition", part)
        if len(part) != self.matrix.size:
            raise ValueError(
                f"partition has {len(part)} entries but matrix has "
                f"{self.matrix.size} columns"
            )
        for x in part:
            if x < 0:
                raise ValueError(f"negative interval length {x}")
        if self.waits is not None:
            waits = tuple(_as_fractions(r) for r in self.waits)
            object.__setattr__(self, "waits", waits)
            if len(waits) != self.matrix.agents or any(
                len(r) != self.matrix.size for r in waits
            ):
                raise ValueError("waiting matrix shape does not match schedule")
            for r in waits:
                for w in r:
                    if w < 0:
                        raise ValueError(f"negative waiting time {w}")

    @property
    def agents(self) -> int:
        return self.matrix.agents

    @property
    def size(self) -> int:
        return self.matrix.size

    @property
    def length(self) -> Fraction:
        """Total length of the covered interval."""
        return sum(self.partition, ZERO)

    def wait(self, i: int, j: int) -> Fraction:
        return self.waits[i][j] if self.waits is not None else ZERO

    def without_waits(self) -> "Schedule":
        return Schedule(self.partition, self.matrix)


@dataclass(frozen=True)
class CompletionProfile:
    """All partial completion times t[i][j], final times and the makespan."""

    partial: tuple[tuple[Fraction, ...], ...]
    final: tuple[Fraction, ...]
    makespan: Fraction


@dataclass(frozen=True)
class Violation:
    """One broken feasibility condition, located at agent/column (1-based).

    ``condition`` is 1 (a bike appears without having been ridden in the
    previous column), 2 (two agents ride one bike in the same column), or
    3 (an agent picks up a bike before its previous rider has arrived).
    """

    condition: int
    agent: int
    column: int


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class BoundCertificate:
    """The lower bounds accompanying a solver answer, and which one is tight.

    ``average`` is the average-completion bound for full bike delivery,
    ``one_abandoned`` the relaxed bound when the slowest bike may be dropped
    (present only for relaxed solves), ``slowest`` the inverse speed of the
    slowest bike (None when there are no bikes).  ``tight`` names the bound
    the schedule's makespan equals exactly.
    """

    average: Fraction
    slowest: Optional[Fraction]
    tight: str
    one_abandoned: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.tight not in (
            TIGHT_AVERAGE,
            TIGHT_SLOWEST,
            TIGHT_ONE_ABANDONED,
            TIGHT_SECOND_SLOWEST,
        ):
            raise ValueError(f"unknown bound tag {self.tight!r}")


def completion_profile(s: Schedule, inst: ProblemInstance) -> CompletionProfile:
    """Exact partial and final completion times of every agent.

    Agent i's time to the end of sub-interval j is the running sum of
    (inverse speed) * (interval length) plus any waiting time, over
    sub-intervals 1..j.  The makespan is the latest final time.
    """
    if s.agents != inst.agents:
        raise ValueError(
            f"schedule has {s.agents} rows but instance has {inst.agents} agents"
        )
    speeds = s.matrix.induced_speeds(inst)
    partial = []
    for i in range(s.agents):
        t = ZERO
        row = []
        for j in range(s.size):
            t += speeds[i][j] * s.partition[j] + s.wait(i, j)
            row.append(t)
        partial.append(tuple(row))
    final = tuple(row[-1] for row in partial)
    return CompletionProfile(tuple(partial), final, max(final))


def check_feasible(s: Schedule, inst: ProblemInstance) -> FeasibilityReport:
    """Report every feasibility violation of a schedule (empty report = feasible).

    Checks, per column: (1) each ridden bike was ridden in the previous
    column, (2) no bike has two riders, (3) every pickup happens no earlier
    than the previous rider's arrival at the handover point.  Waiting times,
    if present, are included in the arrival times used for condition 3.
    """
    matrix = s.matrix
    if matrix.max_label() > inst.bikes:
        raise ValueError(
            f"matrix uses bike label {matrix.max_label()} but instance has "
            f"{inst.bikes} bikes"
        )
    profile = completion_profile(s, inst)
    violations: list[Violation] = []
    cols = matrix.columns()
    for j in range(matrix.size):
        seen: dict[int, int] = {}
        for i, label in enumerate(cols[j]):
            if label == 0:
                continue
            if label in seen:
                violations.append(Violation(2, i + 1, j + 1))
            else:
                seen[label] = i
            if j > 0:
                if label not in cols[j - 1]:
                    violations.append(Violation(1, i + 1, j + 1))
                else:
                    dropper = cols[j - 1].index(label)
                    if dropper != i and (
                        profile.partial[dropper][j - 1] > profile.partial[i][j - 1]
                    ):
                        violations.append(Violation(3, i + 1, j + 1))
    return FeasibilityReport(tuple(violations))


def scale(s: Schedule, factor: RationalLike) -> Schedule:
    """Scale a schedule to a shorter or longer interval.

    Multiplies every interval length (and waiting time, if any) by the
    factor; the matrix is unchanged.  Every completion time scales by exactly
    the same factor, so feasibility is preserved.
    """
    c = to_fraction(factor)
    if c <= 0:
        raise ValueError(f"scale factor must be positive, got {c}")
    waits = None
    if s.waits is not None:
        waits = tuple(tuple(w * c for w in r) for r in s.waits)
    return Schedule(tuple(x * c for x in s.partition), s.matrix, waits)


def abandonment_vector(s: Schedule, inst: ProblemInstance) -> tuple[Fraction, ...]:
    """Total distance each bike is ridden; an entry < 1 means the bike is
    abandoned at that position."""
    if s.matrix.max_label() > inst.bikes:
        raise ValueError("matrix labels exceed the instance's bike count")
    totals = [ZERO] * inst.bikes
    for j in range(s.size):
        for label in s.matrix.column(j):
            if label != 0:
                totals[label - 1] += s.partition[j]
    return tuple(totals)


def average_bound(
    inst: ProblemInstance, usage: Optional[Sequence[RationalLike]] = None
) -> Fraction:
    """Average-completion lower bound on the makespan.

    Summing every agent's travel time and dividing by m gives a bound the
    best schedule can at most match: 1 - (1/m) * sum_k (1 - u_k) * y_k, where
    y_k is the distance bike k is ridden.  With ``usage`` omitted every bike
    is assumed to ride the whole interval (the full-delivery bound).
    """
    if usage is None:
        y = (ONE,) * inst.bikes
    else:
        y = _as_fractions(usage)
        if len(y) != inst.bikes:
            raise ValueError(
                f"usage vector has {len(y)} entries for {inst.bikes} bikes"
            )
        for yk in y:
            if not ZERO <= yk <= ONE:
                raise ValueError(f"usage {yk} outside [0, 1]")
    saved = sum(((ONE - uk) * yk for uk, yk in zip(inst.inverse_speeds, y)), ZERO)
    return ONE - saved / inst.agents


def one_abandonment_bound(inst: ProblemInstance) -> tuple[Fraction, Fraction]:
    """Lower bound when one bike (the slowest) may be abandoned.

    Returns ``(bound, y_star)`` where y_star is the abandonment position that
    balances the two competing bounds: the average bound with the slowest
    bike ridden only up to y, which falls as y grows, and the abandoning
    agent's own time y*u_b + (1-y)*u_1, which rises.  If the slowest bike is
    not a bottleneck (u_b <= full-delivery bound) the full-delivery bound is
    returned with y_star = 1.
    """
    if inst.bikes == 0:
        raise ValueError("bound requires at least one bike")
    full = average_bound(inst)
    u = inst.inverse_speeds
    u1, ub = u[0], u[-1]
    if ub <= full:
        return full, ONE
    head = average_bound(
        ProblemInstance(inst.agents, u[:-1])
    )  # average bound ignoring the slowest bike entirely
    y_star = (head - u1) / (ub - u1 + (ONE - ub) / inst.agents)
    bound = u1 + y_star * (ub - u1)
    # The crossing is exact: both competing bounds agree there.
    assert bound == average_bound(inst, (ONE,) * (inst.bikes - 1) + (y_star,))
    assert ZERO < y_star < ONE
    return bound, y_star
