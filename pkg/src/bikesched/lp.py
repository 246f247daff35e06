"""Exact linear programming for the induced partition of a schedule matrix.

For a fixed matrix M the best partition solves a small LP: minimize the
makespan tau subject to tau >= t_i for every agent, a pickup-ordering row for
every bike handover, x_j >= 0 and sum x_j = 1.  The solver below is a dense
two-phase simplex over exact rationals with Bland's anti-cycling rule, so it
always terminates at an optimal *vertex* of the feasible region -- the schedule
reduction argument counts tight constraints at a vertex, so returning any old
optimal point would not do.

Large matrices are handled by constraint generation: pickup rows are added
lazily, only when the current solution violates them.  A solution of the
relaxation that satisfies every pickup row is optimal for the full LP, and a
vertex of the relaxation that lies in the full region is a vertex of the full
region, so the contract is unchanged.

gmpy2's rationals are used inside the tableau when available (identical
semantics to fractions.Fraction, roughly an order of magnitude faster).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import ProblemInstance, ScheduleMatrix

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _Q = Fraction

# Below this many pickup rows the LP is solved in one shot.
_LAZY_THRESHOLD = 40


@dataclass(frozen=True)
class PartitionLP:
    """The constraint system for one schedule matrix.

    Variables are the n interval lengths plus the makespan.  ``speed_rows``
    holds the induced inverse speeds (one row per agent); ``switches`` holds
    one ``(picker, dropper, column)`` triple per bike handover, all 0-based:
    the picker takes, at the start of ``column``, the bike the dropper rode in
    ``column - 1``, which requires the dropper to arrive there first.
    """

    n: int
    speed_rows: tuple[tuple[Fraction, ...], ...]
    switches: tuple[tuple[int, int, int], ...]

    @property
    def agents(self) -> int:
        return len(self.speed_rows)

    def switch_coeffs(self, r: int) -> tuple[Fraction, ...]:
        """Coefficients over x of pickup row r, as "picker time - dropper time"
        at the handover boundary (feasible when >= 0)."""
        picker, dropper, col = self.switches[r]
        return tuple(
            (self.speed_rows[picker][k] - self.speed_rows[dropper][k])
            if k < col
            else Fraction(0)
            for k in range(self.n)
        )


def build_lp(matrix: ScheduleMatrix, inst: ProblemInstance) -> PartitionLP:
    """Collect the LP constraint system for a matrix.

    Rejects matrices with a bike ridden twice in one column or appearing out
    of nowhere; those have no feasible partition at all.
    """
    cols = matrix.columns()
    for j, col in enumerate(cols):
        riders: dict[int, int] = {}
        for i, label in enumerate(col):
            if label == 0:
                continue
            if label in riders:
                raise ValueError(
                    f"bike {label} ridden by agents {riders[label] + 1} and "
                    f"{i + 1} in column {j + 1}"
                )
            riders[label] = i
            if j > 0 and label not in cols[j - 1]:
                raise ValueError(
                    f"bike {label} appears in column {j + 1} without being "
                    f"ridden in column {j}"
                )
    switches = []
    for j in range(1, matrix.size):
        for i, label in enumerate(cols[j]):
            if label != 0:
                dropper = cols[j - 1].index(label)
                if dropper != i:
                    switches.append((i, dropper, j))
    return PartitionLP(matrix.size, matrix.induced_speeds(inst), tuple(switches))


def solve_partition(
    matrix: ScheduleMatrix, inst: ProblemInstance
) -> tuple[tuple[Fraction, ...], Fraction]:
    """Optimal partition for a fixed matrix: ``(x, makespan)``, both exact.

    The returned x is an optimal basic feasible solution (a vertex).
    Deterministic: identical inputs give identical outputs.
    """
    return solve_lp(build_lp(matrix, inst))


def solve_lp(lp: PartitionLP) -> tuple[tuple[Fraction, ...], Fraction]:
    speed_q = [[_Q(c.numerator, c.denominator) for c in row] for row in lp.speed_rows]
    total = len(lp.switches)
    if total <= _LAZY_THRESHOLD:
        active = list(range(total))
        x, tau = _simplex(lp, speed_q, active)
    else:
        active = []
        while True:
            x, tau = _simplex(lp, speed_q, active)
            violated = _violated_switches(lp, speed_q, active, x)
            if not violated:
                break
            active.extend(violated)
    frac = [Fraction(int(v.numerator), int(v.denominator)) for v in x]
    return tuple(frac[: lp.n]), Fraction(int(tau.numerator), int(tau.denominator))


def _violated_switches(lp, speed_q, active, x):
    active_set = set(active)
    out = []
    for r, (picker, dropper, col) in enumerate(lp.switches):
        if r in active_set:
            continue
        gap = _Q(0)
        for k in range(col):
            gap += (speed_q[picker][k] - speed_q[dropper][k]) * x[k]
        if gap < 0:
            out.append(r)
    return out


def _simplex(lp, speed_q, active):
    """Two-phase simplex on: min tau, tau >= t_i, picker >= dropper rows in
    ``active``, sum x = 1, x >= 0.  Returns Q-valued (x..tau vector, tau)."""
    zero, one = _Q(0), _Q(1)
    n, m = lp.n, lp.agents
    n_ineq = m + len(active)
    n_rows = n_ineq + 1
    tau_col = n
    n_struct = n + 1  # x variables plus tau
    art_col = n_struct + n_ineq
    n_cols = art_col + 1

    rows: list[list] = []
    # tau >= t_i  ->  t_i - tau + slack = 0
    for i in range(m):
        row = [zero] * (n_cols + 1)
        for j in range(n):
            row[j] = speed_q[i][j]
        row[tau_col] = -one
        row[n_struct + i] = one
        rows.append(row)
    # picker arrives on time: dropper time - picker time + slack = 0
    for idx, r in enumerate(active):
        picker, dropper, col = lp.switches[r]
        row = [zero] * (n_cols + 1)
        for k in range(col):
            row[k] = speed_q[dropper][k] - speed_q[picker][k]
        row[n_struct + m + idx] = one
        rows.append(row)
    # sum x = 1 with one artificial
    row = [zero] * (n_cols + 1)
    for j in range(n):
        row[j] = one
    row[art_col] = one
    row[-1] = one
    rows.append(row)

    basis = list(range(n_struct, n_struct + n_ineq)) + [art_col]

    # Phase 1: drive the artificial to zero.
    cost = [zero] * n_cols
    cost[art_col] = one
    value = _pivot_until_optimal(rows, basis, cost, n_cols, banned=())
    assert value == 0, "partition LP must always be feasible"
    if art_col in basis:
        _pivot_out(rows, basis, art_col, n_struct + n_ineq)

    # Phase 2: minimize tau, never re-entering the artificial.
    cost = [zero] * n_cols
    cost[tau_col] = one
    _pivot_until_optimal(rows, basis, cost, n_cols, banned=(art_col,))

    solution = [zero] * n_cols
    for r, b in enumerate(basis):
        solution[b] = rows[r][-1]
    return solution, solution[tau_col]


def _pivot_until_optimal(rows, basis, cost, n_cols, banned):
    zero = _Q(0)
    # Reduced costs: z_j = c_j - sum over basic rows of c_basic * row_j.
    z = list(cost)
    value = zero
    for r, b in enumerate(basis):
        cb = cost[b]
        if cb != 0:
            row = rows[r]
            for j in range(n_cols):
                if row[j] != 0:
                    z[j] -= cb * row[j]
            value += cb * row[-1]
    # Dantzig's rule stalls less than Bland's on these highly degenerate
    # tableaus, but does not exclude cycling; after a long degenerate streak
    # we fall back to Bland's rule, which provably terminates.
    degenerate_streak = 0
    bland_after = 8 * (len(rows) + n_cols)
    while True:
        enter = -1
        if degenerate_streak < bland_after:
            most = zero
            for j in range(n_cols):
                if z[j] < most and j not in banned:
                    most = z[j]
                    enter = j
        else:
            for j in range(n_cols):  # Bland: lowest eligible index
                if z[j] < 0 and j not in banned:
                    enter = j
                    break
        if enter < 0:
            return value
        leave = -1
        best = None
        for r, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best = ratio
                    leave = r
        assert leave >= 0, "partition LP is never unbounded"
        degenerate_streak = 0 if best > 0 else degenerate_streak + 1
        _pivot(rows, basis, leave, enter)
        ze = z[enter]
        piv_row = rows[leave]
        for j in range(n_cols):
            if piv_row[j] != 0:
                z[j] -= ze * piv_row[j]
        value += ze * piv_row[-1]


def _pivot(rows, basis, leave, enter):
    piv_row = rows[leave]
    p = piv_row[enter]
    if p != 1:
        inv = 1 / p
        rows[leave] = piv_row = [a * inv for a in piv_row]
    for r, row in enumerate(rows):
        if r == leave:
            continue
        f = row[enter]
        if f != 0:
            rows[r] = [a - f * b for a, b in zip(row, piv_row)]
    basis[leave] = enter


def _pivot_out(rows, basis, col, width):
    """Remove a zero-valued basic artificial after phase 1."""
    r = basis.index(col)
    for j in range(width):
        if rows[r][j] != 0:
            _pivot(rows, basis, r, j)
            return
    del rows[r]  # all-zero row: the equality was redundant
    del basis[r]


def vertex_from_point(
    lp: PartitionLP, x: tuple[Fraction, ...], tau: Fraction
) -> tuple[tuple[Fraction, ...], Fraction]:
    """Slide a feasible point to a vertex without increasing the makespan.

    While fewer than n + 1 independent constraints are tight, there is a
    direction that keeps every tight constraint tight; following it (oriented
    so the makespan cannot grow) must eventually hit a slack constraint,
    because the partition simplex is bounded and the makespan is bounded
    below by the agents' times.  Each hit adds an independent tight row, so
    at most n + 1 exact ratio steps reach a vertex; no pivoting, no stalling.

    Used by the schedule reducer when the caller already knows an optimal
    partition: the size argument only needs vertex-ness, not re-optimization.
    """
    n = lp.n
    width = n + 1
    zero, one = _Q(0), _Q(1)
    v = [_Q(c.numerator, c.denominator) for c in x]
    v.append(_Q(tau.numerator, tau.denominator))

    # Constraint rows a with a . v >= 0 (the simplex equality is handled as a
    # permanently tight row); x_j >= 0 is handled implicitly as coordinates.
    speed_q = [[_Q(c.numerator, c.denominator) for c in row] for row in lp.speed_rows]
    rows: list[list] = []
    for i in range(lp.agents):
        rows.append([-c for c in speed_q[i]] + [one])
    for picker, dropper, col in lp.switches:
        row = [
            (speed_q[picker][k] - speed_q[dropper][k]) if k < col else zero
            for k in range(n)
        ]
        row.append(zero)
        rows.append(row)

    # Fully reduced echelon of the tight rows: pivot column -> row with a
    # leading 1 there and zeros in every other pivot column.
    echelon: dict[int, list] = {}

    def absorb(row):
        row = list(row)
        for col, piv in echelon.items():
            f = row[col]
            if f != 0:
                row = [a - f * b for a, b in zip(row, piv)]
        lead = next((c for c in range(width) if row[c] != 0), None)
        if lead is None:
            return
        inv = one / row[lead]
        row = [a * inv for a in row]
        for col, piv in echelon.items():
            f = piv[lead]
            if f != 0:
                echelon[col] = [a - f * b for a, b in zip(piv, row)]
        echelon[lead] = row

    def unit_row(j):
        row = [zero] * width
        row[j] = one
        return row

    absorb([one] * n + [zero])  # sum x = 1
    values = [sum((a * b for a, b in zip(row, v)), zero) for row in rows]
    for r, val in enumerate(values):
        if val == 0:
            absorb(rows[r])
    for j in range(n):
        if v[j] == 0:
            absorb(unit_row(j))

    while len(echelon) < width:
        free = next(c for c in range(width) if c not in echelon)
        d = [zero] * width
        d[free] = one
        for col, piv in echelon.items():
            d[col] = -piv[free]
        if d[n] > 0:
            d = [-a for a in d]
        slopes = [zero] * len(rows)
        for _attempt in (0, 1):
            step = None
            hit_rows: list[int] = []
            hit_units: list[int] = []
            for r, row in enumerate(rows):
                slope = zero
                for a, b in zip(row, d):
                    if a != 0 and b != 0:
                        slope += a * b
                slopes[r] = slope
                if slope < 0 and values[r] > 0:
                    ratio = values[r] / -slope
                    if step is None or ratio < step:
                        step, hit_rows, hit_units = ratio, [r], []
                    elif ratio == step:
                        hit_rows.append(r)
            for j in range(n):
                if d[j] < 0 and v[j] > 0:
                    ratio = v[j] / -d[j]
                    if step is None or ratio < step:
                        step, hit_rows, hit_units = ratio, [], [j]
                    elif ratio == step:
                        hit_units.append(j)
            if step is not None:
                break
            d = [-a for a in d]  # flip once: some side always blocks
        assert step is not None and step > 0
        v = [a + step * b for a, b in zip(v, d)]
        values = [val + step * sl for val, sl in zip(values, slopes)]
        for r in hit_rows:
            absorb(rows[r])
        for j in hit_units:
            absorb(unit_row(j))

    frac = [Fraction(int(a.numerator), int(a.denominator)) for a in v]
    return tuple(frac[:n]), frac[n]


def tight_constraint_rank(
    lp: PartitionLP, x: tuple[Fraction, ...], tau: Fraction
) -> int:
    """Rank of the constraints satisfied with equality at ``(x, tau)``.

    The solution is a basic feasible solution (vertex) exactly when this rank
    equals the variable count n + 1.
    """
    n = lp.n
    tight: list[list[Fraction]] = [[Fraction(1)] * n + [Fraction(0)]]  # sum x = 1
    for j in range(n):
        if x[j] == 0:
            row = [Fraction(0)] * (n + 1)
            row[j] = Fraction(1)
            tight.append(row)
    for i in range(lp.agents):
        t_i = sum((lp.speed_rows[i][j] * x[j] for j in range(n)), Fraction(0))
        if t_i == tau:
            tight.append([-c for c in lp.speed_rows[i]] + [Fraction(1)])
    for r in range(len(lp.switches)):
        coeffs = lp.switch_coeffs(r)
        if sum((c * xj for c, xj in zip(coeffs, x)), Fraction(0)) == 0:
            tight.append(list(coeffs) + [Fraction(0)])
    return _rank(tight)


def is_vertex(lp: PartitionLP, x: tuple[Fraction, ...], tau: Fraction) -> bool:
    return tight_constraint_rank(lp, x, tau) == lp.n + 1


def satisfies_all_constraints(
    lp: PartitionLP, x: tuple[Fraction, ...], tau: Fraction
) -> bool:
    """Exact feasibility of ``(x, tau)`` for the full constraint system."""
    if len(x) != lp.n or any(xj < 0 for xj in x):
        return False
    if sum(x, Fraction(0)) != 1:
        return False
    for row in lp.speed_rows:
        if sum((c * xj for c, xj in zip(row, x)), Fraction(0)) > tau:
            return False
    for r in range(len(lp.switches)):
        coeffs = lp.switch_coeffs(r)
        if sum((c * xj for c, xj in zip(coeffs, x)), Fraction(0)) < 0:
            return False
    return True


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [row[:] for row in rows]
    n_cols = len(rows[0]) if rows else 0
    rank = 0
    col = 0
    while col < n_cols and rank < len(rows):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                f = rows[r][col] / lead
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank
