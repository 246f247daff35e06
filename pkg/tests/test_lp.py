from fractions import Fraction as F

import pytest

from bikesched import (
    ProblemInstance,
    Schedule,
    ScheduleMatrix,
    build_lp,
    completion_profile,
    is_vertex,
    solve_partition,
    tight_constraint_rank,
)
from bikesched.lp import satisfies_all_constraints
from conftest import random_full_matrix, random_instance

TWO_ONE = ProblemInstance(2, (F(1, 2),))
RELAY_M = ScheduleMatrix(((1, 0), (0, 1)))


class TestBuildLp:
    def test_relay_structure(self):
        lp = build_lp(RELAY_M, TWO_ONE)
        assert lp.n == 2
        assert lp.agents == 2
        # One handover: agent 2 takes over at column 2 from agent 1.
        assert lp.switches == ((1, 0, 1),)
        assert lp.speed_rows == ((F(1, 2), F(1)), (F(1), F(1, 2)))
        assert lp.switch_coeffs(0) == (F(1, 2), F(0))

    def test_walk_only(self):
        lp = build_lp(ScheduleMatrix(((0,), (0,))), TWO_ONE)
        assert lp.switches == ()

    def test_solo_riders_no_switches(self):
        inst = ProblemInstance(2, (F(1, 3), F(1, 2)))
        lp = build_lp(ScheduleMatrix(((1,), (2,))), inst)
        assert lp.switches == ()

    def test_rejects_double_rider(self):
        with pytest.raises(ValueError):
            build_lp(ScheduleMatrix(((1,), (1,))), TWO_ONE)

    def test_rejects_teleporting_bike(self):
        with pytest.raises(ValueError):
            build_lp(ScheduleMatrix(((0, 1), (0, 0))), TWO_ONE)


class TestSolvePartition:
    def test_two_agent_relay(self):
        x, tau = solve_partition(RELAY_M, TWO_ONE)
        assert x == (F(1, 2), F(1, 2))
        assert tau == F(3, 4)

    def test_single_rider(self):
        inst = ProblemInstance(1, (F(1, 2),))
        x, tau = solve_partition(ScheduleMatrix(((1,),)), inst)
        assert x == (F(1),) and tau == F(1, 2)

    def test_walk_only_unit_time(self):
        x, tau = solve_partition(ScheduleMatrix(((0,), (0,))), TWO_ONE)
        assert tau == F(1)

    def test_three_agent_reduced_relay(self):
        # Reduced three-column relay for two half-speed bikes; the optimum
        # splits the interval evenly and ties everyone at 2/3.
        inst = ProblemInstance(3, (F(1, 2), F(1, 2)))
        matrix = ScheduleMatrix(((1, 1, 0), (2, 0, 1), (0, 2, 2)))
        x, tau = solve_partition(matrix, inst)
        assert tau == F(2, 3)
        assert x == (F(1, 3), F(1, 3), F(1, 3))

    def test_forced_zero_column(self):
        # Crossing bikes of different speeds: the slow-to-fast handover is
        # only legal if the first interval has zero length.
        inst = ProblemInstance(2, (F(1, 4), F(1, 2)))
        matrix = ScheduleMatrix(((1, 2), (2, 1)))
        x, tau = solve_partition(matrix, inst)
        assert x[0] == F(0)
        assert tau == F(1, 2)

    def test_deterministic(self, rng):
        for _ in range(10):
            inst = random_instance(rng, max_agents=5)
            matrix = random_full_matrix(rng, inst, rng.randint(1, 5))
            assert solve_partition(matrix, inst) == solve_partition(matrix, inst)

    def test_profile_consistency(self, rng):
        for _ in range(10):
            inst = random_instance(rng, max_agents=5)
            matrix = random_full_matrix(rng, inst, rng.randint(1, 5))
            x, tau = solve_partition(matrix, inst)
            assert completion_profile(Schedule(x, matrix), inst).makespan == tau

    def test_optimal_among_feasible(self, rng):
        # Mixing the optimum with any other feasible point stays feasible and
        # can only be worse.
        for _ in range(10):
            inst = random_instance(rng, max_agents=5)
            matrix = random_full_matrix(rng, inst, rng.randint(2, 5))
            lp = build_lp(matrix, inst)
            x, tau = solve_partition(matrix, inst)
            other = tuple(
                (xj + (F(1) if j == lp.n - 1 else F(0))) / 2
                for j, xj in enumerate(x)
            )
            sched = Schedule(other, matrix)
            other_tau = completion_profile(sched, inst).makespan
            assert satisfies_all_constraints(lp, other, other_tau)
            assert tau <= other_tau


class TestVertexContract:
    def test_examples_are_vertices(self):
        lp = build_lp(RELAY_M, TWO_ONE)
        x, tau = solve_partition(RELAY_M, TWO_ONE)
        assert satisfies_all_constraints(lp, x, tau)
        assert is_vertex(lp, x, tau)
        assert tight_constraint_rank(lp, x, tau) == lp.n + 1

    def test_interior_point_is_not_a_vertex(self):
        inst = ProblemInstance(3, (F(1, 2), F(1, 2)))
        matrix = ScheduleMatrix(((1, 1, 0), (2, 0, 1), (0, 2, 2)))
        lp = build_lp(matrix, inst)
        # Feasible but suboptimal and constraint-slack point.
        x = (F(1, 2), F(1, 4), F(1, 4))
        tau = completion_profile(Schedule(x, matrix), inst).makespan + F(1, 7)
        assert tight_constraint_rank(lp, x, tau) < lp.n + 1

    def test_random_solutions_are_vertices(self, rng):
        for _ in range(15):
            inst = random_instance(rng, max_agents=5)
            matrix = random_full_matrix(rng, inst, rng.randint(1, 5))
            lp = build_lp(matrix, inst)
            x, tau = solve_partition(matrix, inst)
            assert satisfies_all_constraints(lp, x, tau)
            assert is_vertex(lp, x, tau)

    def test_vertex_from_point(self, rng):
        from bikesched.lp import vertex_from_point

        for _ in range(15):
            inst = random_instance(rng, max_agents=5)
            matrix = random_full_matrix(rng, inst, rng.randint(2, 5))
            lp = build_lp(matrix, inst)
            x, tau = solve_partition(matrix, inst)
            # Blend with the always-feasible final-column point: an interior-
            # ish feasible start whose makespan the slide may not increase.
            start = tuple(
                (xj + (F(1) if j == lp.n - 1 else F(0))) / 2
                for j, xj in enumerate(x)
            )
            start_tau = completion_profile(Schedule(start, matrix), inst).makespan
            vx, vtau = vertex_from_point(lp, start, start_tau)
            assert vtau <= start_tau
            assert satisfies_all_constraints(lp, vx, vtau)
            assert is_vertex(lp, vx, vtau)

    def test_lazy_path_matches_eager(self, rng):
        import bikesched.lp as lp_mod

        inst = ProblemInstance(6, tuple(F(k, k + 1) for k in range(1, 6)))
        matrix = random_full_matrix(rng, inst, 6)
        eager = solve_partition(matrix, inst)
        old = lp_mod._LAZY_THRESHOLD
        lp_mod._LAZY_THRESHOLD = 0
        try:
            lazy = solve_partition(matrix, inst)
        finally:
            lp_mod._LAZY_THRESHOLD = old
        assert eager[1] == lazy[1]
        lp = build_lp(matrix, inst)
        assert satisfies_all_constraints(lp, lazy[0], lazy[1])
        assert is_vertex(lp, lazy[0], lazy[1])
