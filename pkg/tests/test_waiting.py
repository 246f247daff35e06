from fractions import Fraction as F

import pytest

from bikesched import (
    ProblemInstance,
    Schedule,
    ScheduleMatrix,
    check_feasible,
    completion_profile,
    remove_all_waits,
    remove_one_wait,
    solve_bs,
    switch_matrix,
)
from conftest import random_instance

TWO_ONE = ProblemInstance(2, (F(1, 2),))
RELAY_M = ScheduleMatrix(((1, 0), (0, 1)))
HALF = (F(1, 2), F(1, 2))


def with_wait(agent, column, value, matrix=RELAY_M, partition=HALF):
    waits = [[F(0)] * matrix.size for _ in range(matrix.agents)]
    waits[agent][column] = value
    return Schedule(partition, matrix, tuple(tuple(r) for r in waits))


class TestSwitchMatrix:
    def test_relay(self):
        assert switch_matrix(RELAY_M) == ((0, 0), (0, 1))

    def test_all_walk(self):
        assert switch_matrix(ScheduleMatrix(((0, 0), (0, 0)))) == ((0, 0), (0, 0))

    def test_solo_single_column(self):
        assert switch_matrix(ScheduleMatrix(((1,), (2,)))) == ((0,), (0,))

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            switch_matrix(ScheduleMatrix(((1,), (1,))))


class TestRemoveOneWait:
    def test_wait_with_no_later_pickup_fully_removed(self):
        sched = with_wait(0, 0, F(1, 10))
        assert completion_profile(sched, TWO_ONE).makespan == F(17, 20)
        out = remove_one_wait(sched, TWO_ONE, 0, 0)
        assert out.waits == ((F(0), F(0)), (F(0), F(0)))
        assert completion_profile(out, TWO_ONE).makespan == F(3, 4)

    def test_wait_at_own_pickup_column_fully_removed(self):
        # The wait sits on the very column where agent 2 picked up; that
        # handover compared arrival times from before the wait, so the whole
        # 1/10 goes in one step.
        sched = with_wait(1, 1, F(1, 10))
        out = remove_one_wait(sched, TWO_ONE, 1, 1)
        assert out.waits[1][1] == F(0)

    def test_zero_target_rejected(self):
        sched = with_wait(0, 0, F(1, 10))
        with pytest.raises(ValueError):
            remove_one_wait(sched, TWO_ONE, 1, 1)

    def test_requires_standard_form(self):
        # Equal-speed crossing at the midpoint is a swap-switch; the wait
        # sits after the handover so the arrival times stay equal.
        inst = ProblemInstance(2, (F(1, 2), F(1, 2)))
        waits = ((F(0), F(1, 10)), (F(0), F(0)))
        sched = Schedule(HALF, ScheduleMatrix(((1, 2), (2, 1))), waits)
        assert check_feasible(sched, inst).ok
        with pytest.raises(ValueError):
            remove_one_wait(sched, inst, 0, 1)

    def test_partial_removal_when_slack_is_tight(self):
        # Agent 1 on the fast bike would reach the handover before agent 2
        # has brought the slow bike there; a wait of 1/4 makes the schedule
        # feasible, and only the 1/10 slack of that pickup can go at once.
        inst = ProblemInstance(3, (F(1, 5), F(1, 2)))
        matrix = ScheduleMatrix(((1, 2), (2, 0), (0, 1)))
        sched = with_wait(0, 0, F(1, 4), matrix=matrix)
        assert check_feasible(sched, inst).ok
        out = remove_one_wait(sched, inst, 0, 0)
        assert out.waits[0][0] == F(1, 4) - F(1, 10)

    def test_only_target_rows_drop(self):
        sched = with_wait(0, 0, F(1, 10))
        before = completion_profile(sched, TWO_ONE)
        out = remove_one_wait(sched, TWO_ONE, 0, 0)
        after = completion_profile(out, TWO_ONE)
        assert after.partial[1] == before.partial[1]
        assert all(
            b - a == F(1, 10) for a, b in zip(after.partial[0], before.partial[0])
        )


class TestRemoveAllWaits:
    def test_identity_without_waits(self):
        sched = Schedule(HALF, RELAY_M)
        assert remove_all_waits(sched, TWO_ONE) is sched

    def test_single_wait(self):
        out = remove_all_waits(with_wait(0, 0, F(1, 10)), TWO_ONE)
        assert out.waits is None
        assert completion_profile(out, TWO_ONE).makespan == F(3, 4)

    def test_submaximal_speed_modelled_as_wait(self):
        # Agent 2 walking at half pace over the first half-interval is the
        # same as walking full speed plus a quarter-unit wait; removing it
        # strictly improves the makespan.
        sched = with_wait(1, 0, F(1, 4))
        assert completion_profile(sched, TWO_ONE).makespan == F(1)
        out = remove_all_waits(sched, TWO_ONE)
        assert completion_profile(out, TWO_ONE).makespan == F(3, 4)

    def test_wait_dependent_handover_needs_two_rounds(self):
        # The partial-removal case: once the slack is spent the handover
        # happens at equal times, standardization swaps it away, and the
        # remaining wait then vanishes.
        inst = ProblemInstance(3, (F(1, 5), F(1, 2)))
        matrix = ScheduleMatrix(((1, 2), (2, 0), (0, 1)))
        sched = with_wait(0, 0, F(1, 4), matrix=matrix)
        before = completion_profile(sched, inst)
        out = remove_all_waits(sched, inst)
        after = completion_profile(out, inst)
        assert out.waits is None
        assert after.makespan <= before.makespan
        assert sum(after.final) == sum(before.final) - F(1, 4)

    def test_random_injections(self, rng):
        done = 0
        while done < 15:
            inst = random_instance(rng, max_agents=6)
            sched, _ = solve_bs(inst)
            waits = [[F(0)] * sched.size for _ in range(sched.agents)]
            injected = F(0)
            for _ in range(rng.randint(1, 3)):
                i = rng.randrange(sched.agents)
                j = rng.randrange(sched.size)
                w = F(rng.randint(1, 5), rng.randint(6, 30))
                waits[i][j] += w
                candidate = Schedule(
                    sched.partition, sched.matrix, tuple(tuple(r) for r in waits)
                )
                if check_feasible(candidate, inst).ok:
                    injected += w
                else:
                    waits[i][j] -= w
            if injected == 0:
                continue
            done += 1
            noisy = Schedule(
                sched.partition, sched.matrix, tuple(tuple(r) for r in waits)
            )
            before = completion_profile(noisy, inst)
            out = remove_all_waits(noisy, inst)
            after = completion_profile(out, inst)
            assert out.waits is None
            assert after.makespan <= before.makespan
            assert sum(after.final) == sum(before.final) - injected
            assert check_feasible(out, inst).ok
