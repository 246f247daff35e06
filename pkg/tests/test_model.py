from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bikesched import (
    ProblemInstance,
    Schedule,
    ScheduleMatrix,
    abandonment_vector,
    average_bound,
    check_feasible,
    completion_profile,
    one_abandonment_bound,
    scale,
)
from conftest import random_feasible_schedule, random_instance

TWO_ONE = ProblemInstance(2, (F(1, 2),))
RELAY_2 = Schedule((F(1, 2), F(1, 2)), ScheduleMatrix(((1, 0), (0, 1))))


def instances(max_agents=6):
    def build(m, fracs):
        b = min(len(fracs), m)
        return ProblemInstance(m, tuple(sorted(fracs[:b])))

    return st.builds(
        build,
        st.integers(1, max_agents),
        st.lists(
            st.fractions(
                min_value=F(1, 24), max_value=F(23, 24), max_denominator=24
            ),
            max_size=max_agents,
        ),
    )


class TestConstruction:
    def test_instance_sorts_speeds(self):
        inst = ProblemInstance(3, (F(4, 5), F(1, 2)))
        assert inst.inverse_speeds == (F(1, 2), F(4, 5))

    def test_more_bikes_than_agents_rejected(self):
        with pytest.raises(ValueError):
            ProblemInstance(1, (F(1, 2), F(1, 3)))

    @pytest.mark.parametrize("u", [F(1), F(3, 2), F(0), F(-1, 2)])
    def test_bad_speed_rejected(self, u):
        with pytest.raises(ValueError):
            ProblemInstance(2, (u,))

    def test_sub_instance(self):
        inst = ProblemInstance(5, (F(1, 3), F(1, 2), F(2, 3)))
        sub = inst.sub_instance(2)
        assert sub.agents == 4 and sub.inverse_speeds == (F(1, 3), F(1, 2))

    def test_partition_matrix_shape_mismatch(self):
        with pytest.raises(ValueError):
            Schedule((F(1),), ScheduleMatrix(((1, 0), (0, 1))))

    def test_negative_interval_rejected(self):
        with pytest.raises(ValueError):
            Schedule((F(3, 2), F(-1, 2)), ScheduleMatrix(((0, 0),)))


class TestCompletionProfile:
    def test_two_agents_one_bike(self):
        prof = completion_profile(RELAY_2, TWO_ONE)
        assert prof.final == (F(3, 4), F(3, 4))
        assert prof.makespan == F(3, 4)
        assert prof.partial == ((F(1, 4), F(3, 4)), (F(1, 2), F(3, 4)))

    def test_all_walk(self):
        inst = ProblemInstance(4, ())
        sched = Schedule((F(1),), ScheduleMatrix(((0,),) * 4))
        assert completion_profile(sched, inst).final == (F(1),) * 4

    def test_wait_shifts_partials(self):
        sched = Schedule(
            RELAY_2.partition,
            RELAY_2.matrix,
            ((F(1, 10), F(0)), (F(0), F(0))),
        )
        prof = completion_profile(sched, TWO_ONE)
        assert prof.final == (F(17, 20), F(3, 4))
        assert prof.makespan == F(17, 20)

    def test_zero_wait_matrix_matches_bare(self):
        zeros = ((F(0), F(0)), (F(0), F(0)))
        with_d = completion_profile(Schedule(RELAY_2.partition, RELAY_2.matrix, zeros), TWO_ONE)
        bare = completion_profile(RELAY_2, TWO_ONE)
        assert with_d == bare

    def test_label_out_of_range(self):
        sched = Schedule((F(1),), ScheduleMatrix(((2,), (0,))))
        with pytest.raises(ValueError):
            completion_profile(sched, TWO_ONE)


class TestFeasibility:
    def test_relay_feasible(self):
        assert check_feasible(RELAY_2, TWO_ONE).ok

    def test_bike_from_nowhere(self):
        sched = Schedule(
            (F(1, 2), F(1, 2)), ScheduleMatrix(((0, 1), (0, 0)))
        )
        report = check_feasible(sched, TWO_ONE)
        assert [(v.condition, v.agent, v.column) for v in report.violations] == [(1, 1, 2)]

    def test_double_rider(self):
        sched = Schedule((F(1),), ScheduleMatrix(((1,), (1,))))
        report = check_feasible(sched, TWO_ONE)
        assert [(v.condition, v.agent, v.column) for v in report.violations] == [(2, 2, 1)]

    def test_late_dropper_with_wait(self):
        # Agent 2 rides column 1 then waits; agent 1 picks up too early.
        sched = Schedule(
            (F(1, 2), F(1, 2)),
            ScheduleMatrix(((0, 1), (1, 0))),
            ((F(0), F(0)), (F(1, 2), F(0))),
        )
        report = check_feasible(sched, TWO_ONE)
        assert [(v.condition, v.agent, v.column) for v in report.violations] == [(3, 1, 2)]

    def test_equal_time_pickup_is_feasible(self):
        inst = ProblemInstance(2, (F(1, 2), F(1, 2)))
        sched = Schedule((F(1, 2), F(1, 2)), ScheduleMatrix(((1, 2), (2, 1))))
        assert check_feasible(sched, inst).ok


class TestScale:
    def test_doubling(self):
        doubled = scale(RELAY_2, 2)
        assert doubled.partition == (F(1), F(1))
        prof = completion_profile(doubled, TWO_ONE)
        assert prof.makespan == F(3, 2)

    def test_three_halves(self):
        inst = ProblemInstance(2, ())
        sched = Schedule((F(1, 3), F(0), F(2, 3)), ScheduleMatrix(((0, 0, 0),) * 2))
        assert scale(sched, F(3, 2)).partition == (F(1, 2), F(0), F(1))

    def test_normalizes_relay_intervals(self):
        sched = Schedule((F(1), F(0), F(2)), ScheduleMatrix(((0, 0, 0),) * 2))
        assert scale(sched, F(1, 3)).partition == (F(1, 3), F(0), F(2, 3))

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            scale(RELAY_2, 0)

    def test_profile_scales_exactly(self, rng):
        for _ in range(10):
            inst = random_instance(rng, max_agents=5)
            sched = random_feasible_schedule(rng, inst)
            c = F(rng.randint(1, 9), rng.randint(1, 9))
            before = completion_profile(sched, inst)
            after = completion_profile(scale(sched, c), inst)
            assert after.final == tuple(t * c for t in before.final)
            assert check_feasible(scale(sched, c), inst).ok


class TestAbandonment:
    def test_full_delivery(self):
        assert abandonment_vector(RELAY_2, TWO_ONE) == (F(1),)

    def test_drop_fast_bike_strategy(self):
        # Two agents, speeds 3 and 2: ride together to 4/5, abandon the slow
        # bike there, relay the fast one; both finish at 7/15.
        inst = ProblemInstance(2, (F(1, 3), F(1, 2)))
        sched = Schedule((F(4, 5), F(1, 5)), ScheduleMatrix(((1, 0), (2, 1))))
        assert check_feasible(sched, inst).ok
        assert abandonment_vector(sched, inst) == (F(1), F(4, 5))
        assert completion_profile(sched, inst).final == (F(7, 15),) * 2

    def test_partial_use(self):
        inst = ProblemInstance(2, (F(1, 2),))
        sched = Schedule((F(1, 4), F(3, 4)), ScheduleMatrix(((1, 0), (0, 0))))
        assert abandonment_vector(sched, inst) == (F(1, 4),)


class TestBounds:
    @pytest.mark.parametrize(
        "m, us, expected",
        [
            (2, (F(1, 2),), F(3, 4)),
            (3, (), F(1)),
            (3, (F(1, 2), F(4, 5)), F(23, 30)),
        ],
    )
    def test_average_bound(self, m, us, expected):
        assert average_bound(ProblemInstance(m, us)) == expected

    def test_average_bound_with_usage(self):
        inst = ProblemInstance(3, (F(1, 2), F(4, 5)))
        assert average_bound(inst, (F(1), F(1))) == average_bound(inst)
        assert average_bound(inst, (F(1), F(10, 11))) == F(17, 22)
        assert average_bound(inst, (F(0), F(0))) == F(1)

    def test_usage_length_checked(self):
        with pytest.raises(ValueError):
            average_bound(TWO_ONE, (F(1), F(1)))

    @pytest.mark.parametrize(
        "m, us, bound, y_star",
        [
            (3, (F(1, 2), F(4, 5)), F(17, 22), F(10, 11)),
            (2, (F(1, 3), F(1, 2)), F(7, 15), F(4, 5)),
            (3, (F(1, 2), F(1, 2)), F(2, 3), F(1)),
        ],
    )
    def test_one_abandonment_bound(self, m, us, bound, y_star):
        assert one_abandonment_bound(ProblemInstance(m, us)) == (bound, y_star)

    def test_one_abandonment_bound_needs_bikes(self):
        with pytest.raises(ValueError):
            one_abandonment_bound(ProblemInstance(2, ()))

    @settings(max_examples=60, deadline=None)
    @given(instances())
    def test_fastest_bike_below_average_bound(self, inst):
        if inst.bikes:
            assert inst.inverse_speeds[0] <= average_bound(inst)

    @settings(max_examples=60, deadline=None)
    @given(instances(), st.integers(0, 100))
    def test_removal_monotonicity(self, inst, pick):
        # Dropping one bike and one agent raises the bound exactly when the
        # dropped bike was at most the bound, with equality only at equality.
        if inst.bikes == 0 or inst.agents == 1:
            return
        k = pick % inst.bikes
        u = inst.inverse_speeds
        smaller = ProblemInstance(inst.agents - 1, u[:k] + u[k + 1 :])
        full, reduced = average_bound(inst), average_bound(smaller)
        assert (u[k] <= full) == (full <= reduced)
        assert (reduced == full) == (u[k] == full)

    @settings(max_examples=60, deadline=None)
    @given(instances(), st.data())
    def test_usage_bound_monotone(self, inst, data):
        if inst.bikes == 0:
            return
        y = tuple(
            data.draw(st.fractions(min_value=0, max_value=1, max_denominator=12))
            for _ in range(inst.bikes)
        )
        lower = tuple(
            data.draw(st.fractions(min_value=0, max_value=yk, max_denominator=12))
            for yk in y
        )
        assert average_bound(inst, lower) >= average_bound(inst, y)


class TestScheduleLowerBounds:
    def test_random_feasible_schedules_respect_bounds(self, rng):
        for _ in range(25):
            inst = random_instance(rng, max_agents=5)
            sched = random_feasible_schedule(rng, inst)
            prof = completion_profile(sched, inst)
            assert prof.makespan >= average_bound(inst)
            if inst.bikes:
                assert prof.makespan >= inst.slowest  # all bikes reach the end
            # The bound is met exactly iff all agents tie.
            all_equal = len(set(prof.final)) == 1
            assert (prof.makespan == average_bound(inst)) == all_equal

    def test_one_abandonment_bound_respected(self, rng):
        from bikesched import solve_partition

        for _ in range(20):
            inst = random_instance(rng, min_agents=2, max_agents=4)
            if inst.bikes < 2:
                continue
            bound, _ = one_abandonment_bound(inst)
            # Bike b retires after a random prefix; everything else rides on.
            n = rng.randint(2, inst.agents) if inst.agents > 1 else 1
            prefix = rng.randint(1, n - 1)
            cols = []
            for j in range(n):
                active = list(range(1, inst.bikes + 1 if j < prefix else inst.bikes))
                riders = rng.sample(range(inst.agents), len(active))
                col = [0] * inst.agents
                for bike, row in zip(active, riders):
                    col[row] = bike
                cols.append(col)
            matrix = ScheduleMatrix(
                tuple(tuple(c[i] for c in cols) for i in range(inst.agents))
            )
            x, tau = solve_partition(matrix, inst)
            assert tau >= bound
