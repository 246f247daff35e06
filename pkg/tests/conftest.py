"""Shared test helpers: deterministic random instances, matrices, schedules."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from bikesched import ProblemInstance, Schedule, ScheduleMatrix, solve_partition


def random_instance(
    rng: random.Random,
    max_agents: int = 10,
    limit: int = 0,
    min_agents: int = 1,
    max_bikes: int | None = None,
) -> ProblemInstance:
    m = rng.randint(min_agents, max_agents)
    b_cap = m if max_bikes is None else min(m, max_bikes)
    b = rng.randint(0, b_cap)
    us = []
    for _ in range(b):
        q = rng.randint(2, 24)
        us.append(Fraction(rng.randint(1, q - 1), q))
    return ProblemInstance(m, tuple(sorted(us)), abandonment_limit=limit)


def random_full_matrix(rng: random.Random, inst: ProblemInstance, n: int) -> ScheduleMatrix:
    """A structurally valid matrix with every bike ridden in every column."""
    m, b = inst.agents, inst.bikes
    cols = []
    for _ in range(n):
        riders = rng.sample(range(m), b)
        col = [0] * m
        for bike, row in enumerate(riders, start=1):
            col[row] = bike
        cols.append(col)
    return ScheduleMatrix(tuple(tuple(col[i] for col in cols) for i in range(m)))


def random_feasible_schedule(rng: random.Random, inst: ProblemInstance) -> Schedule:
    """A feasible schedule: random full matrix, LP-induced partition."""
    n = rng.randint(1, max(1, inst.agents))
    matrix = random_full_matrix(rng, inst, n)
    x, _ = solve_partition(matrix, inst)
    return Schedule(x, matrix)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xB1CE5)
