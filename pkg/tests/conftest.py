import random
from fractions import Fraction

import pytest

from costblotto import CostBlottoGame, CostFunction, Valuation


def example_one() -> CostBlottoGame:
    """n=2, budgets 2/2, sign valuations, no assignment costs, g(t)=t."""
    return CostBlottoGame(
        n=2,
        budget_a=2,
        budget_b=2,
        valuations=(Valuation.sign_form(1), Valuation.sign_form(1)),
        assign_costs_a=(CostFunction.zero(2), CostFunction.zero(2)),
        assign_costs_b=(CostFunction.zero(2), CostFunction.zero(2)),
        obtain_cost_a=CostFunction.linear(1, 2),
        obtain_cost_b=CostFunction.linear(1, 2),
    )


@pytest.fixture
def example_game() -> CostBlottoGame:
    return example_one()


def random_cost(rng: random.Random, domain_max: int, exact: bool = False) -> CostFunction:
    """Non-decreasing table cost with increments drawn from {0, 1/4, 1/2, 1}."""
    increments = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)]
    values = [Fraction(0)]
    for _ in range(domain_max):
        values.append(values[-1] + rng.choice(increments))
    if not exact:
        values = [float(v) for v in values]
    return CostFunction.from_table(tuple(values))


def random_game(rng: random.Random, n_max: int = 3, d_max: int = 5,
                exact: bool = False) -> CostBlottoGame:
    """Random instance: integer valuations in [-2, 2], random monotone costs."""
    n = rng.randint(2, n_max)
    d_a = rng.randint(0, d_max)
    d_b = rng.randint(0, d_max)
    vals = []
    for _ in range(n):
        if rng.random() < 0.5:
            vals.append(Valuation.sign_form(rng.randint(1, 2)))
        else:
            rows = tuple(
                tuple(rng.randint(-2, 2) for _ in range(d_b + 1))
                for _ in range(d_a + 1)
            )
            vals.append(Valuation.from_table(rows))
    return CostBlottoGame(
        n=n,
        budget_a=d_a,
        budget_b=d_b,
        valuations=tuple(vals),
        assign_costs_a=tuple(random_cost(rng, d_a, exact) for _ in range(n)),
        assign_costs_b=tuple(random_cost(rng, d_b, exact) for _ in range(n)),
        obtain_cost_a=random_cost(rng, d_a, exact),
        obtain_cost_b=random_cost(rng, d_b, exact),
    )
