"""Core types and exact payoff evaluation for resource contests with costs.

Two players simultaneously assign discrete resources to battlefields.  A
player may leave part of its budget unassigned.  Each battlefield i pays the
first player ``v_i(a_i, b_i)`` and the second player ``-v_i(a_i, b_i)``, each
player pays a per-battlefield assignment cost on what it places there, and
each player pays an obtainment cost on the total it assigns.  All arithmetic
stays in whatever number type the game was built with, so games built from
ints or :class:`fractions.Fraction` evaluate exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, float, Fraction]

#: A pure strategy is a tuple of per-battlefield resource counts.
PureStrategy = tuple[int, ...]

#: Mixed-strategy probabilities must sum to one within this tolerance.
PROB_EPS = 1e-9

#: Default cap on the number of strategies an exhaustive enumeration may emit.
ENUMERATION_CAP = 10_000_000


class InvalidStrategyError(ValueError):
    """A pure strategy violates its player's budget or shape constraints."""


class EnumerationCapError(ValueError):
    """An exhaustive enumeration would exceed the configured cap."""


def _sign(a: int, b: int) -> int:
    return (a > b) - (a < b)


def _is_count(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


@dataclass(frozen=True)
class CostFunction:
    """Non-decreasing cost of assigning or obtaining ``t`` resources.

    ``kind`` is one of ``"table"``, ``"linear"`` or ``"quadratic"``.  Table
    costs store one value per ``t`` in ``0..domain_max``; parametric kinds
    store a single nonnegative coefficient.  ``f(0)`` need not be zero.
    """

    kind: str
    domain_max: int
    coefficient: Number | None = None
    table: tuple[Number, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("table", "linear", "quadratic"):
            raise ValueError(f"unknown cost function kind {self.kind!r}")
        if not _is_count(self.domain_max):
            raise ValueError(f"domain_max must be a nonnegative int, got {self.domain_max!r}")
        if self.kind == "table":
            if self.table is None:
                raise ValueError("table cost function requires a table")
            values = tuple(self.table)
            object.__setattr__(self, "table", values)
            if len(values) != self.domain_max + 1:
                raise ValueError(
                    f"cost table has {len(values)} entries, expected {self.domain_max + 1}"
                )
            for t in range(len(values) - 1):
                if values[t + 1] < values[t]:
                    raise ValueError(
                        f"cost table decreases at t={t + 1}: "
                        f"{values[t + 1]!r} < {values[t]!r}"
                    )
        else:
            if self.coefficient is None:
                raise ValueError(f"{self.kind} cost function requires a coefficient")
            if self.coefficient < 0:
                raise ValueError(
                    f"{self.kind} cost with negative coefficient "
                    f"{self.coefficient!r} would be decreasing"
                )

    @classmethod
    def zero(cls, domain_max: int) -> "CostFunction":
        return cls(kind="linear", domain_max=domain_max, coefficient=0)

    @classmethod
    def linear(cls, coefficient: Number, domain_max: int) -> "CostFunction":
        return cls(kind="linear", domain_max=domain_max, coefficient=coefficient)

    @classmethod
    def quadratic(cls, coefficient: Number, domain_max: int) -> "CostFunction":
        return cls(kind="quadratic", domain_max=domain_max, coefficient=coefficient)

    @classmethod
    def from_table(cls, values: Sequence[Number]) -> "CostFunction":
        return cls(kind="table", domain_max=len(values) - 1, table=tuple(values))

    def __call__(self, t: int) -> Number:
        if not _is_count(t) or t > self.domain_max:
            raise ValueError(f"cost argument {t!r} outside domain 0..{self.domain_max}")
        if self.kind == "table":
            return self.table[t]
        if self.kind == "linear":
            return self.coefficient * t
        return self.coefficient * t * t


@dataclass(frozen=True)
class Valuation:
    """Battlefield payoff ``v(a, b)`` to the first player.

    ``sign`` valuations pay ``weight * sign(a - b)``: the battlefield is won
    by whoever assigns strictly more.  ``table`` valuations are arbitrary and
    are indexed ``rows[a][b]``.
    """

    kind: str
    weight: Number | None = None
    rows: tuple[tuple[Number, ...], ...] | None = None

    def __post_init__(self):
        if self.kind not in ("sign", "table"):
            raise ValueError(f"unknown valuation kind {self.kind!r}")
        if self.kind == "sign":
            if self.weight is None:
                raise ValueError("sign valuation requires a weight")
        else:
            if self.rows is None:
                raise ValueError("table valuation requires rows")
            rows = tuple(tuple(r) for r in self.rows)
            object.__setattr__(self, "rows", rows)
            if not rows or any(len(r) != len(rows[0]) for r in rows):
                raise ValueError("valuation table must be rectangular and non-empty")

    @classmethod
    def sign_form(cls, weight: Number = 1) -> "Valuation":
        return cls(kind="sign", weight=weight)

    @classmethod
    def from_table(cls, rows: Sequence[Sequence[Number]]) -> "Valuation":
        return cls(kind="table", rows=tuple(tuple(r) for r in rows))

    def __call__(self, a: int, b: int) -> Number:
        if self.kind == "sign":
            return self.weight * _sign(a, b)
        return self.rows[a][b]


@dataclass(frozen=True)
class CostBlottoGame:
    """A contest with obtainment and assignment costs for both players.

    Player A has budget ``budget_a`` and player B ``budget_b``; either player
    may assign any total up to its budget across the ``n`` battlefields.
    """

    n: int
    budget_a: int
    budget_b: int
    valuations: tuple[Valuation, ...]
    assign_costs_a: tuple[CostFunction, ...]
    assign_costs_b: tuple[CostFunction, ...]
    obtain_cost_a: CostFunction
    obtain_cost_b: CostFunction

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"need at least 2 battlefields, got n={self.n!r}")
        if not _is_count(self.budget_a) or not _is_count(self.budget_b):
            raise ValueError(
                f"budgets must be nonnegative ints, got {self.budget_a!r}, {self.budget_b!r}"
            )
        object.__setattr__(self, "valuations", tuple(self.valuations))
        object.__setattr__(self, "assign_costs_a", tuple(self.assign_costs_a))
        object.__setattr__(self, "assign_costs_b", tuple(self.assign_costs_b))
        for name, seq in (
            ("valuations", self.valuations),
            ("assign_costs_a", self.assign_costs_a),
            ("assign_costs_b", self.assign_costs_b),
        ):
            if len(seq) != self.n:
                raise ValueError(f"{name} has {len(seq)} entries, expected n={self.n}")
        for i, v in enumerate(self.valuations):
            if v.kind == "table":
                if len(v.rows) != self.budget_a + 1 or len(v.rows[0]) != self.budget_b + 1:
                    raise ValueError(
                        f"valuations[{i}] table is {len(v.rows)}x{len(v.rows[0])}, "
                        f"expected {self.budget_a + 1}x{self.budget_b + 1}"
                    )
        for i, c in enumerate(self.assign_costs_a):
            if c.domain_max != self.budget_a:
                raise ValueError(
                    f"assign_costs_a[{i}] has domain_max {c.domain_max}, "
                    f"expected budget {self.budget_a}"
                )
        for i, c in enumerate(self.assign_costs_b):
            if c.domain_max != self.budget_b:
                raise ValueError(
                    f"assign_costs_b[{i}] has domain_max {c.domain_max}, "
                    f"expected budget {self.budget_b}"
                )
        if self.obtain_cost_a.domain_max != self.budget_a:
            raise ValueError(
                f"obtain_cost_a has domain_max {self.obtain_cost_a.domain_max}, "
                f"expected budget {self.budget_a}"
            )
        if self.obtain_cost_b.domain_max != self.budget_b:
            raise ValueError(
                f"obtain_cost_b has domain_max {self.obtain_cost_b.domain_max}, "
                f"expected budget {self.budget_b}"
            )

    def budget(self, player: str) -> int:
        _check_player(player)
        return self.budget_a if player == "A" else self.budget_b


def _check_player(player: str) -> None:
    if player not in ("A", "B"):
        raise ValueError(f"player must be 'A' or 'B', got {player!r}")


def check_partial_assignment(s: Iterable[int], budget: int, n: int) -> PureStrategy:
    """Validate and normalize a partial assignment (total at most ``budget``)."""
    s = tuple(s)
    if len(s) != n:
        raise InvalidStrategyError(f"strategy {s} has length {len(s)}, expected {n}")
    if not all(_is_count(x) for x in s):
        raise InvalidStrategyError(f"strategy {s} has non-integer or negative entries")
    if sum(s) > budget:
        raise InvalidStrategyError(f"strategy {s} assigns {sum(s)}, over budget {budget}")
    return s


def check_full_assignment(s: Iterable[int], budget: int, n: int) -> PureStrategy:
    """Validate a full assignment (total exactly ``budget``)."""
    s = check_partial_assignment(s, budget, n)
    if sum(s) != budget:
        raise InvalidStrategyError(
            f"strategy {s} assigns {sum(s)}, expected the full budget {budget}"
        )
    return s


def payoff_costs(game: CostBlottoGame, s_a: Iterable[int], s_b: Iterable[int]) -> tuple[Number, Number]:
    """Both players' payoffs in the game with costs.

    Player A receives the battlefield valuations minus its own assignment and
    obtainment costs; player B receives the negated valuations minus its own
    costs.  The pair generally does not sum to zero.
    """
    s_a = check_partial_assignment(s_a, game.budget_a, game.n)
    s_b = check_partial_assignment(s_b, game.budget_b, game.n)
    value = sum(game.valuations[i](s_a[i], s_b[i]) for i in range(game.n))
    cost_a = sum(game.assign_costs_a[i](s_a[i]) for i in range(game.n))
    cost_b = sum(game.assign_costs_b[i](s_b[i]) for i in range(game.n))
    pay_a = value - cost_a - game.obtain_cost_a(sum(s_a))
    pay_b = -value - cost_b - game.obtain_cost_b(sum(s_b))
    return pay_a, pay_b


def payoff_zero(game: CostBlottoGame, s_a: Iterable[int], s_b: Iterable[int]) -> Number:
    """Player A's payoff in the zero-sum companion game.

    Each player's payoff is shifted by the opponent's total costs, which the
    opponent's strategy alone determines; the shift leaves every player's
    preference between its own strategies unchanged, so equilibria coincide
    with those of the game with costs, and the shifted game is zero-sum.
    Player B's companion payoff is the negation of the returned value.
    """
    s_a = check_partial_assignment(s_a, game.budget_a, game.n)
    s_b = check_partial_assignment(s_b, game.budget_b, game.n)
    pay_a, _ = payoff_costs(game, s_a, s_b)
    cost_b = sum(game.assign_costs_b[i](s_b[i]) for i in range(game.n))
    return pay_a + cost_b + game.obtain_cost_b(sum(s_b))


def enumerate_strategies(budget: int, n: int, full: bool = False,
                         cap: int = ENUMERATION_CAP) -> list[PureStrategy]:
    """All partial (or full) assignments of ``budget`` over ``n`` battlefields.

    Strategies are emitted in lexicographic order.  Raises
    :class:`EnumerationCapError` when the count exceeds ``cap``.
    """
    if n < 1 or not _is_count(budget):
        raise ValueError(f"invalid enumeration domain budget={budget!r}, n={n!r}")
    count = math.comb(budget + n - 1, n - 1) if full else math.comb(budget + n, n)
    if count > cap:
        raise EnumerationCapError(
            f"oracle scale exceeded: {count} strategies for budget={budget}, "
            f"n={n}, cap={cap}"
        )
    out: list[PureStrategy] = []
    prefix = [0] * n

    def rec(pos: int, remaining: int) -> None:
        if pos == n - 1:
            if full:
                prefix[pos] = remaining
                out.append(tuple(prefix))
            else:
                for t in range(remaining + 1):
                    prefix[pos] = t
                    out.append(tuple(prefix))
            return
        for t in range(remaining + 1):
            prefix[pos] = t
            rec(pos + 1, remaining - t)

    rec(0, budget)
    if full:
        out.sort()
    return out


@dataclass(frozen=True)
class MixedStrategy:
    """A finite-support probability distribution over pure strategies."""

    support: tuple[tuple[PureStrategy, Number], ...]

    def __post_init__(self):
        entries = tuple((tuple(s), p) for s, p in self.support)
        object.__setattr__(self, "support", entries)
        if not entries:
            raise ValueError("mixed strategy must have non-empty support")
        seen = set()
        for s, p in entries:
            if s in seen:
                raise ValueError(f"duplicate support entry {s}")
            seen.add(s)
            if p < 0:
                raise ValueError(f"negative probability {p!r} on {s}")
        total = sum(p for _, p in entries)
        if abs(total - 1) > PROB_EPS:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")

    @classmethod
    def point_mass(cls, s: Iterable[int]) -> "MixedStrategy":
        return cls(support=((tuple(s), 1),))

    def strategies(self) -> list[PureStrategy]:
        return [s for s, _ in self.support]


def mix_strategies(xi_1: MixedStrategy, xi_2: MixedStrategy,
                   weight: Number = Fraction(1, 2)) -> MixedStrategy:
    """Convex combination ``weight * xi_1 + (1 - weight) * xi_2``."""
    if not 0 <= weight <= 1:
        raise ValueError(f"mixture weight {weight!r} outside [0, 1]")
    probs: dict[PureStrategy, Number] = {}
    for s, p in xi_1.support:
        probs[s] = probs.get(s, 0) + weight * p
    for s, p in xi_2.support:
        probs[s] = probs.get(s, 0) + (1 - weight) * p
    entries = tuple(sorted((s, p) for s, p in probs.items() if p > 0))
    return MixedStrategy(support=entries)


def expected_payoff(game: CostBlottoGame, xi_a: MixedStrategy, xi_b: MixedStrategy,
                    variant: str = "costs") -> tuple[Number, Number]:
    """Expected payoffs of a mixed-strategy profile.

    ``variant`` selects the game with costs or its zero-sum companion; for
    the companion the returned pair sums to zero.
    """
    if variant not in ("costs", "zero"):
        raise ValueError(f"unknown payoff variant {variant!r}")
    for s, _ in xi_a.support:
        check_partial_assignment(s, game.budget_a, game.n)
    for s, _ in xi_b.support:
        check_partial_assignment(s, game.budget_b, game.n)
    if variant == "costs":
        total_a = total_b = 0
        for s_a, p_a in xi_a.support:
            for s_b, p_b in xi_b.support:
                pay_a, pay_b = payoff_costs(game, s_a, s_b)
                total_a += p_a * p_b * pay_a
                total_b += p_a * p_b * pay_b
        return total_a, total_b
    total = 0
    for s_a, p_a in xi_a.support:
        for s_b, p_b in xi_b.support:
            total += p_a * p_b * payoff_zero(game, s_a, s_b)
    return total, -total


def swap_players(game: CostBlottoGame) -> CostBlottoGame:
    """The same contest with the player roles exchanged.

    The new player A is the old player B; battlefield payoffs are negated and
    transposed so pure payoffs satisfy
    ``payoff_costs(swapped, s_b, s_a) == (pay_b, pay_a)``.
    """
    swapped_vals = []
    for v in game.valuations:
        if v.kind == "sign":
            swapped_vals.append(v)  # w*sign(a-b) is antisymmetric already
        else:
            rows = tuple(
                tuple(-v.rows[a][b] for a in range(game.budget_a + 1))
                for b in range(game.budget_b + 1)
            )
            swapped_vals.append(Valuation.from_table(rows))
    return CostBlottoGame(
        n=game.n,
        budget_a=game.budget_b,
        budget_b=game.budget_a,
        valuations=tuple(swapped_vals),
        assign_costs_a=game.assign_costs_b,
        assign_costs_b=game.assign_costs_a,
        obtain_cost_a=game.obtain_cost_b,
        obtain_cost_b=game.obtain_cost_a,
    )
