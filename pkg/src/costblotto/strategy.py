"""Working with equilibrium strategies: marginals, decomposition, certificates.

A flow from the minimax LP is only a marginal system; these tools turn it
into an explicit mixed strategy, compute exact best-response values by
dynamic programming over the layered graph, and certify whether a profile is
an equilibrium of the original game with costs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .game import (
    CostBlottoGame,
    MixedStrategy,
    Number,
    PureStrategy,
    check_partial_assignment,
    _check_player,
)
from .minimax import FEAS_EPS, InvalidFlowError, StrategyFlow
from .reduction import SunkCostGame, build_sunk_cost, map_strategy, oriented_valuations

#: Default tolerance on best-response gaps in an equilibrium certificate.
CERTIFICATE_EPS = 1e-5


@dataclass(frozen=True)
class Marginals:
    """Per-battlefield assignment distributions of one player.

    ``tables[i][t]`` is the probability of assigning ``t`` resources to
    battlefield ``i``.  Rows are normalized at construction; a row whose sum
    is off by more than the feasibility tolerance is rejected.
    """

    tables: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        rows = []
        for i, row in enumerate(self.tables):
            row = tuple(row)
            total = sum(row)
            if abs(total - 1) > FEAS_EPS:
                raise ValueError(
                    f"marginal row {i} sums to {total!r}, expected 1"
                )
            cleaned = []
            for t, p in enumerate(row):
                if p < 0:
                    if p < -FEAS_EPS:
                        raise ValueError(
                            f"marginal row {i} has negative mass {p!r} at t={t}"
                        )
                    p = 0
                cleaned.append(p)
            total = sum(cleaned)
            rows.append(tuple(p / total for p in cleaned))
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("marginals must be non-empty rows of equal length")
        object.__setattr__(self, "tables", tuple(rows))

    @property
    def n_hat(self) -> int:
        return len(self.tables)

    @property
    def budget(self) -> int:
        return len(self.tables[0]) - 1

    def expectation(self, weights: Sequence[Sequence[Number]]) -> Number:
        """Expected value of per-battlefield assignment weights."""
        if len(weights) != self.n_hat:
            raise ValueError(f"expected {self.n_hat} weight rows, got {len(weights)}")
        return sum(
            p * w
            for row, wrow in zip(self.tables, weights)
            for p, w in zip(row, wrow)
        )


def marginals_from_flow(flow: StrategyFlow) -> Marginals:
    """Collapse a unit flow to its per-battlefield marginals."""
    flow.validate(FEAS_EPS)
    g = flow.graph
    tables = np.zeros((g.n_hat, g.budget + 1))
    np.add.at(tables, (g.edge_field - 1, g.edge_assign), flow.edge_flow)
    return Marginals(tables=tuple(tuple(float(p) for p in row) for row in tables))


def marginals_from_mixed(xi: MixedStrategy, budget: int) -> Marginals:
    """Marginals of an explicit mixed strategy over full assignments."""
    n_hat = len(xi.support[0][0])
    tables = [[0] * (budget + 1) for _ in range(n_hat)]
    for s, p in xi.support:
        if len(s) != n_hat or sum(s) != budget:
            raise ValueError(
                f"support entry {s} is not a full assignment of {budget} "
                f"over {n_hat} battlefields"
            )
        for i, t in enumerate(s):
            tables[i][t] += p
    return Marginals(tables=tuple(tuple(row) for row in tables))


def decompose_flow(flow: StrategyFlow) -> MixedStrategy:
    """Peel a unit flow into an explicit mixed strategy over full assignments.

    Repeatedly traces a source-to-sink path along the highest-residual edge
    (preferring smaller assignments on ties), assigns it the bottleneck
    residual, and subtracts.  Each pass zeroes at least one edge, so at most
    one support entry per edge is produced, and the result's marginals match
    the flow's.
    """
    flow.validate(FEAS_EPS)
    g = flow.graph
    d = g.budget
    residual = flow.edge_flow.copy()
    source_edges = slice(0, d + 1)  # layer-1 edges out of (0, 0)
    entries: list[tuple[PureStrategy, float]] = []
    remaining = float(residual[source_edges].sum())
    while remaining > FEAS_EPS:
        path: list[int] = []
        assignment: list[int] = []
        cumulative = 0
        for field in range(1, g.n_hat + 1):
            if field == g.n_hat:
                # only the sink-bound edge can carry real flow in the last layer
                a = d - cumulative
                e = g.edge_index(field, cumulative, a)
                if residual[e] <= 0:
                    raise InvalidFlowError(
                        f"stranded at battlefield {field} with cumulative "
                        f"{cumulative} and {remaining} flow left to route"
                    )
            else:
                base = g.edge_index(field, cumulative, 0)
                candidates = residual[base:base + d - cumulative + 1]
                a = int(np.argmax(candidates))
                e = base + a
                if candidates[a] <= 0:
                    raise InvalidFlowError(
                        f"stranded at battlefield {field} with cumulative "
                        f"{cumulative} and {remaining} flow left to route"
                    )
            path.append(e)
            assignment.append(a)
            cumulative += a
        bottleneck = float(residual[path].min())
        residual[path] -= bottleneck
        entries.append((tuple(assignment), bottleneck))
        remaining -= bottleneck
    if not entries:
        raise InvalidFlowError("flow carries no mass out of the source")
    merged: dict[PureStrategy, float] = {}
    for s, p in entries:
        merged[s] = merged.get(s, 0.0) + p
    total = sum(merged.values())
    support = tuple(sorted((s, p / total) for s, p in merged.items()))
    return MixedStrategy(support=support)


def best_response_value(
    sunk: SunkCostGame, opp_marginals: Marginals, player: str
) -> tuple[Number, PureStrategy]:
    """Best payoff ``player`` can get against the opponent's marginals.

    Dynamic program over the responder's layered graph; exact when the game
    and marginals are rational.  Returns the value and one maximizing full
    assignment, breaking ties toward smaller assignments battlefield by
    battlefield.
    """
    _check_player(player)
    d_self, d_opp, tables = oriented_valuations(sunk, player)
    if opp_marginals.n_hat != sunk.n_hat or opp_marginals.budget != d_opp:
        raise ValueError(
            f"opponent marginals have shape ({opp_marginals.n_hat}, "
            f"{opp_marginals.budget}), expected ({sunk.n_hat}, {d_opp})"
        )
    rewards = [
        [
            sum(m_b * tables[i][a][b]
                for b, m_b in enumerate(opp_marginals.tables[i]))
            for a in range(d_self + 1)
        ]
        for i in range(sunk.n_hat)
    ]
    # suffix[i][j]: best total from node (i, j) onward; None if the sink is
    # unreachable (only over-spent last-layer nodes)
    suffix: list[list[Number | None]] = [[None] * (d_self + 1) for _ in range(sunk.n_hat + 1)]
    suffix[sunk.n_hat][d_self] = 0
    for i in range(sunk.n_hat, 0, -1):
        for j in range(d_self + 1):
            best = None
            for a in range(d_self - j + 1):
                tail = suffix[i][j + a]
                if tail is None:
                    continue
                total = rewards[i - 1][a] + tail
                if best is None or total > best:
                    best = total
            suffix[i - 1][j] = best
    value = suffix[0][0]
    assignment = []
    j = 0
    for i in range(1, sunk.n_hat + 1):
        for a in range(d_self - j + 1):
            tail = suffix[i][j + a]
            if tail is not None and rewards[i - 1][a] + tail == suffix[i - 1][j]:
                assignment.append(a)
                j += a
                break
    return value, tuple(assignment)


def certify_equilibrium(
    game: CostBlottoGame,
    xi_a: MixedStrategy,
    xi_b: MixedStrategy,
    eps: float = CERTIFICATE_EPS,
) -> tuple[bool, Number, Number]:
    """Check a mixed profile of the game with costs for equilibrium.

    Returns ``(is_equilibrium, gap_a, gap_b)`` where each gap is how much
    that player could gain by deviating to a best response in the zero-sum
    companion game; both games share equilibria, so gaps at most ``eps``
    certify the profile for the game with costs as well.
    """
    for s, _ in xi_a.support:
        check_partial_assignment(s, game.budget_a, game.n)
    for s, _ in xi_b.support:
        check_partial_assignment(s, game.budget_b, game.n)
    sunk = build_sunk_cost(game)
    mapped_a = MixedStrategy(
        support=tuple((map_strategy(s, game.budget_a), p) for s, p in xi_a.support)
    )
    mapped_b = MixedStrategy(
        support=tuple((map_strategy(s, game.budget_b), p) for s, p in xi_b.support)
    )
    marg_a = marginals_from_mixed(mapped_a, game.budget_a)
    marg_b = marginals_from_mixed(mapped_b, game.budget_b)
    # independence across players makes the expected payoff bilinear in the
    # per-battlefield marginals
    realized = sum(
        p_a * p_b * sunk.valuations_hat[i][a][b]
        for i in range(sunk.n_hat)
        for a, p_a in enumerate(marg_a.tables[i])
        for b, p_b in enumerate(marg_b.tables[i])
        if p_a and p_b
    )
    br_a, _ = best_response_value(sunk, marg_b, "A")
    br_b, _ = best_response_value(sunk, marg_a, "B")
    gap_a = br_a - realized
    gap_b = br_b + realized
    return bool(gap_a <= eps and gap_b <= eps), gap_a, gap_b
