"""Polynomial-size minimax LP for sunk-cost contests.

Because battlefield payoffs add up and the players randomize independently,
a mixed strategy matters only through its per-battlefield marginals, and the
feasible marginal systems of one player are exactly the unit source-to-sink
flows of a layered graph that tracks cumulative assignment.  The maximizing
player's strategy therefore becomes a flow; the opponent's best reply is a
shortest source-to-sink path in its own layered graph under expected edge
payoffs, which node potentials bound from below.  One LP in both yields the
game value with variable and constraint counts quadratic in the budget and
linear in the battlefield count, instead of the exponential strategy space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .game import CostBlottoGame, MixedStrategy, check_full_assignment, _check_player
from .reduction import SunkCostGame, build_sunk_cost, oriented_valuations
from .solver import (
    INFEASIBLE,
    NUMERIC_FAILURE,
    OPTIMAL,
    UNBOUNDED,
    BackendSolution,
    LinearProgram,
    SolverFailureError,
    get_backend,
)

#: Flow conservation / feasibility tolerance.
FEAS_EPS = 1e-7
#: Flows smaller than this are treated as exact zeros after a solve.
FLOW_DUST = 1e-9
#: Relative slack when pinning the game value in a second-stage solve.
PIN_EPS = 1e-7


class LpConstructionError(RuntimeError):
    """The minimax LP came back infeasible or unbounded, which only a
    construction bug can cause for finite payoff tables."""


class InvalidFlowError(ValueError):
    """An edge-flow vector is not a unit source-to-sink flow."""


class LayeredGraph:
    """Layered DAG whose unit flows encode budget-feasible marginal systems.

    Nodes are ``(layer, cumulative)`` pairs for layers ``0..n_hat`` and
    cumulative resources ``0..budget``; battlefield ``i`` contributes edges
    ``(i-1, j) -> (i, j+a)`` for every assignment ``a`` with
    ``j + a <= budget``.  A unit flow from ``(0, 0)`` to ``(n_hat, budget)``
    is exactly a mixed strategy seen through its per-battlefield marginals:
    the flow on assignment-``a`` edges of layer ``i`` is the probability of
    assigning ``a`` to battlefield ``i``.
    """

    def __init__(self, n_hat: int, budget: int):
        if n_hat < 1 or budget < 0:
            raise ValueError(f"invalid graph shape n_hat={n_hat}, budget={budget}")
        self.n_hat = n_hat
        self.budget = budget
        d = budget
        self.edges_per_layer = (d + 1) * (d + 2) // 2
        counts = np.arange(d + 1, 0, -1)
        self._offsets = np.concatenate(([0], np.cumsum(counts)))
        layer_tail = np.repeat(np.arange(d + 1), counts)
        layer_assign = np.arange(self.edges_per_layer) - self._offsets[layer_tail]
        self.edge_field = np.repeat(np.arange(1, n_hat + 1), self.edges_per_layer)
        self.edge_tail = np.tile(layer_tail, n_hat)
        self.edge_assign = np.tile(layer_assign, n_hat)
        for arr in (self.edge_field, self.edge_tail, self.edge_assign, self._offsets):
            arr.flags.writeable = False

    @property
    def layers(self) -> int:
        return self.n_hat + 1

    @property
    def num_nodes(self) -> int:
        return (self.n_hat + 1) * (self.budget + 1)

    @property
    def num_edges(self) -> int:
        return self.n_hat * self.edges_per_layer

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return self.num_nodes - 1

    def node_index(self, layer: int, cumulative: int) -> int:
        return layer * (self.budget + 1) + cumulative

    def edge_index(self, field: int, tail: int, assign: int) -> int:
        if not (1 <= field <= self.n_hat and 0 <= tail and 0 <= assign
                and tail + assign <= self.budget):
            raise ValueError(f"no edge ({field}, {tail}, {assign}) in this graph")
        return (field - 1) * self.edges_per_layer + int(self._offsets[tail]) + assign

    def tail_nodes(self) -> np.ndarray:
        return (self.edge_field - 1) * (self.budget + 1) + self.edge_tail

    def head_nodes(self) -> np.ndarray:
        return self.edge_field * (self.budget + 1) + self.edge_tail + self.edge_assign

    def path_edges(self, assignment: Iterable[int]) -> list[int]:
        """Edge indices of the source-to-sink path of one full assignment."""
        assignment = check_full_assignment(assignment, self.budget, self.n_hat)
        cumulative = 0
        path = []
        for field, a in enumerate(assignment, start=1):
            path.append(self.edge_index(field, cumulative, a))
            cumulative += a
        return path

    def __eq__(self, other):
        return (isinstance(other, LayeredGraph)
                and self.n_hat == other.n_hat and self.budget == other.budget)

    def __repr__(self):
        return f"LayeredGraph(n_hat={self.n_hat}, budget={self.budget})"


@dataclass(frozen=True)
class StrategyFlow:
    """An edge-flow vector over a layered graph, indexed like its edges."""

    graph: LayeredGraph
    edge_flow: np.ndarray

    def __post_init__(self):
        flow = np.asarray(self.edge_flow, dtype=float)
        if flow.shape != (self.graph.num_edges,):
            raise InvalidFlowError(
                f"flow has shape {flow.shape}, expected ({self.graph.num_edges},)"
            )
        flow = flow.copy()
        flow.flags.writeable = False
        object.__setattr__(self, "edge_flow", flow)

    @classmethod
    def from_mixed(cls, graph: LayeredGraph, xi: MixedStrategy) -> "StrategyFlow":
        """The flow that routes each support assignment along its path."""
        flow = np.zeros(graph.num_edges)
        for s, p in xi.support:
            for e in graph.path_edges(s):
                flow[e] += p
        return cls(graph=graph, edge_flow=flow)

    def node_imbalance(self) -> np.ndarray:
        """Inflow minus outflow per node, net of the unit supply/demand."""
        balance = np.zeros(self.graph.num_nodes)
        np.add.at(balance, self.graph.head_nodes(), self.edge_flow)
        np.subtract.at(balance, self.graph.tail_nodes(), self.edge_flow)
        balance[self.graph.source] += 1.0
        balance[self.graph.sink] -= 1.0
        return balance

    def validate(self, eps: float = FEAS_EPS) -> None:
        if self.edge_flow.min(initial=0.0) < -eps:
            raise InvalidFlowError(
                f"negative edge flow {self.edge_flow.min()} beyond tolerance {eps}"
            )
        worst = float(np.abs(self.node_imbalance()).max())
        if worst > eps:
            raise InvalidFlowError(
                f"flow conservation violated by {worst} (tolerance {eps})"
            )


@dataclass(frozen=True)
class MinimaxLP:
    """The assembled LP plus the index layout needed to read solutions back.

    Variables are, in order: the perspective player's edge flows, its
    per-battlefield marginals (one per assignment level), the opponent's
    expected per-assignment battlefield payoffs, the opponent's node
    potentials, and the value variable.  The marginal and expected-payoff
    variables are definitional; they keep every constraint row short.
    """

    program: LinearProgram
    graph_self: LayeredGraph
    graph_opp: LayeredGraph
    perspective: str
    flow_slice: slice
    marginal_slice: slice
    payoff_slice: slice
    potential_slice: slice
    value_index: int

    @property
    def num_vars(self) -> int:
        return self.program.num_vars

    @property
    def num_constraints(self) -> int:
        return self.program.num_constraints


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one LP solve in flow form."""

    status: str
    value: float
    flow: StrategyFlow | None
    potentials: np.ndarray | None
    objective_extras: float | None = None
    message: str = ""


def build_minimax_lp(sunk: SunkCostGame, perspective: str = "A") -> MinimaxLP:
    """Assemble the maximin LP of ``perspective`` over both layered graphs.

    The perspective player maximizes a value variable bounded by the
    opponent's sink potential; potentials are constrained edge-by-edge so the
    sink potential never exceeds the opponent's cheapest reply against the
    chosen flow's marginals.  At the optimum the value variable equals the
    game value seen from ``perspective``.
    """
    _check_player(perspective)
    d_self, d_opp, tables = oriented_valuations(sunk, perspective)
    n_hat = sunk.n_hat
    gs = LayeredGraph(n_hat, d_self)
    go = LayeredGraph(n_hat, d_opp)
    w = np.empty((n_hat, d_self + 1, d_opp + 1))
    for i, table in enumerate(tables):
        w[i] = [[float(x) for x in row] for row in table]

    e_s, v_s = gs.num_edges, gs.num_nodes
    e_o, v_o = go.num_edges, go.num_nodes
    n_marg = n_hat * (d_self + 1)
    n_pay = n_hat * (d_opp + 1)
    col_f = 0
    col_h = e_s
    col_q = col_h + n_marg
    col_pi = col_q + n_pay
    col_t = col_pi + v_o
    num_vars = col_t + 1
    num_eq = v_s + n_marg + n_pay
    num_rows = num_eq + e_o + 1

    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(np.asarray(r, dtype=np.int64))
        cols.append(np.asarray(c, dtype=np.int64))
        vals.append(np.asarray(v, dtype=float))

    # unit-flow conservation at every node of the perspective player's graph
    edge_ids = np.arange(e_s)
    add(gs.head_nodes(), edge_ids, np.ones(e_s))
    add(gs.tail_nodes(), edge_ids, -np.ones(e_s))
    # marginals: h[i, a] equals the total flow on layer i's assignment-a edges
    marg_of_edge = v_s + (gs.edge_field - 1) * (d_self + 1) + gs.edge_assign
    add(marg_of_edge, edge_ids, -np.ones(e_s))
    add(v_s + np.arange(n_marg), col_h + np.arange(n_marg), np.ones(n_marg))
    # expected payoffs: q[i, b] equals sum_a w[i, a, b] * h[i, a]
    add(v_s + n_marg + np.arange(n_pay), col_q + np.arange(n_pay), np.ones(n_pay))
    i_idx = np.repeat(np.arange(n_hat), (d_opp + 1) * (d_self + 1))
    b_idx = np.tile(np.repeat(np.arange(d_opp + 1), d_self + 1), n_hat)
    a_idx = np.tile(np.arange(d_self + 1), n_hat * (d_opp + 1))
    add(v_s + n_marg + i_idx * (d_opp + 1) + b_idx,
        col_h + i_idx * (d_self + 1) + a_idx,
        -w[i_idx, a_idx, b_idx])
    # opponent potentials: pi[head] <= pi[tail] + q[i, b] along every edge
    opp_rows = num_eq + np.arange(e_o)
    add(opp_rows, col_pi + go.head_nodes(), np.ones(e_o))
    add(opp_rows, col_pi + go.tail_nodes(), -np.ones(e_o))
    add(opp_rows, col_q + (go.edge_field - 1) * (d_opp + 1) + go.edge_assign,
        -np.ones(e_o))
    # the value never exceeds the opponent's sink potential
    add([num_rows - 1], [col_t], [1.0])
    add([num_rows - 1], [col_pi + go.sink], [-1.0])

    a = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(num_rows, num_vars),
    ).tocsr()

    rhs = np.zeros(num_rows)
    rhs[gs.source] = -1.0
    rhs[gs.sink] = 1.0
    row_sense = np.array(["="] * num_eq + ["<"] * (e_o + 1))

    lower = np.zeros(num_vars)
    upper = np.full(num_vars, np.inf)
    lower[col_q:] = -np.inf
    lower[col_pi + go.source] = upper[col_pi + go.source] = 0.0

    objective = np.zeros(num_vars)
    objective[col_t] = 1.0

    program = LinearProgram(sense="max", objective=objective, a=a,
                            row_sense=row_sense, rhs=rhs, lower=lower, upper=upper)
    return MinimaxLP(
        program=program,
        graph_self=gs,
        graph_opp=go,
        perspective=perspective,
        flow_slice=slice(0, e_s),
        marginal_slice=slice(col_h, col_h + n_marg),
        payoff_slice=slice(col_q, col_q + n_pay),
        potential_slice=slice(col_pi, col_pi + v_o),
        value_index=col_t,
    )


def lp_stats(model: MinimaxLP) -> tuple[int, int]:
    """Variable and constraint counts of an assembled model."""
    return model.num_vars, model.num_constraints


def _result_from_solution(model: MinimaxLP, sol: BackendSolution,
                          with_extras: bool = False) -> SolveResult:
    if sol.status in (INFEASIBLE, UNBOUNDED):
        raise LpConstructionError(
            f"minimax LP reported {sol.status}: {sol.message}"
        )
    if sol.status != OPTIMAL:
        return SolveResult(status=sol.status, value=float("nan"), flow=None,
                           potentials=None, message=sol.message)
    x = sol.x
    f = x[model.flow_slice].copy()
    worst_negative = float(f.min(initial=0.0))
    if worst_negative < -FEAS_EPS:
        return SolveResult(
            status=NUMERIC_FAILURE, value=float("nan"), flow=None, potentials=None,
            message=f"flow has negative entry {worst_negative} beyond {FEAS_EPS}",
        )
    f[np.abs(f) < FLOW_DUST] = 0.0
    f = np.maximum(f, 0.0)
    flow = StrategyFlow(graph=model.graph_self, edge_flow=f)
    worst = float(np.abs(flow.node_imbalance()).max())
    if worst > FEAS_EPS:
        return SolveResult(
            status=NUMERIC_FAILURE, value=float("nan"), flow=None, potentials=None,
            message=f"flow conservation violated by {worst} after cleanup",
        )
    return SolveResult(
        status=OPTIMAL,
        value=float(x[model.value_index]),
        flow=flow,
        potentials=x[model.potential_slice].copy(),
        objective_extras=float(sol.objective) if with_extras else None,
        message=sol.message,
    )


def solve(model: MinimaxLP, backend=None) -> SolveResult:
    """Solve an assembled minimax LP and clean up the returned flow."""
    backend = backend if backend is not None else get_backend()
    return _result_from_solution(model, backend.solve(model.program))


def _statistic_objective(model: MinimaxLP, statistic) -> np.ndarray:
    n_hat, d_self = model.graph_self.n_hat, model.graph_self.budget
    weights = [tuple(row) for row in statistic]
    if len(weights) != n_hat or any(len(row) != d_self + 1 for row in weights):
        raise ValueError(
            f"statistic must supply {n_hat} weight rows of length {d_self + 1}"
        )
    objective = np.zeros(model.num_vars)
    objective[model.marginal_slice] = [float(x) for row in weights for x in row]
    return objective


def _pinned_program(model: MinimaxLP, value: float, objective: np.ndarray,
                    sense: str) -> LinearProgram:
    base = model.program
    pin_row = sp.csr_matrix(
        ([1.0], ([0], [model.value_index])), shape=(1, base.num_vars)
    )
    return LinearProgram(
        sense=sense,
        objective=objective,
        a=sp.vstack([base.a, pin_row], format="csr"),
        row_sense=np.append(base.row_sense, ">"),
        rhs=np.append(base.rhs, value - PIN_EPS * max(1.0, abs(value))),
        lower=base.lower,
        upper=base.upper,
    )


def equilibrium_statistic_bounds(
    game: CostBlottoGame,
    statistics: Mapping[str, Sequence[Sequence[float]]],
    directions: tuple[str, ...] = ("min", "max"),
    backend=None,
) -> tuple[SolveResult, dict[str, dict[str, tuple[float, SolveResult]]]]:
    """Extremal equilibrium values of marginal-linear statistics for player A.

    Stage one solves the reduced game for its value; stage two re-optimizes
    each statistic over the flows pinned to achieve that value, so every
    witness is itself an (epsilon-)equilibrium strategy.  All statistics
    share stage one, which keeps min and max comparable bound-for-bound.
    """
    backend = backend if backend is not None else get_backend()
    model = build_minimax_lp(build_sunk_cost(game), "A")
    base = solve(model, backend)
    if base.status != OPTIMAL:
        raise SolverFailureError(f"stage-one solve failed: {base.status} {base.message}")
    out: dict[str, dict[str, tuple[float, SolveResult]]] = {}
    for name, statistic in statistics.items():
        objective = _statistic_objective(model, statistic)
        out[name] = {}
        for direction in directions:
            if direction not in ("min", "max"):
                raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")
            program = _pinned_program(model, base.value, objective, direction)
            sol = backend.solve(program)
            if sol.status != OPTIMAL:
                raise SolverFailureError(
                    f"stage-two solve for {name}/{direction} failed: "
                    f"{sol.status} {sol.message}"
                )
            witness = _result_from_solution(model, sol, with_extras=True)
            if witness.status != OPTIMAL:
                raise SolverFailureError(
                    f"stage-two solution for {name}/{direction} unusable: "
                    f"{witness.message}"
                )
            out[name][direction] = (float(sol.objective), witness)
    return base, out


def solve_equilibrium_statistic(
    game: CostBlottoGame,
    statistic: Sequence[Sequence[float]],
    direction: str,
    backend=None,
) -> tuple[float, SolveResult]:
    """Optimize one marginal-linear statistic over player A's equilibria.

    ``statistic`` gives a weight per battlefield of the reduced game and
    assignment level; the optimized quantity is the expectation of those
    weights under the strategy's marginals.
    """
    _, bounds = equilibrium_statistic_bounds(
        game, {"statistic": statistic}, directions=(direction,), backend=backend
    )
    return bounds["statistic"][direction]


def resource_statistic(game: CostBlottoGame) -> tuple[tuple[float, ...], ...]:
    """Weights whose expectation is player A's obtained resources.

    Only the unspent-resources battlefield contributes: assigning ``t`` there
    means ``budget - t`` resources were obtained.
    """
    d = game.budget_a
    zero = (0.0,) * (d + 1)
    last = tuple(float(d - t) for t in range(d + 1))
    return (zero,) * game.n + (last,)


def expenditure_statistic(game: CostBlottoGame) -> tuple[tuple[float, ...], ...]:
    """Weights whose expectation is player A's total expenditure.

    Battlefield weights are A's assignment costs; the unspent-resources
    battlefield contributes the obtainment cost of what was obtained.
    """
    d = game.budget_a
    rows = [
        tuple(float(game.assign_costs_a[i](t)) for t in range(d + 1))
        for i in range(game.n)
    ]
    rows.append(tuple(float(game.obtain_cost_a(d - t)) for t in range(d + 1)))
    return tuple(rows)
