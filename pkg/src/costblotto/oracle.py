"""Brute-force reference solver for small contests.

Enumerates both players' pure strategies, materializes the zero-sum payoff
matrix, and solves the matrix game directly.  Games whose numbers are all
ints or :class:`fractions.Fraction` are solved with an exact rational
simplex; everything else goes through an independent floating-point solve.
This path shares nothing with the flow formulation beyond pure payoffs, so
agreement between the two is meaningful evidence of correctness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .game import (
    CostBlottoGame,
    MixedStrategy,
    Number,
    PureStrategy,
    enumerate_strategies,
    payoff_zero,
)

#: Equilibrium-membership slack: exact games get the tight bound.
MEMBERSHIP_EPS_EXACT = Fraction(1, 10**9)
MEMBERSHIP_EPS_FLOAT = 1e-7


class OracleSolveError(RuntimeError):
    """The reference linear-programming solve did not reach an optimum."""


@dataclass(frozen=True)
class MatrixGame:
    """A zero-sum matrix game; ``payoffs[r][c]`` goes to the row player."""

    row_strategies: tuple[PureStrategy, ...]
    col_strategies: tuple[PureStrategy, ...]
    payoffs: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.payoffs)
        object.__setattr__(self, "payoffs", rows)
        if len(rows) != len(self.row_strategies):
            raise ValueError("payoff matrix row count does not match strategies")
        if any(len(r) != len(self.col_strategies) for r in rows):
            raise ValueError("payoff matrix column count does not match strategies")

    @property
    def is_exact(self) -> bool:
        return all(
            isinstance(x, (int, Fraction)) and not isinstance(x, bool)
            for row in self.payoffs for x in row
        )


def build_matrix(game: CostBlottoGame, max_strategies: int = 10_000) -> MatrixGame:
    """Materialize the zero-sum companion payoff matrix of a contest.

    Rows are player A's partial assignments and columns player B's, both in
    lexicographic order.  Raises when either side would exceed
    ``max_strategies``.
    """
    rows = enumerate_strategies(game.budget_a, game.n, cap=max_strategies)
    cols = enumerate_strategies(game.budget_b, game.n, cap=max_strategies)
    payoffs = tuple(
        tuple(payoff_zero(game, s_a, s_b) for s_b in cols)
        for s_a in rows
    )
    return MatrixGame(row_strategies=tuple(rows), col_strategies=tuple(cols),
                      payoffs=payoffs)


def _simplex_max_unit(m: list[list[Fraction]]) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Maximize sum(y) subject to m @ y <= 1, y >= 0, all entries of m positive.

    Dense tableau simplex with Bland's rule, exact over Fractions.  Returns
    the optimum, the primal solution y, and the duals of the row constraints.
    """
    n_rows, n_cols = len(m), len(m[0])
    width = n_cols + n_rows + 1
    tableau = []
    for i in range(n_rows):
        row = [Fraction(x) for x in m[i]]
        row += [Fraction(int(k == i)) for k in range(n_rows)]
        row.append(Fraction(1))
        tableau.append(row)
    z = [Fraction(-1)] * n_cols + [Fraction(0)] * (n_rows + 1)
    basis = list(range(n_cols, n_cols + n_rows))

    while True:
        enter = next((j for j in range(width - 1) if z[j] < 0), None)
        if enter is None:
            break
        best_ratio = None
        leave = None
        for i in range(n_rows):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leave])):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise OracleSolveError("matrix game simplex found an unbounded direction")
        pivot = tableau[leave][enter]
        tableau[leave] = [x / pivot for x in tableau[leave]]
        for i in range(n_rows):
            if i != leave and tableau[i][enter] != 0:
                factor = tableau[i][enter]
                tableau[i] = [x - factor * y for x, y in zip(tableau[i], tableau[leave])]
        if z[enter] != 0:
            factor = z[enter]
            z = [x - factor * y for x, y in zip(z, tableau[leave])]
        basis[leave] = enter

    y = [Fraction(0)] * n_cols
    for i, var in enumerate(basis):
        if var < n_cols:
            y[var] = tableau[i][-1]
    duals = z[n_cols:n_cols + n_rows]
    return z[-1], y, duals


def _solve_exact(payoffs) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    entries = [x for row in payoffs for x in row]
    shift = 1 - min(entries)
    shifted = [[Fraction(x) + shift for x in row] for row in payoffs]
    opt, y, duals = _simplex_max_unit(shifted)
    scale = 1 / opt
    col = [p * scale for p in y]
    row = [d * scale for d in duals]
    value = scale - shift
    # exact sanity checks: both strategies must guarantee the value
    n_rows, n_cols = len(payoffs), len(payoffs[0])
    row_guarantee = min(
        sum(row[r] * payoffs[r][c] for r in range(n_rows)) for c in range(n_cols)
    )
    col_guarantee = max(
        sum(payoffs[r][c] * col[c] for c in range(n_cols)) for r in range(n_rows)
    )
    if row_guarantee != value or col_guarantee != value:
        raise OracleSolveError(
            f"exact simplex produced inconsistent strategies "
            f"({row_guarantee} / {value} / {col_guarantee})"
        )
    return value, row, col


def _solve_float(payoffs) -> tuple[float, np.ndarray, np.ndarray]:
    m = np.asarray(payoffs, dtype=float)
    shift = 1.0 - m.min()
    shifted = m + shift
    n_rows, n_cols = shifted.shape
    res_col = linprog(-np.ones(n_cols), A_ub=shifted, b_ub=np.ones(n_rows),
                      method="highs")
    if res_col.status != 0:
        raise OracleSolveError(f"column-player solve failed: {res_col.message}")
    res_row = linprog(np.ones(n_rows), A_ub=-shifted.T, b_ub=-np.ones(n_cols),
                      method="highs")
    if res_row.status != 0:
        raise OracleSolveError(f"row-player solve failed: {res_row.message}")
    scale = 1.0 / (-res_col.fun)
    value = scale - shift
    col = np.maximum(res_col.x, 0.0) * scale
    row = np.maximum(res_row.x, 0.0) / res_row.x.sum()
    return value, row / row.sum(), col / col.sum()


def _support(strategies, probs, drop_below) -> MixedStrategy:
    entries = [(s, p) for s, p in zip(strategies, probs) if p > drop_below]
    total = sum(p for _, p in entries)
    return MixedStrategy(support=tuple((s, p / total) for s, p in entries))


def matrix_game_solve(mg: MatrixGame) -> tuple[Number, MixedStrategy, MixedStrategy]:
    """Minimax value and one optimal mixed strategy per player.

    Solves ``max sum(y): M'y <= 1`` over the positively shifted matrix; the
    row player's strategy comes from the duals.  Exact matrices are solved in
    rational arithmetic, others through two floating-point LPs.
    """
    if mg.is_exact:
        value, row, col = _solve_exact(mg.payoffs)
        drop = Fraction(0)
    else:
        value, row, col = _solve_float(mg.payoffs)
        drop = 1e-12
    xi_row = _support(mg.row_strategies, row, drop)
    xi_col = _support(mg.col_strategies, col, drop)
    return value, xi_row, xi_col


def exhaustive_equilibrium_strategies(
    game: CostBlottoGame, max_strategies: int = 10_000
) -> tuple[list[PureStrategy], list[PureStrategy]]:
    """All pure equilibrium strategies of the zero-sum companion game.

    In a zero-sum game a pure strategy appears in some equilibrium exactly
    when it guarantees the game value against every pure reply, so both
    players' sets come from scanning the payoff matrix against the value.
    """
    mg = build_matrix(game, max_strategies=max_strategies)
    value, _, _ = matrix_game_solve(mg)
    eps = MEMBERSHIP_EPS_EXACT if mg.is_exact else MEMBERSHIP_EPS_FLOAT
    rows = [
        s for r, s in enumerate(mg.row_strategies)
        if min(mg.payoffs[r]) >= value - eps
    ]
    cols = [
        s for c, s in enumerate(mg.col_strategies)
        if max(mg.payoffs[r][c] for r in range(len(mg.row_strategies))) <= value + eps
    ]
    return rows, cols
