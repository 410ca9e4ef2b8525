"""Pluggable linear-programming backend behind a minimal model type.

The default backend wraps scipy's HiGHS interface.  A different registered
backend can be selected with the ``COSTBLOTTO_LP_BACKEND`` environment
variable.  Models can also be exported to the textual LP file format for
offline solving or debugging.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERIC_FAILURE = "numeric-failure"

BACKEND_ENV_VAR = "COSTBLOTTO_LP_BACKEND"


class SolverFailureError(RuntimeError):
    """A backend failed to return a usable optimum."""


@dataclass(frozen=True)
class LinearProgram:
    """A sparse LP: optimize ``objective @ x`` under row and bound constraints.

    ``row_sense`` holds one of ``"<"``, ``"="``, ``">"`` per constraint row.
    Variable bounds may be infinite.
    """

    sense: str
    objective: np.ndarray
    a: sp.csr_matrix
    row_sense: np.ndarray
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"objective sense must be 'min' or 'max', got {self.sense!r}")
        n_rows, n_cols = self.a.shape
        if len(self.objective) != n_cols or len(self.lower) != n_cols or len(self.upper) != n_cols:
            raise ValueError("objective/bounds length does not match the column count")
        if len(self.row_sense) != n_rows or len(self.rhs) != n_rows:
            raise ValueError("row sense/rhs length does not match the row count")

    @property
    def num_vars(self) -> int:
        return self.a.shape[1]

    @property
    def num_constraints(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class BackendSolution:
    status: str
    x: np.ndarray | None
    objective: float | None
    message: str = ""


class ScipyHighsBackend:
    """scipy.optimize.linprog with one of the HiGHS methods.

    Feasibility tolerances are requested well below the package-wide flow
    tolerance so returned solutions survive the post-solve conservation
    checks.
    """

    def __init__(self, method: str = "highs"):
        self.method = method
        self.options = {
            "primal_feasibility_tolerance": 1e-9,
            "dual_feasibility_tolerance": 1e-9,
        }

    def solve(self, lp: LinearProgram) -> BackendSolution:
        c = lp.objective if lp.sense == "min" else -lp.objective
        eq = lp.row_sense == "="
        le = lp.row_sense == "<"
        ge = lp.row_sense == ">"
        a_ub = b_ub = a_eq = b_eq = None
        if le.any() or ge.any():
            a_ub = sp.vstack(
                [lp.a[le], -lp.a[ge]] if ge.any() else [lp.a[le]], format="csr"
            )
            b_ub = np.concatenate([lp.rhs[le], -lp.rhs[ge]])
        if eq.any():
            a_eq = lp.a[eq]
            b_eq = lp.rhs[eq]
        res = linprog(
            c,
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=np.column_stack([lp.lower, lp.upper]),
            method=self.method,
            options=self.options,
        )
        status = {
            0: OPTIMAL,
            1: NUMERIC_FAILURE,
            2: INFEASIBLE,
            3: UNBOUNDED,
            4: NUMERIC_FAILURE,
        }.get(res.status, NUMERIC_FAILURE)
        if status != OPTIMAL:
            return BackendSolution(status=status, x=None, objective=None,
                                   message=str(res.message))
        objective = res.fun if lp.sense == "min" else -res.fun
        return BackendSolution(status=OPTIMAL, x=np.asarray(res.x, dtype=float),
                               objective=float(objective), message=str(res.message))


_BACKENDS = {
    "highs": lambda: ScipyHighsBackend("highs"),
    "highs-ds": lambda: ScipyHighsBackend("highs-ds"),
    "highs-ipm": lambda: ScipyHighsBackend("highs-ipm"),
}

DEFAULT_BACKEND = "highs"


def get_backend(name: str | None = None):
    """Resolve a backend by name, or by ``COSTBLOTTO_LP_BACKEND``, or default."""
    if name is None:
        name = os.environ.get(BACKEND_ENV_VAR, DEFAULT_BACKEND)
    try:
        return _BACKENDS[name]()
    except KeyError:
        raise ValueError(
            f"unknown LP backend {name!r}; available: {sorted(_BACKENDS)}"
        ) from None


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _terms(cols: np.ndarray, vals: np.ndarray) -> str:
    parts = []
    for col, val in zip(cols, vals):
        op = "-" if val < 0 else "+"
        parts.append(f"{op} {_fmt(abs(val))} x{col}")
    return " ".join(parts) if parts else "+ 0 x0"


def write_lp_text(lp: LinearProgram) -> str:
    """Serialize a model to the textual LP file format.

    Rows are named ``c0..cK`` in model order and variables ``x0..xN``; the
    output is deterministic for a given model.
    """
    out = ["Maximize" if lp.sense == "max" else "Minimize"]
    nz = np.nonzero(lp.objective)[0]
    out.append(f" obj: {_terms(nz, lp.objective[nz])}")
    out.append("Subject To")
    a = lp.a.tocsr()
    ops = {"<": "<=", "=": "=", ">": ">="}
    for k in range(lp.num_constraints):
        start, end = a.indptr[k], a.indptr[k + 1]
        out.append(
            f" c{k}: {_terms(a.indices[start:end], a.data[start:end])} "
            f"{ops[str(lp.row_sense[k])]} {_fmt(lp.rhs[k])}"
        )
    out.append("Bounds")
    for j in range(lp.num_vars):
        lo, hi = lp.lower[j], lp.upper[j]
        if lo == 0 and hi == np.inf:
            continue  # LP-format default bound
        if lo == hi:
            out.append(f" x{j} = {_fmt(lo)}")
        elif lo == -np.inf and hi == np.inf:
            out.append(f" x{j} free")
        else:
            lo_s = "-infinity" if lo == -np.inf else _fmt(lo)
            hi_s = "+infinity" if hi == np.inf else _fmt(hi)
            out.append(f" {lo_s} <= x{j} <= {hi_s}")
    out.append("End")
    return "\n".join(out) + "\n"
