"""JSON configuration for games and parameter sweeps.

A game config names both players' budgets, per-battlefield valuations and
assignment costs, and each player's obtainment cost.  Cost specs are
``{"kind": "none" | "linear" | "quadratic" | "table", ...}`` and valuation
specs ``{"kind": "sign" | "table", ...}``; a single spec may stand in for a
per-battlefield list when every battlefield is the same.  Sweep specs give
inclusive ``min``/``max``/``interval`` grids in the style of the experiment
harness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .game import CostBlottoGame, CostFunction, Valuation


class ConfigError(ValueError):
    """A configuration file is malformed; the message names the field."""


def _require(data: dict, key: str, path: str):
    if key not in data:
        raise ConfigError(f"{path}: missing required field {key!r}")
    return data[key]


def _number(x, path: str):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {x!r}")
    return x


def _count(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise ConfigError(f"{path}: expected a nonnegative integer, got {x!r}")
    return x


def parse_cost_spec(spec, budget: int, path: str) -> CostFunction:
    if not isinstance(spec, dict):
        raise ConfigError(f"{path}: expected an object, got {spec!r}")
    kind = _require(spec, "kind", path)
    try:
        if kind == "none":
            return CostFunction.zero(budget)
        if kind in ("linear", "quadratic"):
            coeff = _number(_require(spec, "coeff", path), f"{path}.coeff")
            ctor = CostFunction.linear if kind == "linear" else CostFunction.quadratic
            return ctor(coeff, budget)
        if kind == "table":
            values = _require(spec, "values", path)
            if not isinstance(values, list):
                raise ConfigError(f"{path}.values: expected a list")
            values = [_number(x, f"{path}.values[{t}]") for t, x in enumerate(values)]
            if len(values) != budget + 1:
                raise ConfigError(
                    f"{path}.values: has {len(values)} entries, expected {budget + 1}"
                )
            return CostFunction.from_table(values)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: unknown cost kind {kind!r}")


def parse_valuation_spec(spec, budget_a: int, budget_b: int, path: str) -> Valuation:
    if not isinstance(spec, dict):
        raise ConfigError(f"{path}: expected an object, got {spec!r}")
    kind = _require(spec, "kind", path)
    try:
        if kind == "sign":
            return Valuation.sign_form(_number(_require(spec, "weight", path), f"{path}.weight"))
        if kind == "table":
            rows = _require(spec, "rows", path)
            if (not isinstance(rows, list) or len(rows) != budget_a + 1
                    or any(not isinstance(r, list) or len(r) != budget_b + 1 for r in rows)):
                raise ConfigError(
                    f"{path}.rows: expected {budget_a + 1} rows of {budget_b + 1} numbers"
                )
            rows = [
                [_number(x, f"{path}.rows[{a}][{b}]") for b, x in enumerate(row)]
                for a, row in enumerate(rows)
            ]
            return Valuation.from_table(rows)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: unknown valuation kind {kind!r}")


def _per_battlefield(entry, n: int, path: str) -> list:
    """Accept either one spec for all battlefields or a list of n specs."""
    if isinstance(entry, dict):
        return [entry] * n
    if isinstance(entry, list):
        if len(entry) != n:
            raise ConfigError(f"{path}: has {len(entry)} entries, expected n={n}")
        return entry
    raise ConfigError(f"{path}: expected an object or a list of {n} objects")


def parse_game_config(data: dict) -> CostBlottoGame:
    """Build a validated game from parsed JSON."""
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object at the top level")
    n = _count(_require(data, "n", "config"), "config.n")
    budget_a = _count(_require(data, "budget_A", "config"), "config.budget_A")
    budget_b = _count(_require(data, "budget_B", "config"), "config.budget_B")
    vals = [
        parse_valuation_spec(spec, budget_a, budget_b, f"config.valuations[{i}]")
        for i, spec in enumerate(_per_battlefield(_require(data, "valuations", "config"), n, "config.valuations"))
    ]
    costs_a = [
        parse_cost_spec(spec, budget_a, f"config.assign_costs_A[{i}]")
        for i, spec in enumerate(_per_battlefield(_require(data, "assign_costs_A", "config"), n, "config.assign_costs_A"))
    ]
    costs_b = [
        parse_cost_spec(spec, budget_b, f"config.assign_costs_B[{i}]")
        for i, spec in enumerate(_per_battlefield(_require(data, "assign_costs_B", "config"), n, "config.assign_costs_B"))
    ]
    obtain_a = parse_cost_spec(_require(data, "obtain_cost_A", "config"), budget_a, "config.obtain_cost_A")
    obtain_b = parse_cost_spec(_require(data, "obtain_cost_B", "config"), budget_b, "config.obtain_cost_B")
    try:
        return CostBlottoGame(
            n=n, budget_a=budget_a, budget_b=budget_b,
            valuations=tuple(vals),
            assign_costs_a=tuple(costs_a), assign_costs_b=tuple(costs_b),
            obtain_cost_a=obtain_a, obtain_cost_b=obtain_b,
        )
    except ValueError as exc:
        raise ConfigError(f"config: {exc}") from exc


def _json_number(x):
    if isinstance(x, Fraction):
        return float(x)
    return x


def cost_to_spec(cost: CostFunction) -> dict:
    if cost.kind == "table":
        return {"kind": "table", "values": [_json_number(x) for x in cost.table]}
    return {"kind": cost.kind, "coeff": _json_number(cost.coefficient)}


def valuation_to_spec(val: Valuation) -> dict:
    if val.kind == "sign":
        return {"kind": "sign", "weight": _json_number(val.weight)}
    return {"kind": "table", "rows": [[_json_number(x) for x in row] for row in val.rows]}


def game_to_config(game: CostBlottoGame) -> dict:
    """Serialize a game back to its JSON form (rationals become floats)."""
    return {
        "n": game.n,
        "budget_A": game.budget_a,
        "budget_B": game.budget_b,
        "valuations": [valuation_to_spec(v) for v in game.valuations],
        "assign_costs_A": [cost_to_spec(c) for c in game.assign_costs_a],
        "assign_costs_B": [cost_to_spec(c) for c in game.assign_costs_b],
        "obtain_cost_A": cost_to_spec(game.obtain_cost_a),
        "obtain_cost_B": cost_to_spec(game.obtain_cost_b),
    }


def load_game(path: str | Path) -> CostBlottoGame:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_game_config(data)


@dataclass(frozen=True)
class GridRange:
    """Inclusive arithmetic grid ``start, start+interval, ... <= stop``."""

    start: float
    stop: float
    interval: float

    def __post_init__(self):
        if self.interval <= 0:
            raise ConfigError(f"grid interval must be positive, got {self.interval!r}")
        if self.stop < self.start:
            raise ConfigError(f"grid is empty: max {self.stop!r} below min {self.start!r}")

    def values(self) -> list[float]:
        out = []
        k = 0
        while True:
            x = self.start + k * self.interval
            if x > self.stop + 1e-9:
                return out
            out.append(x)
            k += 1


@dataclass(frozen=True)
class SweepSpec:
    """Grids over battlefield count, both budgets, and inverse unit cost."""

    n: GridRange
    budget_a: GridRange
    budget_b: GridRange
    c0_inv: GridRange

    def points(self) -> list[tuple[int, int, int, float]]:
        """All grid points in row-major (n, D_A, D_B, c0_inv) order."""
        return [
            (int(n), int(da), int(db), c)
            for n in self.n.values()
            for da in self.budget_a.values()
            for db in self.budget_b.values()
            for c in self.c0_inv.values()
        ]


def _parse_range(data, path: str, integral: bool) -> GridRange:
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object with min/max/interval")
    lo = _number(_require(data, "min", path), f"{path}.min")
    hi = _number(_require(data, "max", path), f"{path}.max")
    step = _number(data.get("interval", 1), f"{path}.interval")
    if integral:
        for name, x in (("min", lo), ("max", hi), ("interval", step)):
            if x != int(x):
                raise ConfigError(f"{path}.{name}: expected an integer, got {x!r}")
    return GridRange(start=lo, stop=hi, interval=step)


def parse_sweep_spec(data: dict) -> SweepSpec:
    if not isinstance(data, dict):
        raise ConfigError("sweep: expected a JSON object at the top level")
    return SweepSpec(
        n=_parse_range(_require(data, "n", "sweep"), "sweep.n", integral=True),
        budget_a=_parse_range(_require(data, "budget_A", "sweep"), "sweep.budget_A", integral=True),
        budget_b=_parse_range(_require(data, "budget_B", "sweep"), "sweep.budget_B", integral=True),
        c0_inv=_parse_range(_require(data, "c0_inv", "sweep"), "sweep.c0_inv", integral=False),
    )


def load_sweep_spec(path: str | Path) -> SweepSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"sweep spec file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_sweep_spec(data)


def sweep_point_game(n: int, budget_a: int, budget_b: int, c0_inv: float) -> CostBlottoGame:
    """The sweep family: sign valuations, no assignment costs, linear
    obtainment cost ``1 / c0_inv`` for both players."""
    if c0_inv <= 0:
        raise ConfigError(f"c0_inv must be positive, got {c0_inv!r}")
    c0 = 1.0 / c0_inv
    return CostBlottoGame(
        n=n, budget_a=budget_a, budget_b=budget_b,
        valuations=(Valuation.sign_form(1),) * n,
        assign_costs_a=(CostFunction.zero(budget_a),) * n,
        assign_costs_b=(CostFunction.zero(budget_b),) * n,
        obtain_cost_a=CostFunction.linear(c0, budget_a),
        obtain_cost_b=CostFunction.linear(c0, budget_b),
    )
