"""Equilibrium solver for discrete resource contests with costs.

Players split obtained resources across battlefields, paying per-battlefield
assignment costs and a cost for the total obtained.  The package reduces such
a game to an all-resources-committed companion with one extra battlefield,
solves it as a polynomial-size linear program over flows in a layered graph,
and recovers mixed equilibrium strategies plus extremal equilibrium
statistics (resources obtained, total expenditure).
"""

from .config import (
    ConfigError,
    GridRange,
    SweepSpec,
    game_to_config,
    load_game,
    load_sweep_spec,
    parse_game_config,
    parse_sweep_spec,
    sweep_point_game,
)
from .game import (
    CostBlottoGame,
    CostFunction,
    EnumerationCapError,
    InvalidStrategyError,
    MixedStrategy,
    Valuation,
    enumerate_strategies,
    expected_payoff,
    mix_strategies,
    payoff_costs,
    payoff_zero,
    swap_players,
)
from .minimax import (
    InvalidFlowError,
    LayeredGraph,
    LpConstructionError,
    MinimaxLP,
    SolveResult,
    StrategyFlow,
    build_minimax_lp,
    equilibrium_statistic_bounds,
    expenditure_statistic,
    lp_stats,
    resource_statistic,
    solve,
    solve_equilibrium_statistic,
)
from .oracle import (
    MatrixGame,
    OracleSolveError,
    build_matrix,
    exhaustive_equilibrium_strategies,
    matrix_game_solve,
)
from .reduction import (
    SunkCostGame,
    build_sunk_cost,
    map_strategy,
    obtained_resources,
    unmap_strategy,
)
from .solver import LinearProgram, SolverFailureError, get_backend, write_lp_text
from .strategy import (
    Marginals,
    best_response_value,
    certify_equilibrium,
    decompose_flow,
    marginals_from_flow,
    marginals_from_mixed,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CostBlottoGame",
    "CostFunction",
    "EnumerationCapError",
    "GridRange",
    "InvalidFlowError",
    "InvalidStrategyError",
    "LayeredGraph",
    "LinearProgram",
    "LpConstructionError",
    "Marginals",
    "MatrixGame",
    "MinimaxLP",
    "MixedStrategy",
    "OracleSolveError",
    "SolveResult",
    "SolverFailureError",
    "StrategyFlow",
    "SunkCostGame",
    "SweepSpec",
    "Valuation",
    "best_response_value",
    "build_matrix",
    "build_minimax_lp",
    "build_sunk_cost",
    "certify_equilibrium",
    "decompose_flow",
    "enumerate_strategies",
    "equilibrium_statistic_bounds",
    "exhaustive_equilibrium_strategies",
    "expected_payoff",
    "expenditure_statistic",
    "game_to_config",
    "get_backend",
    "load_game",
    "load_sweep_spec",
    "lp_stats",
    "map_strategy",
    "marginals_from_flow",
    "marginals_from_mixed",
    "matrix_game_solve",
    "mix_strategies",
    "obtained_resources",
    "parse_game_config",
    "parse_sweep_spec",
    "payoff_costs",
    "payoff_zero",
    "resource_statistic",
    "solve",
    "solve_equilibrium_statistic",
    "swap_players",
    "sweep_point_game",
    "unmap_strategy",
    "write_lp_text",
]
