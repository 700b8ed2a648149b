"""Routing games, equilibria and demand-independent optimal tolls."""

from ._core import (
    DiotError,
    Network,
    SolveResult,
    SweepReport,
    TollConstruction,
    budget_diot,
    load_network,
    marginal_cost_tolls,
    nonnegative_diot_dag,
    parse_network,
    price_of_anarchy,
    social_cost,
    solve_equilibrium,
    solve_optimum,
    trivial_diot,
    verify_diot,
)

__all__ = [
    "DiotError",
    "Network",
    "SolveResult",
    "SweepReport",
    "TollConstruction",
    "budget_diot",
    "load_network",
    "marginal_cost_tolls",
    "nonnegative_diot_dag",
    "parse_network",
    "price_of_anarchy",
    "social_cost",
    "solve_equilibrium",
    "solve_optimum",
    "trivial_diot",
    "verify_diot",
]
