"""Constraint-preserving QAOA simulator (QUBO, XY, IF and IF+XY pipelines)."""

from ._core import (
    MemoryCapExceeded,
    Model,
    Problem,
    multi_knapsack,
    problem_from_json,
    prosumer,
    raar,
    read_instance,
    register_size,
    slack_weights,
    solve_exhaustive,
    tae_schedule,
    tts,
)

__all__ = [
    "MemoryCapExceeded",
    "Model",
    "Problem",
    "multi_knapsack",
    "problem_from_json",
    "prosumer",
    "raar",
    "read_instance",
    "register_size",
    "slack_weights",
    "solve_exhaustive",
    "tae_schedule",
    "tts",
]
