"""
Shift Planner Module

Attention-shift semi-MDP: sustained subpolicy actions, weighted-sum solve with
gamma^t discounting, goal/information decomposition, sustain-bound search and
Pareto sweeps.
"""

from .exceptions import InvalidWeightsError, BoundNotReachedError
from .models import (
    SustainAction,
    ScalarizationWeights,
    ShiftPolicy,
    AttentionShiftMdp,
    ShiftSolution,
    SustainBoundResult,
    ParetoPoint,
)
from .planner import (
    info_reward_table,
    build_shift_mdp,
    shift_q_values,
    solve_shift,
    evaluate_objectives,
    sustain_bound_search,
    pareto_sweep,
)

__all__ = [
    "InvalidWeightsError",
    "BoundNotReachedError",
    "SustainAction",
    "ScalarizationWeights",
    "ShiftPolicy",
    "AttentionShiftMdp",
    "ShiftSolution",
    "SustainBoundResult",
    "ParetoPoint",
    "info_reward_table",
    "build_shift_mdp",
    "shift_q_values",
    "solve_shift",
    "evaluate_objectives",
    "sustain_bound_search",
    "pareto_sweep",
]
