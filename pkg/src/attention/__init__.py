"""
Attention Module

Spotlight attention modes, disaggregation distributions and the attentional
MDPs obtained by abstracting a factored MDP onto the attended variables.
"""

from .exceptions import EmptyPreimageError, ModeNotParentClosedError, InvalidDisaggregationError
from .models import AttentionMode, Disaggregation, AttentionalMdp
from .abstraction import (
    build_modes,
    project,
    preimage,
    observation_partition,
    uniform_disaggregation,
    build_attentional_mdp,
    build_attentional_mdp_factored,
    solve_mode,
    solve_modes,
    lift_policy,
)

__all__ = [
    "EmptyPreimageError",
    "ModeNotParentClosedError",
    "InvalidDisaggregationError",
    "AttentionMode",
    "Disaggregation",
    "AttentionalMdp",
    "build_modes",
    "project",
    "preimage",
    "observation_partition",
    "uniform_disaggregation",
    "build_attentional_mdp",
    "build_attentional_mdp_factored",
    "solve_mode",
    "solve_modes",
    "lift_policy",
]
