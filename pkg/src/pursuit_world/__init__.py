"""
Pursuit World Module

Declarative gridworld where a slipping robot captures randomly moving agents,
compiled into a FactoredMdp with its attention modes and conditional tables.
"""

from .exceptions import ParseError, ValidationError
from .models import CAPTURED, AGENT_DYNAMICS, PenaltyCell, AgentSpec, GridworldSpec, CompiledWorld
from .loader import load_spec, load_spec_file, parse_spec
from .compiler import (
    ACTIONS,
    robot_distribution,
    agent_distribution,
    compile_world,
    build_dbn,
    mirror_spec,
    mirror_state,
)

__all__ = [
    "ParseError",
    "ValidationError",
    "CAPTURED",
    "AGENT_DYNAMICS",
    "PenaltyCell",
    "AgentSpec",
    "GridworldSpec",
    "CompiledWorld",
    "load_spec",
    "load_spec_file",
    "parse_spec",
    "ACTIONS",
    "robot_distribution",
    "agent_distribution",
    "compile_world",
    "build_dbn",
    "mirror_spec",
    "mirror_state",
]
