"""
Rollout Simulator Module

Monte-Carlo execution of attention-shift policies: logged rollouts with
attention timelines and batched estimates of the goal and information returns.
"""

from .models import StepRecord, TrajectoryLog, ReturnEstimate, ReturnsReport
from .simulator import (
    SimulationWorld,
    make_streams,
    sample_next,
    run_phase,
    rollout,
    estimate_returns,
)

__all__ = [
    "StepRecord",
    "TrajectoryLog",
    "ReturnEstimate",
    "ReturnsReport",
    "SimulationWorld",
    "make_streams",
    "sample_next",
    "run_phase",
    "rollout",
    "estimate_returns",
]
