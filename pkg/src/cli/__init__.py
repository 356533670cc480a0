"""
CLI Module

Experiment commands (solve, sweep-t, pareto, simulate, replay), their result
and manifest models, and the atomic output writers.
"""

from .models import RunManifest, CommandResult
from .exporters import atomic_write_text, write_json, write_jsonl, write_csv, read_json
from .commands import (
    COMMANDS,
    DEFAULT_PARETO_WEIGHTS,
    EXIT_OK,
    EXIT_INVALID,
    EXIT_NON_CONVERGENCE,
    EXIT_STATE_CAP,
    MANIFEST_NAME,
    RunContext,
    exit_code_for,
    resolve_world_config,
    prepare_context,
    cmd_solve,
    cmd_sweep_t,
    cmd_pareto,
    cmd_simulate,
    replay_manifest,
)

__all__ = [
    "RunManifest",
    "CommandResult",
    "atomic_write_text",
    "write_json",
    "write_jsonl",
    "write_csv",
    "read_json",
    "COMMANDS",
    "DEFAULT_PARETO_WEIGHTS",
    "EXIT_OK",
    "EXIT_INVALID",
    "EXIT_NON_CONVERGENCE",
    "EXIT_STATE_CAP",
    "MANIFEST_NAME",
    "RunContext",
    "exit_code_for",
    "resolve_world_config",
    "prepare_context",
    "cmd_solve",
    "cmd_sweep_t",
    "cmd_pareto",
    "cmd_simulate",
    "replay_manifest",
]
