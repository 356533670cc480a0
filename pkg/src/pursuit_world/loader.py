"""
World-config loading and validation

Parses the YAML world document into a GridworldSpec. Every schema or
invariant violation is reported with the dotted path of the offending field.
"""

from dataclasses import replace
from pathlib import Path
from typing import Any, List, Mapping, Optional, Union
import logging

import yaml

from ..mdp_core import DEFAULT_MAX_STATES
from .exceptions import ParseError, ValidationError
from .models import (
    AGENT_DYNAMICS,
    DEFAULT_CAPTURE_REWARD,
    DEFAULT_DISCOUNT,
    DEFAULT_PENALTY,
    AgentSpec,
    Cell,
    GridworldSpec,
    PenaltyCell,
)


logger = logging.getLogger(__name__)

SLIP_ATOL = 1e-12

TOP_LEVEL_KEYS = {
    "name",
    "grid",
    "walls",
    "penalties",
    "robot",
    "agents",
    "capture",
    "sensors",
    "attention",
    "discount",
    "penalty_on_entry_only",
    "max_states",
}

SECTION_KEYS = {
    "grid": {"width", "height"},
    "robot": {"start", "slip_main", "slip_side"},
    "capture": {"epsilon", "prob", "reward"},
    "sensors": {"costs", "observe_at_decision"},
    "attention": {"modes"},
}
AGENT_KEYS = {"start", "dynamics"}
PENALTY_KEYS = {"cell", "reward"}


def _section(document: Mapping, key: str, required: bool = False) -> Mapping:
    value = document.get(key)
    if value is None:
        if required:
            raise ValidationError(key, "section is required")
        return {}
    if not isinstance(value, Mapping):
        raise ValidationError(key, "must be a mapping")
    _check_keys(value, SECTION_KEYS[key], key)
    return value


def _check_keys(mapping: Mapping, allowed: set, path: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ValidationError(f"{path}.{sorted(map(str, unknown))[0]}", "unknown field")


def _int(value: Any, path: str, minimum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(path, f"must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValidationError(path, f"must be >= {minimum}, got {value}")
    return value


def _float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(path, f"must be a number, got {value!r}")
    return float(value)


def _bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ValidationError(path, f"must be true or false, got {value!r}")
    return value


def _cell(value: Any, path: str, width: int, height: int) -> Cell:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValidationError(path, f"must be a cell [x, y], got {value!r}")
    x, y = _int(value[0], f"{path}[0]"), _int(value[1], f"{path}[1]")
    if not (0 <= x < width and 0 <= y < height):
        raise ValidationError(path, f"cell {[x, y]} lies outside the {width}x{height} grid")
    return (x, y)


def _list(value: Any, path: str) -> List:
    if value is None:
        return []
    if not isinstance(value, list):
        raise ValidationError(path, "must be a list")
    return value


def parse_spec(document: Mapping, name: Optional[str] = None) -> GridworldSpec:
    """
    Build a validated GridworldSpec from an already-parsed mapping.

    Raises:
        ValidationError: On any schema or invariant violation
    """
    unknown = set(document) - TOP_LEVEL_KEYS
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown field")

    grid = _section(document, "grid", required=True)
    width = _int(grid.get("width"), "grid.width", minimum=1)
    height = _int(grid.get("height"), "grid.height", minimum=1)

    walls = frozenset(
        _cell(cell, f"walls[{i}]", width, height) for i, cell in enumerate(_list(document.get("walls"), "walls"))
    )

    penalties = []
    for i, entry in enumerate(_list(document.get("penalties"), "penalties")):
        path = f"penalties[{i}]"
        if not isinstance(entry, Mapping):
            raise ValidationError(path, "must be a mapping with cell and reward")
        _check_keys(entry, PENALTY_KEYS, path)
        cell = _cell(entry.get("cell"), f"{path}.cell", width, height)
        if cell in walls:
            raise ValidationError(f"{path}.cell", f"cell {list(cell)} is a wall")
        penalties.append(PenaltyCell(cell, _float(entry.get("reward", DEFAULT_PENALTY), f"{path}.reward")))

    robot = _section(document, "robot", required=True)
    robot_start = _cell(robot.get("start"), "robot.start", width, height)
    if robot_start in walls:
        raise ValidationError("robot.start", "robot starts inside a wall")
    slip_main = _float(robot.get("slip_main", 0.7), "robot.slip_main")
    slip_side = _float(robot.get("slip_side", 0.15), "robot.slip_side")
    if not 0.0 <= slip_main <= 1.0:
        raise ValidationError("robot.slip_main", f"must lie in [0, 1], got {slip_main}")
    if not 0.0 <= slip_side <= 0.5:
        raise ValidationError("robot.slip_side", f"must lie in [0, 0.5], got {slip_side}")
    if abs(slip_main + 2.0 * slip_side - 1.0) > SLIP_ATOL:
        raise ValidationError(
            "robot.slip_side", f"slip_main + 2 * slip_side must equal 1, got {slip_main + 2.0 * slip_side}"
        )

    agents = []
    agent_entries = _list(document.get("agents"), "agents")
    if not agent_entries:
        raise ValidationError("agents", "at least one agent is required")
    for i, entry in enumerate(agent_entries):
        path = f"agents[{i}]"
        if not isinstance(entry, Mapping):
            raise ValidationError(path, "must be a mapping with start and dynamics")
        _check_keys(entry, AGENT_KEYS, path)
        start = _cell(entry.get("start"), f"{path}.start", width, height)
        if start in walls:
            raise ValidationError(f"{path}.start", "agent starts inside a wall")
        dynamics = entry.get("dynamics", "uniform-neighbor")
        if dynamics not in AGENT_DYNAMICS:
            raise ValidationError(
                f"{path}.dynamics", f"unknown dynamics {dynamics!r}; expected one of {list(AGENT_DYNAMICS)}"
            )
        agents.append(AgentSpec(start, dynamics))
    n_variables = len(agents) + 1

    capture = _section(document, "capture")
    epsilon = _float(capture.get("epsilon", 0.0), "capture.epsilon")
    if epsilon < 0.0:
        raise ValidationError("capture.epsilon", f"must be >= 0, got {epsilon}")
    prob = _float(capture.get("prob", 1.0), "capture.prob")
    if not 0.0 < prob <= 1.0:
        raise ValidationError("capture.prob", f"must lie in (0, 1], got {prob}")
    capture_reward = _float(capture.get("reward", DEFAULT_CAPTURE_REWARD), "capture.reward")

    sensors = _section(document, "sensors")
    costs = [_float(c, f"sensors.costs[{i}]") for i, c in enumerate(_list(sensors.get("costs"), "sensors.costs"))]
    if not costs:
        costs = [0.0] * n_variables
    if len(costs) != n_variables:
        raise ValidationError("sensors.costs", f"need one cost per variable ({n_variables}), got {len(costs)}")
    for i, c in enumerate(costs):
        if c < 0.0:
            raise ValidationError(f"sensors.costs[{i}]", f"must be >= 0, got {c}")
    observe_at_decision = _bool(sensors.get("observe_at_decision", False), "sensors.observe_at_decision")

    attention = _section(document, "attention")
    mode_entries = _list(attention.get("modes"), "attention.modes")
    if not mode_entries:
        mode_entries = [[0, i] for i in range(1, n_variables)]
    modes = []
    for i, entry in enumerate(mode_entries):
        path = f"attention.modes[{i}]"
        indices = [_int(v, f"{path}[{j}]") for j, v in enumerate(_list(entry, path))]
        if not indices:
            raise ValidationError(path, "a mode must attend at least one variable")
        if len(set(indices)) != len(indices):
            raise ValidationError(path, "a mode lists a variable twice")
        if min(indices) < 0 or max(indices) >= n_variables:
            raise ValidationError(path, f"variable indices must lie in 0..{n_variables - 1}")
        modes.append(tuple(sorted(indices)))

    discount = _float(document.get("discount", DEFAULT_DISCOUNT), "discount")
    if not 0.0 < discount <= 1.0:
        raise ValidationError("discount", f"must lie in (0, 1], got {discount}")

    return GridworldSpec(
        width=width,
        height=height,
        robot_start=robot_start,
        agents=tuple(agents),
        walls=walls,
        penalties=tuple(penalties),
        slip_main=slip_main,
        slip_side=slip_side,
        capture_epsilon=epsilon,
        capture_prob=prob,
        capture_reward=capture_reward,
        sensor_costs=tuple(costs),
        modes=tuple(modes),
        discount=discount,
        penalty_on_entry_only=_bool(document.get("penalty_on_entry_only", False), "penalty_on_entry_only"),
        observe_at_decision=observe_at_decision,
        max_states=_int(document.get("max_states", DEFAULT_MAX_STATES), "max_states", minimum=1),
        name=name if name is not None else document.get("name"),
    )


def load_spec(text: str, name: Optional[str] = None) -> GridworldSpec:
    """
    Parse and validate a YAML world document.

    Args:
        text: Document text
        name: Optional world name (overrides the document's `name`)

    Raises:
        ParseError: If the text is not a YAML mapping
        ValidationError: On any schema or invariant violation
    """
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ParseError(f"world document is not valid YAML: {e}") from e
    if not isinstance(document, dict):
        raise ParseError("world document must be a mapping at the top level")
    return parse_spec(document, name)


def load_spec_file(path: Union[str, Path]) -> GridworldSpec:
    """Read a world document from disk; the file stem names the world unless the document does"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read world config {path}: {e}") from e
    spec = load_spec(text)
    if spec.name is None:
        spec = replace(spec, name=path.stem)
    logger.info(f"Loaded {spec} from {path}")
    return spec
