"""
Compilation of a pursuit gridworld into a FactoredMdp

Each step the robot and every uncaptured agent move simultaneously and
independently. After the move, each uncaptured agent within Euclidean
distance epsilon of the robot is captured with probability p. The step
reward is capture_reward per agent captured plus the penalty of the robot's
new cell. Once every agent is captured the robot keeps moving but earns
nothing, so the all-captured states form a closed zero-reward set.
"""

from dataclasses import replace
from itertools import product
from typing import Dict, Iterator, List, Tuple
import logging
import math

from ..attention import AttentionMode, build_modes
from ..mdp_core import ConditionalTable, DynamicBayesNet, StateTuple, StateVariable, build_factored_mdp
from .models import CAPTURED, Cell, CompiledWorld, GridworldSpec

logger = logging.getLogger(__name__)

ACTIONS = ("N", "S", "E", "W")

MOVES: Dict[str, Cell] = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}

# Slip directions perpendicular to each intended move
LATERAL: Dict[str, Tuple[str, str]] = {"N": ("E", "W"), "S": ("E", "W"), "E": ("N", "S"), "W": ("N", "S")}


def _step(spec: GridworldSpec, cell: Cell, direction: str) -> Cell:
    dx, dy = MOVES[direction]
    target = (cell[0] + dx, cell[1] + dy)
    return target if spec.is_free(target) else cell


def _accumulate(distribution: Dict, value, probability: float):
    if probability > 0.0:
        distribution[value] = distribution.get(value, 0.0) + probability


def robot_distribution(spec: GridworldSpec, cell: Cell, action: str) -> Dict[Cell, float]:
    """Next robot cell: intended move with slip_main, each lateral move with slip_side; blocked moves stay"""
    distribution: Dict[Cell, float] = {}
    _accumulate(distribution, _step(spec, cell, action), spec.slip_main)
    for side in LATERAL[action]:
        _accumulate(distribution, _step(spec, cell, side), spec.slip_side)
    return distribution


def agent_move_distribution(spec: GridworldSpec, agent: int, cell: Cell) -> Dict[Cell, float]:
    """Next agent cell before the capture check"""
    if spec.agents[agent].dynamics == "stationary":
        return {cell: 1.0}
    distribution: Dict[Cell, float] = {}
    for direction in ACTIONS:
        _accumulate(distribution, _step(spec, cell, direction), 0.25)
    return distribution


def capture_probability(spec: GridworldSpec, robot: Cell, agent: Cell) -> float:
    return spec.capture_prob if math.dist(robot, agent) <= spec.capture_epsilon else 0.0


def agent_distribution(spec: GridworldSpec, agent: int, status, robot_next: Cell) -> Dict[object, float]:
    """Next status of one agent given the robot's next cell (movement, then capture check)"""
    if status == CAPTURED:
        return {CAPTURED: 1.0}
    distribution: Dict[object, float] = {}
    for cell, probability in agent_move_distribution(spec, agent, status).items():
        caught = capture_probability(spec, robot_next, cell)
        _accumulate(distribution, CAPTURED, probability * caught)
        _accumulate(distribution, cell, probability * (1.0 - caught))
    return distribution


def step_reward(spec: GridworldSpec, state: StateTuple, next_state: StateTuple) -> float:
    if all(status == CAPTURED for status in state[1:]):
        return 0.0
    captures = sum(1 for old, new in zip(state[1:], next_state[1:]) if old != CAPTURED and new == CAPTURED)
    reward = spec.capture_reward * captures
    robot, robot_next = state[0], next_state[0]
    if not (spec.penalty_on_entry_only and robot_next == robot):
        reward += spec.penalty_at(robot_next)
    return reward


def successors(spec: GridworldSpec, state: StateTuple, action: str) -> Iterator[Tuple[StateTuple, float, float]]:
    """Joint outcomes (next state, probability, reward) of one step"""
    for robot_next, p_robot in robot_distribution(spec, state[0], action).items():
        per_agent = [
            list(agent_distribution(spec, i, status, robot_next).items()) for i, status in enumerate(state[1:])
        ]
        for outcome in product(*per_agent):
            probability = p_robot
            for _, p in outcome:
                probability *= p
            next_state = (robot_next,) + tuple(status for status, _ in outcome)
            yield next_state, probability, step_reward(spec, state, next_state)


def state_variables(spec: GridworldSpec) -> Tuple[StateVariable, ...]:
    cells = tuple(spec.cells)
    agents = tuple(StateVariable(f"X{i}", cells + (CAPTURED,)) for i in range(1, spec.n_agents + 1))
    return (StateVariable("X0", cells),) + agents


def build_dbn(spec: GridworldSpec, variables: Tuple[StateVariable, ...]) -> DynamicBayesNet:
    """
    Conditional tables of the pursuit dynamics.

    The robot depends on its own cell and the action. Agent i depends on its
    own status and, through the capture check, on the robot's next cell.
    """
    cells = spec.cells
    robot_rows = {(a, (cell,), ()): robot_distribution(spec, cell, a) for a in ACTIONS for cell in cells}
    factors: List[ConditionalTable] = [ConditionalTable(0, (0,), (), robot_rows)]
    for i in range(1, spec.n_agents + 1):
        rows = {
            (None, (status,), (robot_next,)): agent_distribution(spec, i - 1, status, robot_next)
            for status in variables[i].domain
            for robot_next in cells
        }
        factors.append(ConditionalTable(i, (i,), (0,), rows, action_independent=True))
    return DynamicBayesNet(variables=variables, actions=ACTIONS, factors=tuple(factors))


def compile_world(spec: GridworldSpec) -> CompiledWorld:
    """
    Enumerate the reachable pursuit states and build the MDP, modes and tables.

    Raises:
        StateSpaceTooLargeError: If more than `spec.max_states` states are reachable
    """
    variables = state_variables(spec)
    initial = (spec.robot_start,) + tuple(agent.start for agent in spec.agents)
    mdp = build_factored_mdp(
        variables,
        ACTIONS,
        initial,
        lambda state, action: successors(spec, state, action),
        spec.discount,
        max_states=spec.max_states,
    )
    modes = build_modes(spec.modes, spec.sensor_costs)
    world = CompiledWorld(
        spec=spec,
        mdp=mdp,
        modes=tuple(modes),
        null_mode=AttentionMode.null(spec.sensor_costs),
        dbn=build_dbn(spec, variables),
    )
    logger.info(f"Compiled {world}")
    return world


def mirror_cell(spec: GridworldSpec, cell: Cell) -> Cell:
    return (spec.width - 1 - cell[0], cell[1])


def mirror_spec(spec: GridworldSpec) -> GridworldSpec:
    """The same world reflected left-right (E and W swap)"""
    return replace(
        spec,
        walls=frozenset(mirror_cell(spec, c) for c in spec.walls),
        penalties=tuple(replace(p, cell=mirror_cell(spec, p.cell)) for p in spec.penalties),
        robot_start=mirror_cell(spec, spec.robot_start),
        agents=tuple(replace(a, start=mirror_cell(spec, a.start)) for a in spec.agents),
        name=f"{spec.name}-mirrored" if spec.name else None,
    )


def mirror_state(spec: GridworldSpec, state: StateTuple) -> StateTuple:
    return tuple(value if value == CAPTURED else mirror_cell(spec, value) for value in state)
