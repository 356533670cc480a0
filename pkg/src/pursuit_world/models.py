"""
Data models for the pursuit gridworld
"""

from dataclasses import dataclass, field, replace
from typing import FrozenSet, List, Optional, Tuple

from ..attention import AttentionMode
from ..mdp_core import DEFAULT_MAX_STATES, DynamicBayesNet, FactoredMdp

Cell = Tuple[int, int]

# Value of an agent variable once the agent has been removed
CAPTURED = "CAPTURED"

AGENT_DYNAMICS = ("uniform-neighbor", "stationary")

DEFAULT_DISCOUNT = 0.95
DEFAULT_CAPTURE_REWARD = 100.0
DEFAULT_PENALTY = -20.0


@dataclass(frozen=True)
class PenaltyCell:
    """A cell whose occupation costs the robot a (negative) reward"""

    cell: Cell
    reward: float = DEFAULT_PENALTY


@dataclass(frozen=True)
class AgentSpec:
    """An agent to be captured"""

    start: Cell
    dynamics: str = "uniform-neighbor"


@dataclass(frozen=True)
class GridworldSpec:
    """
    Declarative pursuit world. Cells are [x, y] with N = +y and E = +x.

    Variable 0 is the robot position; variable i >= 1 is the status of agent i.
    Invariants are checked by the loader, which reports field paths.
    """

    width: int
    height: int
    robot_start: Cell
    agents: Tuple[AgentSpec, ...]
    walls: FrozenSet[Cell] = frozenset()
    penalties: Tuple[PenaltyCell, ...] = ()
    slip_main: float = 0.7
    slip_side: float = 0.15
    capture_epsilon: float = 0.0
    capture_prob: float = 1.0
    capture_reward: float = DEFAULT_CAPTURE_REWARD
    sensor_costs: Tuple[float, ...] = ()
    modes: Tuple[Tuple[int, ...], ...] = ()
    discount: float = DEFAULT_DISCOUNT
    penalty_on_entry_only: bool = False
    observe_at_decision: bool = False
    max_states: int = DEFAULT_MAX_STATES
    name: Optional[str] = field(default=None, compare=False)

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    @property
    def n_variables(self) -> int:
        return self.n_agents + 1

    @property
    def cells(self) -> List[Cell]:
        """Free cells ordered by x, then y"""
        return [(x, y) for x in range(self.width) for y in range(self.height) if (x, y) not in self.walls]

    def is_free(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height and cell not in self.walls

    def penalty_at(self, cell: Cell) -> float:
        return sum(p.reward for p in self.penalties if p.cell == cell)

    def without_sensor_costs(self) -> "GridworldSpec":
        return replace(self, sensor_costs=tuple(0.0 for _ in self.sensor_costs))

    def __str__(self):
        label = self.name or "world"
        return f"{label} ({self.width}x{self.height}, {self.n_agents} agents)"


@dataclass(frozen=True, eq=False)
class CompiledWorld:
    """
    A pursuit world compiled to an explicit MDP.

    Attributes:
        spec: Source spec
        mdp: Enumerated FactoredMdp with actions N, S, E, W
        modes: Configured attention modes 1..m
        null_mode: Mode 0 (every variable attended)
        dbn: Per-variable conditional tables of the same dynamics
    """

    spec: GridworldSpec
    mdp: FactoredMdp
    modes: Tuple[AttentionMode, ...]
    null_mode: AttentionMode
    dbn: DynamicBayesNet

    def __str__(self):
        return f"CompiledWorld({self.spec}, {self.mdp.n_states} states, {len(self.modes)} modes)"
