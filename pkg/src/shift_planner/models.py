"""
Data models for the attention-shift semi-MDP
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sps

from ..attention import AttentionalMdp
from ..mdp_core import FactoredMdp, InducedChain, InvalidModelError, propagate, t_step_kernel
from .exceptions import InvalidWeightsError

WEIGHT_ATOL = 1e-12


@dataclass(frozen=True)
class SustainAction:
    """(pi_k, t): run the mode-k subpolicy for t steps before observing again"""

    mode_index: int
    duration: int

    def __post_init__(self):
        if self.mode_index < 1:
            raise InvalidModelError("the null mode cannot be sustained; mode_index must be >= 1")
        if self.duration < 1:
            raise InvalidModelError(f"sustain duration must be >= 1, got {self.duration}")

    def __str__(self):
        return f"(pi_{self.mode_index}, {self.duration})"


@dataclass(frozen=True)
class ScalarizationWeights:
    """Weights [w1, w2] of the goal and information objectives"""

    w1: float
    w2: float

    def __post_init__(self):
        if not (self.w1 > 0.0 and self.w2 > 0.0):
            raise InvalidWeightsError(f"weights must both be positive, got [{self.w1}, {self.w2}]")
        if abs(self.w1 + self.w2 - 1.0) > WEIGHT_ATOL:
            raise InvalidWeightsError(f"weights must sum to 1, got [{self.w1}, {self.w2}]")

    @classmethod
    def from_w1(cls, w1: float) -> "ScalarizationWeights":
        return cls(float(w1), 1.0 - float(w1))

    def __str__(self):
        return f"[{self.w1:g}, {self.w2:g}]"


@dataclass(frozen=True, eq=False)
class ShiftPolicy:
    """
    Deterministic attention-shift policy x -> (pi_k, t).

    Attributes:
        modes: Mode index k >= 1 for every base state
        durations: Sustain time t >= 1 for every base state
    """

    modes: np.ndarray
    durations: np.ndarray

    def __post_init__(self):
        modes = np.array(self.modes, dtype=np.int64)
        durations = np.array(self.durations, dtype=np.int64)
        if modes.shape != durations.shape or modes.ndim != 1:
            raise InvalidModelError("shift policy needs one mode and one duration per state")
        if modes.size and (modes.min() < 1 or durations.min() < 1):
            raise InvalidModelError("shift policy modes and durations must be >= 1")
        modes.setflags(write=False)
        durations.setflags(write=False)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "durations", durations)

    @classmethod
    def constant(cls, n_states: int, mode_index: int, duration: int) -> "ShiftPolicy":
        """Always (pi_k, t)"""
        return cls(np.full(n_states, mode_index), np.full(n_states, duration))

    @classmethod
    def from_flat(cls, flat_actions: np.ndarray, horizon: int) -> "ShiftPolicy":
        flat_actions = np.asarray(flat_actions, dtype=np.int64)
        return cls(flat_actions // horizon + 1, flat_actions % horizon + 1)

    @property
    def n_states(self) -> int:
        return self.modes.size

    def action_at(self, state_id: int) -> SustainAction:
        return SustainAction(int(self.modes[state_id]), int(self.durations[state_id]))

    def same_as(self, other: "ShiftPolicy") -> bool:
        return np.array_equal(self.modes, other.modes) and np.array_equal(self.durations, other.durations)


@dataclass(frozen=True, eq=False)
class AttentionShiftMdp:
    """
    Semi-MDP over the base states whose actions are sustained subpolicies.

    Attributes:
        base: Original MDP
        modes: Solved attentional MDPs of modes 1..m
        chains: Chain of each lifted subpolicy on the base MDP
        horizon: Largest sustain time T
        goal_reward: R^G_T, shape (m, T, S); entry [k-1, t-1] is the t-step truncated return of mode k
        info_reward: R^I_T, shape (m, T)
        observe_at_decision: Whether the first step of each phase is a full observation with no saving
    """

    base: FactoredMdp
    modes: Tuple[AttentionalMdp, ...]
    chains: Tuple[InducedChain, ...]
    horizon: int
    goal_reward: np.ndarray
    info_reward: np.ndarray
    observe_at_decision: bool = False
    _kernels: Dict[Tuple[int, int], sps.csr_matrix] = field(default_factory=dict, init=False, repr=False)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def n_states(self) -> int:
        return self.base.n_states

    @property
    def n_actions(self) -> int:
        return self.n_modes * self.horizon

    @property
    def gamma(self) -> float:
        return self.base.discount

    @property
    def discount_powers(self) -> np.ndarray:
        """gamma^t for t = 1..T"""
        return np.power(self.gamma, np.arange(1, self.horizon + 1, dtype=np.float64))

    @property
    def actions(self) -> List[SustainAction]:
        """All sustain actions in flat order (k-1) * T + (t-1)"""
        return [SustainAction(k, t) for k in range(1, self.n_modes + 1) for t in range(1, self.horizon + 1)]

    def kernel(self, mode_index: int, duration: int) -> sps.csr_matrix:
        """P_pi_k^t, built from the cached (k, t-1) kernel when available"""
        if not (1 <= mode_index <= self.n_modes and 1 <= duration <= self.horizon):
            raise ValueError(f"no sustain action (pi_{mode_index}, {duration}) in {self}")
        key = (mode_index, duration)
        if key not in self._kernels:
            chain = self.chains[mode_index - 1]
            previous = self._kernels.get((mode_index, duration - 1))
            if previous is not None:
                self._kernels[key] = sps.csr_matrix(previous @ chain.matrix)
            else:
                self._kernels[key] = t_step_kernel(chain, duration)
        return self._kernels[key]

    def propagate(self, values: np.ndarray) -> np.ndarray:
        """
        Expected next-decision values under every sustain action.

        Args:
            values: Array (S,) or (S, c) over base states

        Returns:
            Array (m, T) + values.shape whose entry [k-1, t-1] is P_pi_k^t @ values
        """
        out = np.empty((self.n_modes, self.horizon) + np.shape(values))
        for k, chain in enumerate(self.chains):
            propagate(chain, values, self.horizon, out=out[k])
        return out

    def restrict(self, horizon: int) -> "AttentionShiftMdp":
        """The same semi-MDP with sustain times capped at a smaller T"""
        if not 1 <= horizon <= self.horizon:
            raise ValueError(f"cannot restrict T = {self.horizon} to {horizon}")
        restricted = AttentionShiftMdp(
            base=self.base,
            modes=self.modes,
            chains=self.chains,
            horizon=horizon,
            goal_reward=self.goal_reward[:, :horizon],
            info_reward=self.info_reward[:, :horizon],
            observe_at_decision=self.observe_at_decision,
        )
        restricted._kernels.update({key: m for key, m in self._kernels.items() if key[1] <= horizon})
        return restricted

    def __str__(self):
        return f"AttentionShiftMdp(T={self.horizon}, {self.n_modes} modes, {self.n_states} states)"


@dataclass(frozen=True, eq=False)
class ShiftSolution:
    """
    Optimal attention-shift policy for one (T, w) and its decomposed objectives.

    Attributes:
        horizon: T
        weights: Scalarization weights
        values: Optimal scalarized value V_hat over base states
        policy: Greedy shift policy (ties: lowest k, then lowest t)
        goal_values: G, expected discounted task reward of the policy
        info_values: I, expected discounted sensor-deactivation reward of the policy
        sweeps: Bellman sweeps used by the solve
        duration_counts: Number of states choosing each duration 1..T
    """

    horizon: int
    weights: ScalarizationWeights
    values: np.ndarray
    policy: ShiftPolicy
    goal_values: np.ndarray
    info_values: np.ndarray
    sweeps: int
    duration_counts: np.ndarray

    @property
    def max_duration_used(self) -> int:
        """Largest sustain time chosen at any state"""
        return int(self.policy.durations.max())

    def at(self, state_id: int) -> Tuple[float, float, float]:
        """(G, I, V_hat) at one state"""
        return float(self.goal_values[state_id]), float(self.info_values[state_id]), float(self.values[state_id])


@dataclass(frozen=True, eq=False)
class SustainBoundResult:
    """
    Outcome of the incremental-T search for the optimal sustain bound.

    Attributes:
        bound: T* (a lower bound when `bound_reached` is False)
        bound_reached: Whether the value gap closed before T_max
        solutions: ShiftSolution per solved T
    """

    bound: int
    bound_reached: bool
    solutions: Dict[int, ShiftSolution]


@dataclass(frozen=True)
class ParetoPoint:
    """One weight of a Pareto sweep"""

    weights: ScalarizationWeights
    goal: float
    info: float
    solution: Optional[ShiftSolution] = field(default=None, compare=False, repr=False)
