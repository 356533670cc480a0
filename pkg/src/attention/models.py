"""
Data models for attention modes and attentional MDPs
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sps

from ..mdp_core import STOCHASTIC_ATOL, FactoredMdp, InvalidModelError, Policy, StateTuple
from .exceptions import InvalidDisaggregationError


@dataclass(frozen=True)
class AttentionMode:
    """
    A spotlight attention mode.

    Attributes:
        index: Mode number k (0 = null attention, every variable observed)
        attended: Sorted indices I_k of the monitored state variables
        sensor_costs: Per-variable sensing cost c_i, shared by every mode
    """

    index: int
    attended: Tuple[int, ...]
    sensor_costs: Tuple[float, ...]

    def __post_init__(self):
        attended = tuple(sorted(int(i) for i in self.attended))
        costs = tuple(float(c) for c in self.sensor_costs)
        object.__setattr__(self, "attended", attended)
        object.__setattr__(self, "sensor_costs", costs)
        if self.index < 0:
            raise InvalidModelError(f"mode index must be nonnegative, got {self.index}")
        if not attended:
            raise InvalidModelError(f"mode {self.index} attends no variable")
        if len(set(attended)) != len(attended):
            raise InvalidModelError(f"mode {self.index} lists a variable twice")
        if attended[0] < 0 or attended[-1] >= len(costs):
            raise InvalidModelError(f"mode {self.index} attends a variable outside 0..{len(costs) - 1}")
        if any(not np.isfinite(c) or c < 0.0 for c in costs):
            raise InvalidModelError("sensor costs must be finite and nonnegative")
        if self.index == 0 and len(attended) != len(costs):
            raise InvalidModelError("the null mode must attend every variable")

    @classmethod
    def null(cls, sensor_costs: Sequence[float]) -> "AttentionMode":
        return cls(index=0, attended=tuple(range(len(sensor_costs))), sensor_costs=tuple(sensor_costs))

    @property
    def n_variables(self) -> int:
        return len(self.sensor_costs)

    @property
    def unattended(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n_variables) if i not in self.attended)

    @property
    def deactivation_reward(self) -> float:
        """C_k: per-step saving from the sensors this mode switches off"""
        return float(sum(self.sensor_costs[j] for j in self.unattended))

    @property
    def is_null(self) -> bool:
        return len(self.attended) == self.n_variables

    def __str__(self):
        return f"mode {self.index} {list(self.attended)} (C={self.deactivation_reward:g})"


@dataclass(frozen=True, eq=False)
class Disaggregation:
    """
    D_k(x|y) stored as a sparse (Y, X) row-stochastic matrix.

    Attributes:
        mode: Attention mode this distribution belongs to
        observed_states: Observed tuples y, in row order
        observed_of: Row index of project(mode, x) for every full state id x
        matrix: D_k with D[y, x] = D_k(x|y)
    """

    mode: AttentionMode
    observed_states: Tuple[StateTuple, ...]
    observed_of: np.ndarray
    matrix: sps.csr_matrix

    def __post_init__(self):
        matrix = sps.csr_matrix(self.matrix, dtype=np.float64)
        observed_of = np.asarray(self.observed_of, dtype=np.int64)
        observed_of.setflags(write=False)
        if matrix.shape != (len(self.observed_states), observed_of.size):
            raise InvalidDisaggregationError(
                f"disaggregation has shape {matrix.shape}, expected {(len(self.observed_states), observed_of.size)}"
            )
        coo = matrix.tocoo()
        support = coo.data > 0.0
        if np.any(coo.data < 0.0):
            raise InvalidDisaggregationError("disaggregation probabilities must be nonnegative")
        if np.any(observed_of[coo.col[support]] != coo.row[support]):
            raise InvalidDisaggregationError(f"mode {self.mode.index}: mass on a state outside the preimage")
        row_sums = np.asarray(matrix.sum(axis=1)).ravel()
        if np.any(np.abs(row_sums - 1.0) > STOCHASTIC_ATOL):
            raise InvalidDisaggregationError(f"mode {self.mode.index}: a row does not sum to 1")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "observed_of", observed_of)


@dataclass(frozen=True, eq=False)
class AttentionalMdp:
    """
    The aggregated MDP M_k over observed tuples, and its subpolicy once solved.

    Attributes:
        mode: Attention mode
        mdp: MDP over the observed tuples (variables = attended variables)
        observed_of: Observed-state id of every full state of the original MDP
        subpolicy: Optimal policy pi_k over observed tuples (None until solved)
        values: Optimal values over observed tuples (None until solved)
    """

    mode: AttentionMode
    mdp: FactoredMdp
    observed_of: np.ndarray
    subpolicy: Optional[Policy] = None
    values: Optional[np.ndarray] = None

    @property
    def observed_states(self) -> Tuple[StateTuple, ...]:
        return self.mdp.states

    @property
    def is_solved(self) -> bool:
        return self.subpolicy is not None

    def __str__(self):
        status = "solved" if self.is_solved else "unsolved"
        return f"AttentionalMdp({self.mode}, {self.mdp.n_states} observed states, {status})"
