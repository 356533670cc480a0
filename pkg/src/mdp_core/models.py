"""
Data models for finite factored-state MDPs
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Hashable, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sps

from .exceptions import InvalidModelError


# Absolute tolerance for every stochasticity check
STOCHASTIC_ATOL = 1e-9

# Solver defaults
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 100_000

StateTuple = Tuple[Hashable, ...]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64)
    array.setflags(write=False)
    return array


def check_row_stochastic(matrix: sps.spmatrix, atol: float, what: str):
    """Raise InvalidModelError unless every row of a sparse matrix is a distribution"""
    matrix = sps.csr_matrix(matrix)
    if matrix.nnz and (matrix.data.min() < -atol or matrix.data.max() > 1.0 + atol):
        raise InvalidModelError(f"{what}: probabilities must lie in [0, 1]")
    row_sums = np.asarray(matrix.sum(axis=1)).ravel()
    bad = np.flatnonzero(np.abs(row_sums - 1.0) > atol)
    if bad.size:
        raise InvalidModelError(f"{what}: row {int(bad[0])} sums to {row_sums[bad[0]]!r}, expected 1")


@dataclass(frozen=True)
class StateVariable:
    """A state variable with a finite, ordered value domain"""

    name: str
    domain: Tuple[Hashable, ...]

    def __post_init__(self):
        if len(self.domain) < 1:
            raise InvalidModelError(f"variable {self.name!r} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise InvalidModelError(f"variable {self.name!r} has duplicate domain values")

    @cached_property
    def value_index(self) -> Dict[Hashable, int]:
        return {value: i for i, value in enumerate(self.domain)}

    def __str__(self):
        return f"{self.name} (|domain|={len(self.domain)})"


@dataclass(frozen=True, eq=False)
class FactoredMdp:
    """
    Explicit finite MDP whose states are tuples of per-variable values.

    Attributes:
        variables: Ordered state variables
        states: Canonical enumeration of state tuples; position = dense state id
        actions: Ordered action names
        transitions: One sparse (S, S) row-stochastic matrix per action
        reward: Dense (S, A) reward table R(x, a)
        initial_state: Dense id of x_0
        discount: gamma in (0, 1]
    """

    variables: Tuple[StateVariable, ...]
    states: Tuple[StateTuple, ...]
    actions: Tuple[str, ...]
    transitions: Tuple[sps.csr_matrix, ...]
    reward: np.ndarray
    initial_state: int
    discount: float

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(sps.csr_matrix(p, dtype=np.float64) for p in self.transitions))
        object.__setattr__(self, "reward", _frozen(self.reward))
        self._validate()

    def _validate(self):
        n_states, n_actions = len(self.states), len(self.actions)
        if n_states == 0 or n_actions == 0:
            raise InvalidModelError("an MDP needs at least one state and one action")
        if not 0.0 < self.discount <= 1.0:
            raise InvalidModelError(f"discount must lie in (0, 1], got {self.discount}")
        if not 0 <= self.initial_state < n_states:
            raise InvalidModelError(f"initial state {self.initial_state} out of range")
        if len(self.state_index) != n_states:
            raise InvalidModelError("state enumeration contains duplicates")
        for state in self.states:
            if len(state) != len(self.variables):
                raise InvalidModelError(f"state {state!r} does not match the {len(self.variables)} variables")
            for variable, value in zip(self.variables, state):
                if value not in variable.value_index:
                    raise InvalidModelError(f"value {value!r} is not in the domain of {variable.name!r}")
        if len(self.transitions) != n_actions:
            raise InvalidModelError("need exactly one transition matrix per action")
        for name, matrix in zip(self.actions, self.transitions):
            if matrix.shape != (n_states, n_states):
                raise InvalidModelError(f"transition matrix of {name!r} has shape {matrix.shape}")
            check_row_stochastic(matrix, STOCHASTIC_ATOL, f"transitions of action {name!r}")
        if self.reward.shape != (n_states, n_actions):
            raise InvalidModelError(f"reward table has shape {self.reward.shape}, expected {(n_states, n_actions)}")
        if not np.all(np.isfinite(self.reward)):
            raise InvalidModelError("reward table contains non-finite entries")

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @cached_property
    def state_index(self) -> Dict[StateTuple, int]:
        return {state: i for i, state in enumerate(self.states)}

    def index_of(self, state: Sequence[Hashable]) -> int:
        """Dense id of a state tuple"""
        try:
            return self.state_index[tuple(state)]
        except KeyError:
            raise InvalidModelError(f"state {tuple(state)!r} is not in the enumeration") from None

    @cached_property
    def stacked_transitions(self) -> sps.csr_matrix:
        """All action matrices stacked vertically; row a*S + x holds P(.|x, a)"""
        return sps.vstack(self.transitions, format="csr")

    def q_values(self, values: np.ndarray) -> np.ndarray:
        """Q(x, a) = R(x, a) + gamma * sum_x' P(x'|x, a) V(x'), shape (S, A)"""
        expected = (self.stacked_transitions @ values).reshape(self.n_actions, self.n_states).T
        return self.reward + self.discount * expected

    @cached_property
    def terminal_mask(self) -> np.ndarray:
        """
        Largest set of states that is closed under every action and earns zero reward.

        Absorbing zero-reward states are a special case.
        """
        inside = np.all(self.reward == 0.0, axis=1)
        while True:
            outside = (~inside).astype(np.float64)
            leaks = np.zeros(self.n_states, dtype=bool)
            for matrix in self.transitions:
                leaks |= (matrix @ outside) > 0.0
            shrunk = inside & ~leaks
            if np.array_equal(shrunk, inside):
                shrunk.setflags(write=False)
                return shrunk
            inside = shrunk

    @classmethod
    def from_arrays(
        cls,
        transitions: np.ndarray,
        reward: np.ndarray,
        discount: float,
        initial_state: int = 0,
        actions: Optional[Sequence[str]] = None,
    ) -> "FactoredMdp":
        """
        Build a single-variable MDP from dense arrays.

        Args:
            transitions: Array of shape (A, S, S)
            reward: Array of shape (S, A)
            discount: Discount factor
            initial_state: Dense id of the initial state
            actions: Optional action names (defaults to "a0", "a1", ...)

        Returns:
            FactoredMdp whose single variable "s" ranges over 0..S-1
        """
        transitions = np.asarray(transitions, dtype=np.float64)
        n_actions, n_states = transitions.shape[0], transitions.shape[1]
        names = tuple(actions) if actions is not None else tuple(f"a{i}" for i in range(n_actions))
        return cls(
            variables=(StateVariable("s", tuple(range(n_states))),),
            states=tuple((i,) for i in range(n_states)),
            actions=names,
            transitions=tuple(sps.csr_matrix(p) for p in transitions),
            reward=np.asarray(reward, dtype=np.float64),
            initial_state=initial_state,
            discount=discount,
        )

    def __str__(self):
        return f"FactoredMdp({self.n_states} states, {self.n_actions} actions, gamma={self.discount})"


@dataclass(frozen=True, eq=False)
class Policy:
    """
    Markovian randomized policy stored as a dense (S, A) matrix of action probabilities.

    Deterministic policies are point distributions.
    """

    probabilities: np.ndarray

    def __post_init__(self):
        probabilities = _frozen(self.probabilities)
        if probabilities.ndim != 2:
            raise InvalidModelError("policy matrix must be two-dimensional")
        if probabilities.size and (probabilities.min() < 0.0 or probabilities.max() > 1.0 + STOCHASTIC_ATOL):
            raise InvalidModelError("policy probabilities must lie in [0, 1]")
        bad = np.flatnonzero(np.abs(probabilities.sum(axis=1) - 1.0) > STOCHASTIC_ATOL)
        if bad.size:
            raise InvalidModelError(f"policy row {int(bad[0])} does not sum to 1")
        object.__setattr__(self, "probabilities", probabilities)

    @classmethod
    def deterministic(cls, actions: Sequence[int], n_actions: int) -> "Policy":
        actions = np.asarray(actions, dtype=np.int64)
        matrix = np.zeros((actions.size, n_actions))
        matrix[np.arange(actions.size), actions] = 1.0
        return cls(matrix)

    @classmethod
    def uniform(cls, n_states: int, n_actions: int) -> "Policy":
        return cls(np.full((n_states, n_actions), 1.0 / n_actions))

    @property
    def n_states(self) -> int:
        return self.probabilities.shape[0]

    @property
    def n_actions(self) -> int:
        return self.probabilities.shape[1]

    @property
    def is_deterministic(self) -> bool:
        return bool(np.all(np.isclose(self.probabilities.max(axis=1), 1.0, atol=STOCHASTIC_ATOL)))

    @cached_property
    def actions(self) -> np.ndarray:
        """Most probable action per state (the chosen action for deterministic policies)"""
        chosen = np.argmax(self.probabilities, axis=1)
        chosen.setflags(write=False)
        return chosen


@dataclass(frozen=True, eq=False)
class InducedChain:
    """Markov chain induced by a policy: P_pi and the expected one-step reward r_pi"""

    matrix: sps.csr_matrix
    reward: np.ndarray

    def __post_init__(self):
        matrix = sps.csr_matrix(self.matrix, dtype=np.float64)
        check_row_stochastic(matrix, STOCHASTIC_ATOL, "induced chain")
        reward = _frozen(self.reward)
        if reward.shape != (matrix.shape[0],):
            raise InvalidModelError("chain reward vector does not match the matrix")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "reward", reward)

    @property
    def n_states(self) -> int:
        return self.matrix.shape[0]
