"""
Reachable-state enumeration for factored MDPs

Builds an explicit FactoredMdp from a successor function by breadth-first
search from the initial state, then renumbers the reachable states in a
canonical order so that ids do not depend on discovery order.
"""

from collections import deque
from typing import Callable, Dict, Iterable, List, Sequence, Tuple
import logging

import numpy as np
import scipy.sparse as sps

from .exceptions import InvalidModelError, StateSpaceTooLargeError
from .models import FactoredMdp, StateTuple, StateVariable


logger = logging.getLogger(__name__)

# successors(state, action) -> iterable of (next_state, probability, reward)
SuccessorFn = Callable[[StateTuple, str], Iterable[Tuple[StateTuple, float, float]]]

DEFAULT_MAX_STATES = 500_000


def canonical_key(variables: Sequence[StateVariable]) -> Callable[[StateTuple], Tuple[int, ...]]:
    """Sort key ordering state tuples lexicographically by domain position"""
    indexes = [variable.value_index for variable in variables]

    def key(state: StateTuple) -> Tuple[int, ...]:
        return tuple(index[value] for index, value in zip(indexes, state))

    return key


def canonical_order(states: Iterable[StateTuple], variables: Sequence[StateVariable]) -> List[StateTuple]:
    return sorted(states, key=canonical_key(variables))


def build_factored_mdp(
    variables: Sequence[StateVariable],
    actions: Sequence[str],
    initial: StateTuple,
    successors: SuccessorFn,
    discount: float,
    max_states: int = DEFAULT_MAX_STATES,
) -> FactoredMdp:
    """
    Enumerate the states reachable from `initial` and assemble the sparse model.

    Args:
        variables: Ordered state variables
        actions: Ordered action names
        initial: Initial state tuple x_0
        successors: Outcome generator; probabilities of repeated next states are summed
            and R(x, a) is the probability-weighted reward
        discount: Discount factor
        max_states: Cap on the number of enumerated states

    Returns:
        FactoredMdp over the reachable states in canonical order

    Raises:
        StateSpaceTooLargeError: If more than `max_states` states are reachable
    """
    initial = tuple(initial)
    outcomes: Dict[StateTuple, List[Dict[StateTuple, float]]] = {}
    rewards: Dict[StateTuple, List[float]] = {}

    frontier = deque([initial])
    seen = {initial}
    while frontier:
        state = frontier.popleft()
        rows, expected = [], []
        for action in actions:
            row: Dict[StateTuple, float] = {}
            total_reward = 0.0
            for next_state, probability, reward in successors(state, action):
                if probability == 0.0:
                    continue
                next_state = tuple(next_state)
                row[next_state] = row.get(next_state, 0.0) + probability
                total_reward += probability * reward
                if next_state not in seen:
                    seen.add(next_state)
                    if len(seen) > max_states:
                        raise StateSpaceTooLargeError(max_states, f"while expanding {state!r}")
                    frontier.append(next_state)
            rows.append(row)
            expected.append(total_reward)
        outcomes[state] = rows
        rewards[state] = expected

    states = canonical_order(seen, variables)
    index = {state: i for i, state in enumerate(states)}
    n_states, n_actions = len(states), len(actions)

    matrices = []
    for a in range(n_actions):
        row_ids: List[int] = []
        col_ids: List[int] = []
        probs: List[float] = []
        for i, state in enumerate(states):
            for next_state, probability in outcomes[state][a].items():
                row_ids.append(i)
                col_ids.append(index[next_state])
                probs.append(probability)
        matrices.append(sps.csr_matrix((probs, (row_ids, col_ids)), shape=(n_states, n_states)))

    reward = np.array([rewards[state] for state in states], dtype=np.float64).reshape(n_states, n_actions)

    try:
        mdp = FactoredMdp(
            variables=tuple(variables),
            states=tuple(states),
            actions=tuple(actions),
            transitions=tuple(matrices),
            reward=reward,
            initial_state=index[initial],
            discount=discount,
        )
    except InvalidModelError:
        logger.error("Successor function produced an invalid model")
        raise

    logger.info(
        f"Enumerated {n_states} reachable states of {product_size(variables)} in the product "
        f"({sum(m.nnz for m in matrices)} transitions)"
    )
    return mdp


def product_size(variables: Sequence[StateVariable]) -> int:
    """Size of the full Cartesian product of the variable domains"""
    size = 1
    for variable in variables:
        size *= len(variable.domain)
    return size
