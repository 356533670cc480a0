"""
Policy-induced Markov chains and their multi-step quantities
"""

from typing import Optional
import logging

import numpy as np
import scipy.sparse as sps

from .exceptions import InvalidModelError
from .models import FactoredMdp, InducedChain, Policy


logger = logging.getLogger(__name__)


def induce_chain(mdp: FactoredMdp, pi: Policy) -> InducedChain:
    """
    Markov chain of the MDP under a policy.

    P_pi(x'|x) = sum_a pi(a|x) P(x'|x, a) and r_pi(x) = sum_a pi(a|x) R(x, a).
    """
    if pi.probabilities.shape != (mdp.n_states, mdp.n_actions):
        raise InvalidModelError(
            f"policy shape {pi.probabilities.shape} does not match the MDP ({mdp.n_states}, {mdp.n_actions})"
        )
    matrix = sps.csr_matrix((mdp.n_states, mdp.n_states))
    for a, transition in enumerate(mdp.transitions):
        weights = pi.probabilities[:, a]
        if not weights.any():
            continue
        matrix = matrix + sps.diags(weights) @ transition
    reward = np.sum(pi.probabilities * mdp.reward, axis=1)
    return InducedChain(matrix=sps.csr_matrix(matrix), reward=reward)


def _require_steps(t: int):
    if int(t) != t or t < 1:
        raise ValueError(f"number of steps must be an integer >= 1, got {t}")


def t_step_kernel(chain: InducedChain, t: int) -> sps.csr_matrix:
    """P_pi^t, built by repeated right-multiplication"""
    _require_steps(t)
    kernel = chain.matrix.copy()
    for _ in range(int(t) - 1):
        kernel = kernel @ chain.matrix
    return sps.csr_matrix(kernel)


def truncated_returns(chain: InducedChain, gamma: float, horizon: int) -> np.ndarray:
    """
    Expected discounted reward over the first t steps, for every t = 1..horizon.

    Returns:
        Array of shape (horizon, S); row t-1 holds g_t with g_1 = r_pi and
        g_t = r_pi + gamma P_pi g_{t-1}
    """
    _require_steps(horizon)
    returns = np.empty((int(horizon), chain.n_states))
    returns[0] = chain.reward
    for t in range(1, int(horizon)):
        returns[t] = chain.reward + gamma * (chain.matrix @ returns[t - 1])
    return returns


def truncated_discounted_return(chain: InducedChain, gamma: float, t: int) -> np.ndarray:
    """E_pi[sum_{j=1}^{t} gamma^(j-1) r_j | x] for every start state x"""
    return truncated_returns(chain, gamma, t)[-1]


def propagate(chain: InducedChain, values: np.ndarray, steps: int, out: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Expected values after 1..steps transitions, without forming P^t.

    Args:
        chain: Induced chain
        values: Vector (S,) or matrix (S, k) of values over next states
        steps: Largest number of transitions
        out: Optional preallocated array of shape (steps,) + values.shape

    Returns:
        Array whose entry t-1 is P_pi^t @ values
    """
    _require_steps(steps)
    if out is None:
        out = np.empty((int(steps),) + np.shape(values))
    current = values
    for t in range(int(steps)):
        current = chain.matrix @ current
        out[t] = current
    return out
