"""
Exact dynamic programming on finite MDPs

Value iteration and iterative policy evaluation. Both share one stopping
rule: iterate until the sup-norm change drops below tol * (1 - gamma) / gamma.
At that point the Bellman residual of the returned vector is at most
(1 - gamma) * tol and its distance to the fixed point is at most tol.
"""

from typing import Callable, Optional, Tuple
import logging

import numpy as np

from .exceptions import DiscountOneError, NonConvergenceError
from .models import DEFAULT_MAX_ITERS, DEFAULT_TOL, FactoredMdp, Policy
from .chains import induce_chain


logger = logging.getLogger(__name__)


def require_discounted(gamma: float, operation: str):
    if gamma >= 1.0:
        raise DiscountOneError(operation)


def stopping_threshold(tol: float, gamma: float) -> float:
    """Sup-norm change below which an iterate is within tol of the fixed point"""
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    return tol * (1.0 - gamma) / gamma


def tie_tolerance(tol: float, gamma: float) -> float:
    """Q-value gap under which two actions count as tied"""
    return tol * (1.0 - gamma)


def greedy_argmax(q_values: np.ndarray, tie_tol: float = 0.0) -> np.ndarray:
    """
    Row-wise argmax that prefers the lowest column among near-maximal entries.

    Args:
        q_values: Array of shape (S, n_choices)
        tie_tol: Entries within this distance of the row maximum count as tied

    Returns:
        Integer array of chosen columns, shape (S,)
    """
    best = q_values.max(axis=1, keepdims=True)
    return np.argmax(q_values >= best - tie_tol, axis=1)


def _iterate(
    step: Callable[[np.ndarray], np.ndarray],
    initial_values: np.ndarray,
    gamma: float,
    tol: float,
    max_iters: int,
    label: str,
) -> Tuple[np.ndarray, int]:
    threshold = stopping_threshold(tol, gamma)
    values = np.array(initial_values, dtype=np.float64)
    delta = np.inf
    for sweep in range(1, max_iters + 1):
        updated = step(values)
        delta = float(np.max(np.abs(updated - values))) if values.size else 0.0
        values = updated
        if delta <= threshold:
            logger.debug(f"{label}: converged after {sweep} sweeps (last change {delta:.3e})")
            return values, sweep
    raise NonConvergenceError(label, max_iters, delta, tol)


def bellman_fixed_point(
    q_fn: Callable[[np.ndarray], np.ndarray],
    initial_values: np.ndarray,
    gamma: float,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    label: str = "value iteration",
) -> Tuple[np.ndarray, int]:
    """
    Iterate V <- max_a Q(V)[:, a] to its fixed point.

    Args:
        q_fn: Maps a value vector to the (S, n_choices) array of backed-up values;
            must be a gamma-contraction in the sup norm
        initial_values: Starting vector (warm start)
        gamma: Contraction modulus
        tol: Target accuracy
        max_iters: Maximum number of sweeps
        label: Name used in logs and errors

    Returns:
        (values, sweeps)

    Raises:
        NonConvergenceError: If max_iters sweeps do not reach the tolerance
    """
    return _iterate(lambda values: q_fn(values).max(axis=1), initial_values, gamma, tol, max_iters, label)


def linear_fixed_point(
    apply_fn: Callable[[np.ndarray], np.ndarray],
    initial_values: np.ndarray,
    gamma: float,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    label: str = "policy evaluation",
) -> Tuple[np.ndarray, int]:
    """Richardson iteration V <- apply_fn(V) for an affine gamma-contraction (V may be a matrix of columns)"""
    return _iterate(apply_fn, initial_values, gamma, tol, max_iters, label)


def value_iteration(
    mdp: FactoredMdp,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    initial_values: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, Policy]:
    """
    Solve the Bellman optimality equation.

    Args:
        mdp: Discounted MDP (gamma < 1)
        tol: Bellman residual bound for the returned value function
        max_iters: Maximum number of sweeps
        initial_values: Optional warm start

    Returns:
        (V, greedy deterministic policy); ties go to the lowest action index

    Raises:
        DiscountOneError: If gamma = 1
        NonConvergenceError: If max_iters sweeps do not reach the tolerance
    """
    require_discounted(mdp.discount, "value_iteration")
    start = np.zeros(mdp.n_states) if initial_values is None else initial_values
    values, sweeps = bellman_fixed_point(mdp.q_values, start, mdp.discount, tol, max_iters)
    choice = greedy_argmax(mdp.q_values(values), tie_tolerance(tol, mdp.discount))
    logger.info(f"Value iteration on {mdp.n_states} states converged in {sweeps} sweeps")
    return values, Policy.deterministic(choice, mdp.n_actions)


def evaluate_policy(
    mdp: FactoredMdp,
    pi: Policy,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> np.ndarray:
    """
    Value of a fixed policy, V = r_pi + gamma P_pi V, by Richardson sweeps.

    Raises:
        DiscountOneError: If gamma = 1
        NonConvergenceError: If max_iters sweeps do not reach the tolerance
    """
    require_discounted(mdp.discount, "evaluate_policy")
    chain = induce_chain(mdp, pi)
    gamma = mdp.discount

    def backup(values: np.ndarray) -> np.ndarray:
        return chain.reward + gamma * (chain.matrix @ values)

    values, _ = linear_fixed_point(backup, np.zeros(mdp.n_states), gamma, tol, max_iters)
    return values
