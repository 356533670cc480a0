"""
Attention-shift planning

Builds the semi-MDP whose actions sustain one attentional subpolicy for t
steps, solves its weighted-sum Bellman equation with gamma^t continuation
discounting, decomposes the optimal policy into goal and information values,
searches for the optimal sustain bound and sweeps scalarization weights.
"""

from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from ..attention import AttentionalMdp, lift_policy
from ..mdp_core import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    FactoredMdp,
    InvalidModelError,
    bellman_fixed_point,
    greedy_argmax,
    induce_chain,
    linear_fixed_point,
    tie_tolerance,
    truncated_returns,
)
from ..mdp_core.solver import require_discounted
from .exceptions import BoundNotReachedError
from .models import (
    AttentionShiftMdp,
    ParetoPoint,
    ScalarizationWeights,
    ShiftPolicy,
    ShiftSolution,
    SustainBoundResult,
)


logger = logging.getLogger(__name__)

# Gap between consecutive V_hat_T below which T counts as the sustain bound, in units of tol
BOUND_GAP_FACTOR = 10.0


def info_reward_table(deactivation_rewards: Sequence[float], gamma: float, horizon: int,
                      observe_at_decision: bool = False) -> np.ndarray:
    """
    R^I_T for every (k, t) in closed form.

    Every step earns C_k: C_k (1 - gamma^t) / (1 - gamma). With `observe_at_decision`
    the first step of a phase is a full observation: C_k (gamma - gamma^t) / (1 - gamma).

    Returns:
        Array of shape (m, T)
    """
    powers = np.power(gamma, np.arange(1, horizon + 1, dtype=np.float64))
    first = gamma if observe_at_decision else 1.0
    factors = (first - powers) / (1.0 - gamma)
    return np.asarray(deactivation_rewards, dtype=np.float64)[:, None] * factors[None, :]


def build_shift_mdp(
    mdp: FactoredMdp,
    modes: Sequence[AttentionalMdp],
    horizon: int,
    observe_at_decision: bool = False,
) -> AttentionShiftMdp:
    """
    Assemble the attention-shift semi-MDP M_T.

    Args:
        mdp: Original MDP
        modes: Solved attentional MDPs of modes 1..m (mode 0 is excluded)
        horizon: Sustain bound T >= 1
        observe_at_decision: Charge full observation at the first step of every phase

    Returns:
        AttentionShiftMdp with m * T actions

    Raises:
        DiscountOneError: If gamma = 1
    """
    require_discounted(mdp.discount, "build_shift_mdp")
    if int(horizon) != horizon or horizon < 1:
        raise ValueError(f"T must be an integer >= 1, got {horizon}")
    if not modes:
        raise InvalidModelError("the attention-shift MDP needs at least one attention mode")
    for am in modes:
        if am.mode.index == 0:
            raise InvalidModelError("the null attention mode cannot be a sustained action")
        if not am.is_solved:
            raise InvalidModelError(f"{am} must be solved before building the shift MDP")

    horizon = int(horizon)
    chains = tuple(induce_chain(mdp, lift_policy(am, mdp)) for am in modes)
    goal_reward = np.stack([truncated_returns(chain, mdp.discount, horizon) for chain in chains])
    info_reward = info_reward_table(
        [am.mode.deactivation_reward for am in modes], mdp.discount, horizon, observe_at_decision
    )
    goal_reward.setflags(write=False)
    info_reward.setflags(write=False)

    sm = AttentionShiftMdp(
        base=mdp,
        modes=tuple(modes),
        chains=chains,
        horizon=horizon,
        goal_reward=goal_reward,
        info_reward=info_reward,
        observe_at_decision=observe_at_decision,
    )
    logger.info(f"Built {sm} with {sm.n_actions} sustain actions")
    return sm


def _scalarized_reward(sm: AttentionShiftMdp, w: ScalarizationWeights) -> np.ndarray:
    return w.w1 * sm.goal_reward + w.w2 * sm.info_reward[:, :, None]


def shift_q_values(sm: AttentionShiftMdp, w: ScalarizationWeights, values: np.ndarray) -> np.ndarray:
    """Q(x, (pi_k, t)) = R^w + gamma^t P_pi_k^t V, shape (S, m * T) in flat action order"""
    reward = _scalarized_reward(sm, w)
    continuation = sm.propagate(values) * sm.discount_powers[None, :, None]
    return (reward + continuation).reshape(sm.n_actions, sm.n_states).T


def solve_shift(
    sm: AttentionShiftMdp,
    w: ScalarizationWeights,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    initial_values: Optional[np.ndarray] = None,
) -> ShiftSolution:
    """
    Solve V_hat(x) = max_(k,t) R^w(x, (pi_k, t)) + gamma^t sum_x' P_pi_k^t(x'|x) V_hat(x').

    Args:
        sm: Attention-shift MDP
        w: Scalarization weights
        tol: Accuracy of V_hat
        max_iters: Maximum number of sweeps
        initial_values: Warm start (e.g. V_hat of a smaller T)

    Returns:
        ShiftSolution with the greedy policy and its (G, I) decomposition

    Raises:
        NonConvergenceError: If max_iters sweeps do not reach the tolerance
    """

    def q_fn(values: np.ndarray) -> np.ndarray:
        return shift_q_values(sm, w, values)

    start = np.zeros(sm.n_states) if initial_values is None else initial_values
    values, sweeps = bellman_fixed_point(q_fn, start, sm.gamma, tol, max_iters, label=f"shift solve T={sm.horizon}")
    flat = greedy_argmax(q_fn(values), tie_tolerance(tol, sm.gamma))
    policy = ShiftPolicy.from_flat(flat, sm.horizon)
    goal, info = evaluate_objectives(sm, policy, tol, max_iters)
    counts = np.bincount(policy.durations - 1, minlength=sm.horizon)
    solution = ShiftSolution(
        horizon=sm.horizon,
        weights=w,
        values=values,
        policy=policy,
        goal_values=goal,
        info_values=info,
        sweeps=sweeps,
        duration_counts=counts,
    )
    x0 = sm.base.initial_state
    logger.info(
        f"T={sm.horizon} w={w}: V={values[x0]:.4f} G={goal[x0]:.4f} I={info[x0]:.4f} "
        f"({sweeps} sweeps, max t used {solution.max_duration_used})"
    )
    return solution


def evaluate_objectives(
    sm: AttentionShiftMdp,
    shift_policy: ShiftPolicy,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Goal and information values of a fixed shift policy.

    Solves G = R^G o pi + gamma^t P o pi G and I = R^I o pi + gamma^t P o pi I
    together as one two-column linear fixed point.

    Returns:
        (G, I), each of shape (S,)
    """
    if shift_policy.n_states != sm.n_states:
        raise InvalidModelError("shift policy does not cover the base states")
    if shift_policy.modes.max() > sm.n_modes or shift_policy.durations.max() > sm.horizon:
        raise InvalidModelError(f"shift policy uses an action outside {sm}")

    states = np.arange(sm.n_states)
    k = shift_policy.modes - 1
    t = shift_policy.durations - 1
    reward = np.column_stack([sm.goal_reward[k, t, states], sm.info_reward[k, t]])
    discounts = sm.discount_powers[t][:, None]

    def backup(values: np.ndarray) -> np.ndarray:
        return reward + discounts * sm.propagate(values)[k, t, states]

    values, _ = linear_fixed_point(
        backup, np.zeros((sm.n_states, 2)), sm.gamma, tol, max_iters, label=f"objective evaluation T={sm.horizon}"
    )
    return values[:, 0], values[:, 1]


def sustain_bound_search(
    mdp: FactoredMdp,
    modes: Sequence[AttentionalMdp],
    w: ScalarizationWeights,
    max_horizon: int,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    observe_at_decision: bool = False,
    stop_at_bound: bool = True,
    strict: bool = False,
) -> SustainBoundResult:
    """
    Solve M_1, M_2, ... warm-starting each solve from the previous V_hat.

    The search stops at the first T with ||V_hat_{T+1} - V_hat_T|| <= 10 tol and reports T* = T.

    Args:
        mdp: Original MDP
        modes: Solved attentional MDPs of modes 1..m
        w: Scalarization weights
        max_horizon: T_max
        tol: Solver accuracy
        max_iters: Maximum sweeps per solve
        observe_at_decision: Information-reward convention
        stop_at_bound: When False, every T up to T_max is solved even after the bound is found
        strict: Raise BoundNotReachedError instead of flagging when T_max is hit

    Returns:
        SustainBoundResult with the per-T solutions
    """
    if int(max_horizon) != max_horizon or max_horizon < 1:
        raise ValueError(f"T_max must be an integer >= 1, got {max_horizon}")
    full = build_shift_mdp(mdp, modes, int(max_horizon), observe_at_decision)
    solutions = {}
    bound = None
    previous = None
    for horizon in range(1, int(max_horizon) + 1):
        start = None if previous is None else previous.values
        solution = solve_shift(full.restrict(horizon), w, tol, max_iters, initial_values=start)
        solutions[horizon] = solution
        if previous is not None and bound is None:
            gap = float(np.max(np.abs(solution.values - previous.values)))
            logger.debug(f"Value gap between T={horizon - 1} and T={horizon}: {gap:.3e}")
            if gap <= BOUND_GAP_FACTOR * tol:
                bound = horizon - 1
                if stop_at_bound:
                    break
        previous = solution

    if bound is not None:
        logger.info(f"Optimal sustain bound T* = {bound}")
        return SustainBoundResult(bound=bound, bound_reached=True, solutions=solutions)

    result = SustainBoundResult(bound=int(max_horizon), bound_reached=False, solutions=solutions)
    if strict:
        raise BoundNotReachedError(result)
    logger.warning(f"Sustain bound not reached by T_max = {max_horizon}; reporting it as a lower bound")
    return result


def pareto_sweep(
    mdp: FactoredMdp,
    modes: Sequence[AttentionalMdp],
    horizon: int,
    weight_list: Sequence[ScalarizationWeights],
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    observe_at_decision: bool = False,
) -> List[ParetoPoint]:
    """One solve_shift per weight on a shared M_T; rows follow the order of `weight_list`"""
    sm = build_shift_mdp(mdp, modes, horizon, observe_at_decision)
    x0 = mdp.initial_state
    points = []
    for w in weight_list:
        solution = solve_shift(sm, w, tol, max_iters)
        points.append(
            ParetoPoint(
                weights=w,
                goal=float(solution.goal_values[x0]),
                info=float(solution.info_values[x0]),
                solution=solution,
            )
        )
    return points
