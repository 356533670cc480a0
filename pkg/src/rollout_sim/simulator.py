"""
Monte-Carlo execution of attention-shift policies

At each decision point the full state is observed and the shift policy picks
(pi_k, t); the lifted subpolicy then runs for t steps using only the attended
variables. Logged rollouts sample every state variable from its own random
substream, so two runs that differ only in unattended variables share the
draws of the attended ones. Return estimation runs many rollouts at once with
one stream per batch.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from ..attention import AttentionalMdp
from ..mdp_core import DynamicBayesNet, FactoredMdp, InvalidModelError
from ..shift_planner import ShiftSolution
from .models import ReturnEstimate, ReturnsReport, StepRecord, TrajectoryLog


logger = logging.getLogger(__name__)

JOINT_STREAM = "joint"
DEFAULT_BATCH_SIZE = 10_000


@dataclass(frozen=True, eq=False)
class SimulationWorld:
    """
    Everything a rollout needs besides the shift policy.

    Attributes:
        mdp: Original MDP
        modes: Solved attentional MDPs of modes 1..m (same order as in the shift MDP)
        dbn: Optional factored dynamics; enables per-variable random substreams
        observe_at_decision: Whether the decision step of a phase earns no deactivation reward
    """

    mdp: FactoredMdp
    modes: Tuple[AttentionalMdp, ...]
    dbn: Optional[DynamicBayesNet] = None
    observe_at_decision: bool = False

    @cached_property
    def lifted_actions(self) -> np.ndarray:
        """Action index of every lifted subpolicy at every full state, shape (m, S)"""
        return np.stack([am.subpolicy.actions[am.observed_of] for am in self.modes])

    @cached_property
    def deactivation_rewards(self) -> np.ndarray:
        return np.array([am.mode.deactivation_reward for am in self.modes])

    def info_reward(self, mode_index: int, step_in_phase: int) -> float:
        if self.observe_at_decision and step_in_phase == 1:
            return 0.0
        return float(self.deactivation_rewards[mode_index - 1])

    @property
    def stream_names(self) -> List[str]:
        if self.dbn is None:
            return [JOINT_STREAM]
        return [variable.name for variable in self.dbn.variables]


def make_streams(seed: int, names: Sequence[str]) -> Dict[str, np.random.Generator]:
    """One independent generator per name, all derived from the master seed"""
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {name: np.random.default_rng(child) for name, child in zip(names, children)}


def _pick(ordered: Sequence[Tuple[object, float]], u: float):
    total = 0.0
    for value, probability in ordered:
        total += probability
        if u < total:
            return value
    return ordered[-1][0]


def sample_next(world: SimulationWorld, state_id: int, action: int, streams: Dict[str, np.random.Generator]) -> int:
    """Draw the next state id; every stream is advanced exactly once"""
    mdp = world.mdp
    if world.dbn is None:
        row = mdp.transitions[action].getrow(state_id)
        u = streams[JOINT_STREAM].random()
        return int(_pick(list(zip(row.indices, row.data)), u))

    state = mdp.states[state_id]
    action_name = mdp.actions[action]
    next_values: Dict[int, object] = {}
    for factor in world.dbn.factors:
        variable = world.dbn.variables[factor.variable]
        u = streams[variable.name].random()
        distribution = factor.distribution(
            action_name,
            tuple(state[p] for p in factor.parents),
            tuple(next_values[p] for p in factor.intra_parents),
        )
        ordered = sorted(distribution.items(), key=lambda item: variable.value_index[item[0]])
        next_values[factor.variable] = _pick(ordered, u)
    return mdp.index_of(tuple(next_values[i] for i in range(len(state))))


def run_phase(
    world: SimulationWorld,
    state_id: int,
    mode_index: int,
    duration: int,
    streams: Dict[str, np.random.Generator],
    start_time: int = 0,
    max_steps: Optional[int] = None,
) -> Tuple[List[StepRecord], int, bool]:
    """
    Execute one sustain phase of the lifted mode-k subpolicy.

    Args:
        world: Simulation world
        state_id: State observed at the decision point
        mode_index: Mode k
        duration: Sustain time t
        streams: Random substreams (see make_streams)
        start_time: Time stamp of the first step
        max_steps: Optional cap (remaining horizon)

    Returns:
        (step records, final state id, whether the phase ended in the terminal set)
    """
    mdp = world.mdp
    steps = duration if max_steps is None else min(duration, max_steps)
    records = []
    for j in range(1, steps + 1):
        action = int(world.lifted_actions[mode_index - 1, state_id])
        records.append(
            StepRecord(
                time=start_time + j - 1,
                state=mdp.states[state_id],
                mode=mode_index,
                step_in_phase=j,
                action=mdp.actions[action],
                reward=float(mdp.reward[state_id, action]),
                info_reward=world.info_reward(mode_index, j),
                full_observation=(j == 1),
            )
        )
        state_id = sample_next(world, state_id, action, streams)
        if mdp.terminal_mask[state_id]:
            return records, state_id, True
    return records, state_id, False


def _check_solution(world: SimulationWorld, solution: ShiftSolution):
    if solution.policy.n_states != world.mdp.n_states:
        raise InvalidModelError("shift solution does not cover the simulated MDP")
    if solution.policy.modes.max() > len(world.modes):
        raise InvalidModelError("shift solution uses a mode the simulation world does not have")


def rollout(
    world: SimulationWorld,
    solution: ShiftSolution,
    horizon: int,
    seed: int,
    initial_state: Optional[int] = None,
) -> TrajectoryLog:
    """
    Simulate one execution and log every step.

    Stops after `horizon` steps or on entering the terminal set.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    _check_solution(world, solution)
    streams = make_streams(seed, world.stream_names)
    state_id = world.mdp.initial_state if initial_state is None else initial_state
    log = TrajectoryLog(seed=seed)
    while len(log) < horizon and not log.terminal:
        action = solution.policy.action_at(state_id)
        records, state_id, terminal = run_phase(
            world, state_id, action.mode_index, action.duration, streams, len(log), horizon - len(log)
        )
        log.steps.extend(records)
        log.terminal = terminal
    logger.debug(f"Rollout with seed {seed}: {len(log)} steps, terminal={log.terminal}")
    return log


def _sampling_tables(mdp: FactoredMdp) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Global cumulative sums over the stacked transition rows, for vectorized inverse-CDF draws"""
    stacked = mdp.stacked_transitions
    cumulative = np.cumsum(stacked.data)
    starts = stacked.indptr[:-1]
    base = np.where(starts > 0, cumulative[np.maximum(starts - 1, 0)], 0.0)
    return cumulative, base, stacked.indptr, stacked.indices


def estimate_returns(
    world: SimulationWorld,
    solution: ShiftSolution,
    n_rollouts: int,
    horizon: int,
    seed: int,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> ReturnsReport:
    """
    Estimate G and I at the initial state from independent rollouts.

    Rollouts run the full horizon (the terminal set earns no task reward but
    sensors may still be off). Batch c draws from SeedSequence(seed, spawn_key=(c,)).

    Returns:
        ReturnsReport with 3-sigma intervals widened by the truncation tail bound
    """
    if n_rollouts < 1:
        raise ValueError(f"n_rollouts must be >= 1, got {n_rollouts}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    _check_solution(world, solution)

    mdp = world.mdp
    gamma = mdp.discount
    cumulative, base, indptr, indices = _sampling_tables(mdp)
    lifted = world.lifted_actions
    costs = world.deactivation_rewards
    shift_modes = solution.policy.modes - 1
    shift_durations = solution.policy.durations

    goal = np.empty(n_rollouts)
    info = np.empty(n_rollouts)
    for c, start in enumerate(range(0, n_rollouts, batch_size)):
        size = min(batch_size, n_rollouts - start)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(c,)))
        states = np.full(size, mdp.initial_state, dtype=np.int64)
        mode = np.zeros(size, dtype=np.int64)
        remaining = np.zeros(size, dtype=np.int64)
        step_in_phase = np.zeros(size, dtype=np.int64)
        g = np.zeros(size)
        i = np.zeros(size)
        discount = 1.0
        for _ in range(horizon):
            deciding = remaining == 0
            mode[deciding] = shift_modes[states[deciding]]
            remaining[deciding] = shift_durations[states[deciding]]
            step_in_phase = np.where(deciding, 1, step_in_phase + 1)

            actions = lifted[mode, states]
            g += discount * mdp.reward[states, actions]
            earned = costs[mode]
            if world.observe_at_decision:
                earned = np.where(step_in_phase == 1, 0.0, earned)
            i += discount * earned

            rows = actions * mdp.n_states + states
            targets = base[rows] + rng.random(size) * (cumulative[indptr[rows + 1] - 1] - base[rows])
            positions = np.searchsorted(cumulative, targets, side="right")
            positions = np.clip(positions, indptr[rows], indptr[rows + 1] - 1)
            states = indices[positions].astype(np.int64)
            remaining -= 1
            discount *= gamma
        goal[start:start + size] = g
        info[start:start + size] = i

    reward_scale = float(np.max(np.abs(mdp.reward))) if mdp.reward.size else 0.0
    cost_scale = float(costs.max()) if costs.size else 0.0
    tail = gamma**horizon / (1.0 - gamma) if gamma < 1.0 else np.inf
    report = ReturnsReport(
        goal=_estimate(goal, tail * reward_scale),
        info=_estimate(info, tail * cost_scale),
        horizon=horizon,
        seed=seed,
    )
    logger.info(f"Estimated returns from {n_rollouts} rollouts: G = {report.goal}, I = {report.info}")
    return report


def _estimate(samples: np.ndarray, tail_bound: float) -> ReturnEstimate:
    std = float(np.std(samples, ddof=1)) if samples.size > 1 else 0.0
    return ReturnEstimate(mean=float(np.mean(samples)), std=std, n=int(samples.size), tail_bound=float(tail_bound))
