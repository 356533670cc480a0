"""
Spotlight-attention abstraction of a factored MDP

Projects full states onto attended subvectors, builds attentional MDPs by
marginalizing through a disaggregation distribution (or from the factored
conditional tables), solves them and lifts the resulting subpolicies back to
the full state space.
"""

from dataclasses import replace
from typing import FrozenSet, Hashable, List, Optional, Sequence, Tuple
import logging

import numpy as np
import scipy.sparse as sps

from ..mdp_core import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    DynamicBayesNet,
    FactoredMdp,
    Policy,
    StateTuple,
    canonical_order,
    value_iteration,
)
from .exceptions import EmptyPreimageError, InvalidDisaggregationError, ModeNotParentClosedError
from .models import AttentionalMdp, AttentionMode, Disaggregation


logger = logging.getLogger(__name__)


def build_modes(attended_lists: Sequence[Sequence[int]], sensor_costs: Sequence[float]) -> List[AttentionMode]:
    """Modes 1..m from index lists; mode 0 is never part of the result"""
    return [
        AttentionMode(index=k, attended=tuple(attended), sensor_costs=tuple(sensor_costs))
        for k, attended in enumerate(attended_lists, start=1)
    ]


def project(mode: AttentionMode, x: Sequence[Hashable]) -> StateTuple:
    """f_k(x): the components of x at the attended indices, in index order"""
    return tuple(x[i] for i in mode.attended)


def observation_partition(mode: AttentionMode, mdp: FactoredMdp) -> Tuple[Tuple[StateTuple, ...], np.ndarray]:
    """
    Projection image of the enumerated states and the state -> observed map.

    Returns:
        (observed tuples in canonical order, observed id of every full state id)
    """
    image = {project(mode, x) for x in mdp.states}
    observed = tuple(canonical_order(image, [mdp.variables[i] for i in mode.attended]))
    index = {y: i for i, y in enumerate(observed)}
    observed_of = np.fromiter((index[project(mode, x)] for x in mdp.states), dtype=np.int64, count=mdp.n_states)
    return observed, observed_of


def preimage(mode: AttentionMode, y: Sequence[Hashable], mdp: FactoredMdp) -> FrozenSet[int]:
    """
    State ids of the MDP that project onto y.

    Raises:
        EmptyPreimageError: If no enumerated state projects onto y
    """
    y = tuple(y)
    members = frozenset(i for i, x in enumerate(mdp.states) if project(mode, x) == y)
    if not members:
        raise EmptyPreimageError(mode.index, y)
    return members


def uniform_disaggregation(mode: AttentionMode, mdp: FactoredMdp) -> Disaggregation:
    """D_k(x|y) = 1 / |f_k^-1(y)| on the preimage of y"""
    observed, observed_of = observation_partition(mode, mdp)
    counts = np.bincount(observed_of, minlength=len(observed))
    if np.any(counts == 0):
        raise EmptyPreimageError(mode.index, observed[int(np.flatnonzero(counts == 0)[0])])
    matrix = sps.csr_matrix(
        (1.0 / counts[observed_of], (observed_of, np.arange(mdp.n_states))),
        shape=(len(observed), mdp.n_states),
    )
    return Disaggregation(mode=mode, observed_states=observed, observed_of=observed_of, matrix=matrix)


def _aggregation_matrix(observed_of: np.ndarray, n_observed: int) -> sps.csr_matrix:
    """E with E[x, y] = 1 iff f_k(x) = y, so (P @ E)[x, y'] sums P over the preimage of y'"""
    n_states = observed_of.size
    return sps.csr_matrix((np.ones(n_states), (np.arange(n_states), observed_of)), shape=(n_states, n_observed))


def _check_matches(mdp: FactoredMdp, mode: AttentionMode, d: Disaggregation):
    if d.mode.attended != mode.attended:
        raise InvalidDisaggregationError(f"disaggregation belongs to mode {d.mode.index}, not mode {mode.index}")
    if d.observed_of.size != mdp.n_states:
        raise InvalidDisaggregationError("disaggregation was built for a different state enumeration")


def _observed_mdp(
    mdp: FactoredMdp,
    mode: AttentionMode,
    observed: Tuple[StateTuple, ...],
    observed_of: np.ndarray,
    transitions: Sequence[sps.spmatrix],
    reward: np.ndarray,
) -> FactoredMdp:
    return FactoredMdp(
        variables=tuple(mdp.variables[i] for i in mode.attended),
        states=observed,
        actions=mdp.actions,
        transitions=tuple(transitions),
        reward=reward,
        initial_state=int(observed_of[mdp.initial_state]),
        discount=mdp.discount,
    )


def build_attentional_mdp(mdp: FactoredMdp, mode: AttentionMode, d: Disaggregation) -> AttentionalMdp:
    """
    Attentional MDP M_k by marginalization.

    P_k(y'|y, a) = sum_{x in f^-1(y)} D_k(x|y) sum_{x' in f^-1(y')} P(x'|x, a), i.e. D @ P_a @ E,
    and r_k = D @ R.
    """
    _check_matches(mdp, mode, d)
    aggregate = _aggregation_matrix(d.observed_of, len(d.observed_states))
    transitions = [d.matrix @ p @ aggregate for p in mdp.transitions]
    reward = np.asarray(d.matrix @ mdp.reward)
    observed_mdp = _observed_mdp(mdp, mode, d.observed_states, d.observed_of, transitions, reward)
    logger.info(f"Built attentional MDP for {mode}: {mdp.n_states} -> {observed_mdp.n_states} states")
    return AttentionalMdp(mode=mode, mdp=observed_mdp, observed_of=d.observed_of)


def build_attentional_mdp_factored(
    dbn: DynamicBayesNet, mode: AttentionMode, d: Disaggregation, mdp: FactoredMdp
) -> AttentionalMdp:
    """
    Attentional MDP M_k from the product of the attended conditional tables.

    The reward is still marginalized through `d`, since the tables carry no reward.

    Args:
        dbn: Factored transition model of `mdp`
        mode: Parent-closed attention mode
        d: Disaggregation used for r_k = D @ R
        mdp: The enumerated original MDP

    Raises:
        ModeNotParentClosedError: If an attended variable has an unattended parent
        EmptyPreimageError: If the tables reach an observed tuple outside the projection image
    """
    missing = dbn.missing_parents(mode.attended)
    if missing:
        variable = min(missing)
        raise ModeNotParentClosedError(mode.index, variable, missing[variable])
    _check_matches(mdp, mode, d)

    index = {y: i for i, y in enumerate(d.observed_states)}
    n_observed = len(d.observed_states)
    transitions = []
    for action in mdp.actions:
        rows: List[int] = []
        cols: List[int] = []
        probs: List[float] = []
        for i, y in enumerate(d.observed_states):
            values = dict(zip(mode.attended, y))
            for next_y, probability in dbn.marginal_distribution(mode.attended, values, action).items():
                if next_y not in index:
                    raise EmptyPreimageError(mode.index, next_y)
                rows.append(i)
                cols.append(index[next_y])
                probs.append(probability)
        transitions.append(sps.csr_matrix((probs, (rows, cols)), shape=(n_observed, n_observed)))
    reward = np.asarray(d.matrix @ mdp.reward)
    observed_mdp = _observed_mdp(mdp, mode, d.observed_states, d.observed_of, transitions, reward)
    logger.info(f"Built factored attentional MDP for {mode}: {observed_mdp.n_states} observed states")
    return AttentionalMdp(mode=mode, mdp=observed_mdp, observed_of=d.observed_of)


def solve_mode(am: AttentionalMdp, tol: float = DEFAULT_TOL, max_iters: int = DEFAULT_MAX_ITERS) -> AttentionalMdp:
    """Solve M_k with value iteration and attach the subpolicy pi_k"""
    values, policy = value_iteration(am.mdp, tol=tol, max_iters=max_iters)
    logger.debug(f"Solved {am.mode}: value at y0 = {values[am.mdp.initial_state]:.4f}")
    return replace(am, subpolicy=policy, values=values)


def lift_policy(am: AttentionalMdp, mdp: FactoredMdp) -> Policy:
    """pi_k composed with the projection: lifted(x) = pi_k(f_k(x))"""
    if not am.is_solved:
        raise ValueError(f"{am} has no subpolicy yet")
    if am.observed_of.size != mdp.n_states:
        raise InvalidDisaggregationError("attentional MDP was built for a different state enumeration")
    return Policy(am.subpolicy.probabilities[am.observed_of])


def solve_modes(
    mdp: FactoredMdp,
    modes: Sequence[AttentionMode],
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    dbn: Optional[DynamicBayesNet] = None,
) -> List[AttentionalMdp]:
    """
    Build and solve the attentional MDP of every mode with uniform disaggregation.

    When `dbn` is given the transitions come from the factored builder.
    """
    solved = []
    for mode in modes:
        d = uniform_disaggregation(mode, mdp)
        if dbn is not None:
            am = build_attentional_mdp_factored(dbn, mode, d, mdp)
        else:
            am = build_attentional_mdp(mdp, mode, d)
        solved.append(solve_mode(am, tol=tol, max_iters=max_iters))
    logger.info(f"Solved {len(solved)} attentional MDPs")
    return solved
