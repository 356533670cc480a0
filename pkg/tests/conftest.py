"""
Shared fixtures: small hand-checkable MDPs and the bundled pursuit worlds
"""

from itertools import product
from pathlib import Path

import numpy as np
import pytest

from src.attention import solve_modes
from src.mdp_core import FactoredMdp
from src.pursuit_world import compile_world, load_spec_file

WORLDS_DIR = Path(__file__).parent.parent / "config" / "worlds"
TOL = 1e-6


def corridor_arrays():
    """
    Deterministic corridor L, M, R plus an absorbing Done state.

    Actions: 0 = left, 1 = right. Any action in R earns 100 and ends in Done.
    """
    left = np.zeros((4, 4))
    right = np.zeros((4, 4))
    left[0, 0] = left[1, 0] = 1.0
    right[0, 1] = right[1, 2] = 1.0
    left[2, 3] = right[2, 3] = 1.0
    left[3, 3] = right[3, 3] = 1.0
    reward = np.zeros((4, 2))
    reward[2, :] = 100.0
    return np.stack([left, right]), reward


def random_mdp(seed: int, n_states: int, n_actions: int, gamma: float = 0.9) -> FactoredMdp:
    rng = np.random.default_rng(seed)
    transitions = rng.dirichlet(np.ones(n_states), size=(n_actions, n_states))
    reward = rng.uniform(-1.0, 1.0, size=(n_states, n_actions))
    return FactoredMdp.from_arrays(transitions, reward, gamma)


def exact_policy_values(mdp: FactoredMdp, actions) -> np.ndarray:
    """V^pi by a direct linear solve, for a deterministic policy given as action indices"""
    states = np.arange(mdp.n_states)
    matrix = np.stack([mdp.transitions[a].toarray()[x] for x, a in zip(states, actions)])
    reward = mdp.reward[states, actions]
    return np.linalg.solve(np.eye(mdp.n_states) - mdp.discount * matrix, reward)


def all_policy_values(mdp: FactoredMdp):
    """Exact values of every deterministic policy"""
    return [
        (actions, exact_policy_values(mdp, np.array(actions)))
        for actions in product(range(mdp.n_actions), repeat=mdp.n_states)
    ]


@pytest.fixture
def corridor_mdp():
    transitions, reward = corridor_arrays()
    return FactoredMdp.from_arrays(transitions, reward, 0.95, actions=("left", "right"))


@pytest.fixture(scope="session")
def mini_spec():
    return load_spec_file(WORLDS_DIR / "mini-3x3.yaml")


@pytest.fixture(scope="session")
def mini_world(mini_spec):
    return compile_world(mini_spec)


@pytest.fixture(scope="session")
def mini_modes(mini_world):
    return solve_modes(mini_world.mdp, mini_world.modes, tol=TOL)


@pytest.fixture(scope="session")
def mini_zero_cost(mini_spec):
    """mini-3x3 with every sensor cost zero: (world, solved modes)"""
    world = compile_world(mini_spec.without_sensor_costs())
    return world, solve_modes(world.mdp, world.modes, tol=TOL)


@pytest.fixture(scope="session")
def corridor_world():
    return compile_world(load_spec_file(WORLDS_DIR / "corridor.yaml"))


@pytest.fixture(scope="session")
def corridor_modes(corridor_world):
    return solve_modes(corridor_world.mdp, corridor_world.modes, tol=TOL)


@pytest.fixture(scope="session")
def paper_spec():
    return load_spec_file(WORLDS_DIR / "paper-world.yaml")


@pytest.fixture(scope="session")
def paper_world(paper_spec):
    return compile_world(paper_spec)


@pytest.fixture(scope="session")
def paper_modes(paper_world):
    return solve_modes(paper_world.mdp, paper_world.modes, tol=TOL)
