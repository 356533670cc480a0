"""
Tests for value iteration and policy evaluation
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.mdp_core import (
    DiscountOneError,
    FactoredMdp,
    NonConvergenceError,
    Policy,
    evaluate_policy,
    greedy_argmax,
    value_iteration,
)
from tests.conftest import TOL, all_policy_values, corridor_arrays, exact_policy_values, random_mdp


class TestValueIteration:
    """Test cases for value_iteration"""

    def test_single_absorbing_state(self):
        """R = 1 forever with gamma 0.9 is worth 10"""
        mdp = FactoredMdp.from_arrays(np.ones((1, 1, 1)), np.ones((1, 1)), 0.9)
        values, _ = value_iteration(mdp, tol=TOL)
        assert values[0] == pytest.approx(10.0, abs=TOL)

    def test_zero_reward_everywhere(self):
        mdp = random_mdp(3, 5, 2)
        zero = FactoredMdp.from_arrays(np.stack([p.toarray() for p in mdp.transitions]), np.zeros((5, 2)), 0.9)
        values, _ = value_iteration(zero, tol=TOL)
        assert np.all(values == 0.0)

    def test_corridor(self, corridor_mdp):
        """Reward 100 two steps away from L: 100 * 0.95^2"""
        values, policy = value_iteration(corridor_mdp, tol=TOL)

        assert values[0] == pytest.approx(90.25, abs=TOL)
        assert values[1] == pytest.approx(95.0, abs=TOL)
        assert values[3] == pytest.approx(0.0, abs=TOL)
        assert policy.actions[0] == 1
        assert policy.actions[1] == 1

    def test_ties_go_to_lowest_action(self, corridor_mdp):
        """In R and Done both actions are worth the same"""
        _, policy = value_iteration(corridor_mdp, tol=TOL)
        assert policy.actions[2] == 0
        assert policy.actions[3] == 0

    def test_bellman_residual(self):
        mdp = random_mdp(11, 6, 3)
        values, _ = value_iteration(mdp, tol=TOL)
        residual = np.max(np.abs(mdp.q_values(values).max(axis=1) - values))
        assert residual <= TOL

    def test_discount_one_refused(self):
        transitions, reward = corridor_arrays()
        mdp = FactoredMdp.from_arrays(transitions, reward, 1.0)

        with pytest.raises(DiscountOneError):
            value_iteration(mdp)

    def test_non_convergence(self, corridor_mdp):
        """The first sweep changes V by 100, far above the stopping threshold"""
        with pytest.raises(NonConvergenceError) as info:
            value_iteration(corridor_mdp, tol=TOL, max_iters=1)
        assert info.value.iterations == 1
        assert info.value.residual == pytest.approx(100.0)

    def test_tol_must_be_positive(self, corridor_mdp):
        with pytest.raises(ValueError):
            value_iteration(corridor_mdp, tol=0.0)

    def test_warm_start_from_solution(self, corridor_mdp):
        values, _ = value_iteration(corridor_mdp, tol=TOL)
        warm, _ = value_iteration(corridor_mdp, tol=TOL, initial_values=values)
        assert np.allclose(warm, values, atol=2 * TOL)

    @pytest.mark.parametrize("seed,n_states,n_actions", [(0, 2, 2), (1, 3, 2), (2, 4, 3), (3, 5, 2), (4, 6, 2)])
    def test_matches_policy_enumeration(self, seed, n_states, n_actions):
        """V* is the best exact value over every deterministic policy"""
        mdp = random_mdp(seed, n_states, n_actions)
        values, _ = value_iteration(mdp, tol=TOL)

        best = np.max([v for _, v in all_policy_values(mdp)], axis=0)
        assert np.allclose(values, best, atol=2 * TOL)

    @pytest.mark.parametrize("seed", [5, 6, 7])
    def test_greedy_policy_dominates(self, seed):
        """No deterministic policy beats the greedy one by more than 2 tol anywhere"""
        mdp = random_mdp(seed, 4, 3)
        _, greedy = value_iteration(mdp, tol=TOL)
        greedy_values = evaluate_policy(mdp, greedy, tol=TOL)

        for _, v in all_policy_values(mdp):
            assert np.all(greedy_values >= v - 2 * TOL)


class TestEvaluatePolicy:
    """Test cases for evaluate_policy"""

    def test_uniform_policy_constant_reward(self):
        """Constant reward c under any policy is worth c / (1 - gamma)"""
        transitions = np.array([[[0.5, 0.5], [0.5, 0.5]], [[1.0, 0.0], [0.0, 1.0]]])
        mdp = FactoredMdp.from_arrays(transitions, np.full((2, 2), 3.0), 0.9)

        values = evaluate_policy(mdp, Policy.uniform(2, 2), tol=TOL)
        assert np.allclose(values, 30.0, atol=TOL)

    def test_agrees_with_linear_solve(self):
        mdp = random_mdp(8, 5, 2)
        actions = np.array([0, 1, 1, 0, 1])

        values = evaluate_policy(mdp, Policy.deterministic(actions, 2), tol=TOL)
        assert np.allclose(values, exact_policy_values(mdp, actions), atol=TOL)

    def test_optimal_policy_value(self, corridor_mdp):
        values, policy = value_iteration(corridor_mdp, tol=TOL)
        assert np.allclose(evaluate_policy(corridor_mdp, policy, tol=TOL), values, atol=2 * TOL)

    def test_discount_one_refused(self):
        transitions, reward = corridor_arrays()
        mdp = FactoredMdp.from_arrays(transitions, reward, 1.0)

        with pytest.raises(DiscountOneError):
            evaluate_policy(mdp, Policy.uniform(4, 2))


class TestGreedyArgmax:
    """Test cases for greedy_argmax"""

    def test_exact_ties(self):
        q = np.array([[1.0, 1.0], [0.0, 2.0]])
        assert greedy_argmax(q).tolist() == [0, 1]

    def test_near_ties_within_tolerance(self):
        q = np.array([[1.0, 1.0 + 1e-9]])
        assert greedy_argmax(q, tie_tol=1e-8).tolist() == [0]
        assert greedy_argmax(q).tolist() == [1]


class TestSolverProperties:
    """Property checks over random MDPs"""

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), n_states=st.integers(1, 6), n_actions=st.integers(1, 3))
    def test_residual_bound(self, seed, n_states, n_actions):
        mdp = random_mdp(seed, n_states, n_actions)
        values, policy = value_iteration(mdp, tol=TOL)

        assert np.max(np.abs(mdp.q_values(values).max(axis=1) - values)) <= TOL
        assert policy.is_deterministic


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
