"""
Tests for reachable-state enumeration
"""

import pytest

from src.mdp_core import StateSpaceTooLargeError, StateVariable, build_factored_mdp, canonical_order, product_size

VARIABLES = (StateVariable("pos", (0, 1, 2, 3)), StateVariable("flag", (False, True)))
ACTIONS = ("stay", "step")


def countdown(state, action):
    """`step` moves pos down by one (floored at 0); `stay` pays 0 or 2 with equal chance"""
    pos, flag = state
    if action == "step":
        yield (max(pos - 1, 0), flag), 1.0, 1.0 if pos == 1 else 0.0
    else:
        yield (pos, flag), 0.5, 0.0
        yield (pos, flag), 0.5, 2.0


class TestBuildFactoredMdp:
    """Test cases for build_factored_mdp"""

    @pytest.fixture
    def mdp(self):
        return build_factored_mdp(VARIABLES, ACTIONS, (2, False), countdown, 0.9)

    def test_only_reachable_states(self, mdp):
        """pos 3 and flag True are never reached from (2, False)"""
        assert mdp.n_states == 3
        assert product_size(VARIABLES) == 8

    def test_canonical_order(self, mdp):
        """States are numbered by domain position, not by discovery order"""
        assert mdp.states == ((0, False), (1, False), (2, False))
        assert mdp.initial_state == 2

    def test_repeated_outcomes_are_merged(self, mdp):
        """Both `stay` outcomes land on the same state: one entry with probability 1"""
        stay = mdp.transitions[0]
        assert stay.nnz == 3
        assert stay[1, 1] == pytest.approx(1.0)

    def test_expected_reward(self, mdp):
        """R(x, a) is the probability-weighted outcome reward"""
        assert mdp.reward[0, 0] == pytest.approx(1.0)
        assert mdp.reward[1, 1] == pytest.approx(1.0)
        assert mdp.reward[2, 1] == pytest.approx(0.0)

    def test_state_cap(self):
        with pytest.raises(StateSpaceTooLargeError) as info:
            build_factored_mdp(VARIABLES, ACTIONS, (2, False), countdown, 0.9, max_states=2)
        assert info.value.limit == 2

    def test_canonical_order_helper(self):
        states = [(1, True), (0, True), (1, False)]
        assert canonical_order(states, VARIABLES) == [(0, True), (1, False), (1, True)]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
