"""
Tests for the dynamic Bayesian network view of transitions
"""

import pytest

from src.mdp_core import ConditionalTable, DynamicBayesNet, InvalidModelError, StateVariable

VARIABLES = (StateVariable("x0", (0, 1)), StateVariable("x1", (0, 1)))


def keep_or_flip(p_keep):
    return {(v,): {v: p_keep, 1 - v: 1 - p_keep} for v in (0, 1)}


@pytest.fixture
def tables():
    """x0 keeps its value w.p. 0.8 under `a`; x1 copies the next x0 w.p. 0.9"""
    x0 = ConditionalTable(
        variable=0,
        parents=(0,),
        intra_parents=(),
        rows={("a", key, ()): row for key, row in keep_or_flip(0.8).items()},
    )
    x1 = ConditionalTable(
        variable=1,
        parents=(),
        intra_parents=(0,),
        rows={(None, (), key): row for key, row in keep_or_flip(0.9).items()},
        action_independent=True,
    )
    return x0, x1


class TestDynamicBayesNet:
    """Test cases for DynamicBayesNet"""

    @pytest.fixture
    def dbn(self, tables):
        return DynamicBayesNet(variables=VARIABLES, actions=("a",), factors=tables)

    def test_joint_distribution(self, dbn):
        joint = dbn.joint_distribution((0, 0), "a")

        assert joint[(0, 0)] == pytest.approx(0.72)
        assert joint[(0, 1)] == pytest.approx(0.08)
        assert joint[(1, 1)] == pytest.approx(0.18)
        assert joint[(1, 0)] == pytest.approx(0.02)
        assert sum(joint.values()) == pytest.approx(1.0)

    def test_marginal_of_parent_closed_subset(self, dbn):
        assert dbn.marginal_distribution([0], {0: 1}, "a") == pytest.approx({(1,): 0.8, (0,): 0.2})

    def test_missing_parents(self, dbn):
        """x1 depends on the next x0, so attending x1 alone is not parent-closed"""
        assert dbn.missing_parents([1]) == {1: [0]}
        assert dbn.missing_parents([0]) == {}
        assert dbn.missing_parents([0, 1]) == {}

    def test_action_independent_rows(self, dbn):
        """Action-independent tables ignore the action name"""
        assert dbn.factor_of(1).distribution("anything", (), (1,)) == pytest.approx({1: 0.9, 0: 0.1})

    def test_missing_row(self, dbn):
        with pytest.raises(InvalidModelError, match="no table row"):
            dbn.factor_of(0).distribution("b", (0,), ())

    def test_intra_parent_order(self, tables):
        """A next-slice parent must be generated first"""
        x0, x1 = tables
        with pytest.raises(InvalidModelError, match="intra-slice"):
            DynamicBayesNet(variables=VARIABLES, actions=("a",), factors=(x1, x0))

    def test_rows_must_be_distributions(self, tables):
        x0, _ = tables
        bad = ConditionalTable(variable=1, parents=(), intra_parents=(), rows={(None, (), ()): {0: 0.5, 1: 0.4}})
        with pytest.raises(InvalidModelError, match="not a distribution"):
            DynamicBayesNet(variables=VARIABLES, actions=("a",), factors=(x0, bad))

    def test_one_table_per_variable(self, tables):
        x0, _ = tables
        with pytest.raises(InvalidModelError):
            DynamicBayesNet(variables=VARIABLES, actions=("a",), factors=(x0,))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
