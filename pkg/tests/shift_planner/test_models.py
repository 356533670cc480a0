"""
Tests for the attention-shift data models
"""

import numpy as np
import pytest

from src.mdp_core import InvalidModelError
from src.shift_planner import InvalidWeightsError, ScalarizationWeights, ShiftPolicy, SustainAction


class TestScalarizationWeights:
    """Test cases for ScalarizationWeights"""

    def test_from_w1(self):
        w = ScalarizationWeights.from_w1(0.7)
        assert w.w1 == 0.7
        assert w.w2 == pytest.approx(0.3)

    @pytest.mark.parametrize("w1,w2", [(1.0, 0.0), (0.0, 1.0), (0.6, 0.6), (-0.5, 1.5)])
    def test_invalid(self, w1, w2):
        with pytest.raises(InvalidWeightsError):
            ScalarizationWeights(w1, w2)

    def test_from_w1_edge(self):
        with pytest.raises(InvalidWeightsError):
            ScalarizationWeights.from_w1(1.0)

    def test_is_a_value_error(self):
        with pytest.raises(ValueError):
            ScalarizationWeights(0.5, 0.4)


class TestSustainAction:
    """Test cases for SustainAction"""

    def test_null_mode_cannot_be_sustained(self):
        with pytest.raises(InvalidModelError):
            SustainAction(0, 1)

    def test_duration_at_least_one(self):
        with pytest.raises(InvalidModelError):
            SustainAction(1, 0)

    def test_str(self):
        assert str(SustainAction(2, 3)) == "(pi_2, 3)"


class TestShiftPolicy:
    """Test cases for ShiftPolicy"""

    def test_from_flat(self):
        """Flat index (k-1) * T + (t-1)"""
        policy = ShiftPolicy.from_flat(np.array([0, 3, 4, 7]), horizon=4)

        assert policy.modes.tolist() == [1, 1, 2, 2]
        assert policy.durations.tolist() == [1, 4, 1, 4]
        assert policy.action_at(1) == SustainAction(1, 4)

    def test_constant(self):
        policy = ShiftPolicy.constant(3, 2, 5)
        assert policy.same_as(ShiftPolicy([2, 2, 2], [5, 5, 5]))
        assert not policy.same_as(ShiftPolicy([2, 2, 2], [5, 5, 4]))

    def test_rejects_mode_zero(self):
        with pytest.raises(InvalidModelError):
            ShiftPolicy([0, 1], [1, 1])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(InvalidModelError):
            ShiftPolicy([1, 1], [1])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
