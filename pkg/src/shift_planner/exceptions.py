"""
Errors raised by the attention-shift planner
"""

from ..mdp_core.exceptions import PlannerError


class InvalidWeightsError(PlannerError, ValueError):
    """Scalarization weights must both be positive and sum to 1"""


class BoundNotReachedError(PlannerError):
    """The sustain-bound search hit T_max before the value gap closed"""

    def __init__(self, result):
        super().__init__(
            f"sustain bound not reached by T_max = {result.bound}; {result.bound} is only a lower bound"
        )
        self.result = result
