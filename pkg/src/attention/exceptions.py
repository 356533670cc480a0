"""
Errors raised while abstracting an MDP under an attention mode
"""

from typing import Hashable, Sequence, Tuple

from ..mdp_core.exceptions import PlannerError


class EmptyPreimageError(PlannerError):
    """No enumerated state projects onto an observed tuple"""

    def __init__(self, mode_index: int, observed: Tuple[Hashable, ...]):
        super().__init__(f"observed tuple {observed!r} of mode {mode_index} has an empty preimage")
        self.mode_index = mode_index
        self.observed = observed


class ModeNotParentClosedError(PlannerError):
    """An attended variable has a parent outside the attended set"""

    def __init__(self, mode_index: int, variable: int, missing: Sequence[int]):
        super().__init__(
            f"mode {mode_index} attends variable {variable} but not its parents {sorted(missing)}"
        )
        self.mode_index = mode_index
        self.variable = variable
        self.missing = tuple(missing)


class InvalidDisaggregationError(PlannerError, ValueError):
    """A disaggregation puts mass outside a preimage or its rows do not sum to 1"""
