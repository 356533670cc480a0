"""
Error types shared by every planner package
"""

from typing import Optional


class PlannerError(Exception):
    """Base class for all planner errors"""


class InvalidModelError(PlannerError, ValueError):
    """An MDP, policy or chain violates its structural invariants"""


class DiscountOneError(PlannerError, ValueError):
    """A solver was asked to work with an undiscounted (gamma = 1) model"""

    def __init__(self, operation: str):
        super().__init__(f"{operation} requires a discount factor below 1")
        self.operation = operation


class NonConvergenceError(PlannerError):
    """An iterative solver ran out of sweeps before reaching its tolerance"""

    def __init__(self, label: str, iterations: int, residual: float, tol: float):
        super().__init__(
            f"{label} did not converge after {iterations} sweeps (last change {residual:.3e}, tolerance {tol:.3e})"
        )
        self.label = label
        self.iterations = iterations
        self.residual = residual
        self.tol = tol


class StateSpaceTooLargeError(PlannerError):
    """State enumeration exceeded the configured cap"""

    def __init__(self, limit: int, context: Optional[str] = None):
        message = f"enumerated state space exceeds the cap of {limit} states"
        if context:
            message += f" ({context})"
        super().__init__(message)
        self.limit = limit
