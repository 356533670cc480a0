"""
Errors raised while reading a world configuration
"""

from ..mdp_core.exceptions import PlannerError


class ParseError(PlannerError):
    """The world document is not well-formed"""


class ValidationError(PlannerError, ValueError):
    """A world field violates the schema or an invariant"""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path
