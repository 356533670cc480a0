"""
MDP Core Module

Finite factored-state MDPs, policies, induced Markov chains and exact
dynamic programming (value iteration, policy evaluation, t-step kernels).
"""

from .exceptions import (
    PlannerError,
    InvalidModelError,
    DiscountOneError,
    NonConvergenceError,
    StateSpaceTooLargeError,
)
from .models import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    STOCHASTIC_ATOL,
    StateTuple,
    StateVariable,
    FactoredMdp,
    Policy,
    InducedChain,
)
from .builder import DEFAULT_MAX_STATES, build_factored_mdp, canonical_order, product_size
from .chains import induce_chain, t_step_kernel, truncated_discounted_return, truncated_returns, propagate
from .solver import (
    bellman_fixed_point,
    linear_fixed_point,
    greedy_argmax,
    tie_tolerance,
    value_iteration,
    evaluate_policy,
)
from .dbn import ConditionalTable, DynamicBayesNet

__all__ = [
    "PlannerError",
    "InvalidModelError",
    "DiscountOneError",
    "NonConvergenceError",
    "StateSpaceTooLargeError",
    "DEFAULT_MAX_ITERS",
    "DEFAULT_TOL",
    "STOCHASTIC_ATOL",
    "DEFAULT_MAX_STATES",
    "StateTuple",
    "StateVariable",
    "FactoredMdp",
    "Policy",
    "InducedChain",
    "build_factored_mdp",
    "canonical_order",
    "product_size",
    "induce_chain",
    "t_step_kernel",
    "truncated_discounted_return",
    "truncated_returns",
    "propagate",
    "bellman_fixed_point",
    "linear_fixed_point",
    "greedy_argmax",
    "tie_tolerance",
    "value_iteration",
    "evaluate_policy",
    "ConditionalTable",
    "DynamicBayesNet",
]
