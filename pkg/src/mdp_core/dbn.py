"""
Dynamic Bayesian network view of a factored transition model

Each state variable has a conditional table over its next value given the
current values of its parents and, for intra-slice arcs, the next values of
variables earlier in the factor order.
"""

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .exceptions import InvalidModelError
from .models import STOCHASTIC_ATOL, StateTuple, StateVariable

# (action or None, current parent values, next-slice parent values)
TableKey = Tuple[Optional[str], Tuple[Hashable, ...], Tuple[Hashable, ...]]


@dataclass(frozen=True)
class ConditionalTable:
    """
    Conditional probability table of one state variable.

    Attributes:
        variable: Index of the variable this table generates
        parents: Indices of current-slice parents
        intra_parents: Indices of next-slice parents (must precede `variable` in the factor order)
        rows: Map from (action, parent values, intra-parent values) to a distribution over next values;
            action-independent tables use None as the action
        action_independent: Whether the robot's action is ignored
    """

    variable: int
    parents: Tuple[int, ...]
    intra_parents: Tuple[int, ...]
    rows: Mapping[TableKey, Mapping[Hashable, float]]
    action_independent: bool = False

    def distribution(
        self, action: str, parent_values: Tuple[Hashable, ...], intra_values: Tuple[Hashable, ...] = ()
    ) -> Mapping[Hashable, float]:
        key = (None if self.action_independent else action, tuple(parent_values), tuple(intra_values))
        try:
            return self.rows[key]
        except KeyError:
            raise InvalidModelError(f"no table row for variable {self.variable} at {key!r}") from None

    @property
    def all_parents(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.parents) | set(self.intra_parents)))


@dataclass(frozen=True)
class DynamicBayesNet:
    """Per-variable factorization of P(x'|x, a), factors listed in a topological order"""

    variables: Tuple[StateVariable, ...]
    actions: Tuple[str, ...]
    factors: Tuple[ConditionalTable, ...]
    _order: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        order = {factor.variable: position for position, factor in enumerate(self.factors)}
        if sorted(order) != list(range(len(self.variables))):
            raise InvalidModelError("need exactly one conditional table per state variable")
        for factor in self.factors:
            for parent in factor.intra_parents:
                if order[parent] >= order[factor.variable]:
                    raise InvalidModelError(
                        f"intra-slice parent {parent} of variable {factor.variable} comes later in the factor order"
                    )
            for key, row in factor.rows.items():
                total = sum(row.values())
                if abs(total - 1.0) > STOCHASTIC_ATOL or any(p < 0.0 for p in row.values()):
                    raise InvalidModelError(f"table row {key!r} of variable {factor.variable} is not a distribution")
        object.__setattr__(self, "_order", order)

    def factor_of(self, variable: int) -> ConditionalTable:
        return self.factors[self._order[variable]]

    def missing_parents(self, attended: Sequence[int]) -> Dict[int, List[int]]:
        """Attended variables whose parents (current or next slice) are not all attended"""
        attended_set = set(attended)
        missing = {}
        for variable in attended:
            outside = [p for p in self.factor_of(variable).all_parents if p not in attended_set]
            if outside:
                missing[variable] = outside
        return missing

    def marginal_distribution(
        self, subset: Sequence[int], values: Mapping[int, Hashable], action: str
    ) -> Dict[Tuple[Hashable, ...], float]:
        """
        Distribution over the next values of a parent-closed subset of variables.

        Args:
            subset: Variable indices, closed under parents
            values: Current values of (at least) the subset
            action: Action name

        Returns:
            Map from next-value tuples (in ascending variable order) to probabilities
        """
        chosen = [factor for factor in self.factors if factor.variable in set(subset)]
        partial: List[Tuple[Dict[int, Hashable], float]] = [({}, 1.0)]
        for factor in chosen:
            parent_values = tuple(values[p] for p in factor.parents)
            extended = []
            for assignment, probability in partial:
                intra_values = tuple(assignment[p] for p in factor.intra_parents)
                for value, p in factor.distribution(action, parent_values, intra_values).items():
                    if p > 0.0:
                        extended.append(({**assignment, factor.variable: value}, probability * p))
            partial = extended
        ordered = sorted(subset)
        result: Dict[Tuple[Hashable, ...], float] = {}
        for assignment, probability in partial:
            key = tuple(assignment[v] for v in ordered)
            result[key] = result.get(key, 0.0) + probability
        return result

    def joint_distribution(self, state: StateTuple, action: str) -> Dict[StateTuple, float]:
        """P(x'|x, a) reconstructed from the conditional tables"""
        return self.marginal_distribution(range(len(self.variables)), dict(enumerate(state)), action)
