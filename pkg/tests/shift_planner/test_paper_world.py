"""
Trend checks on the bundled 5x5 pursuit world (slow: full solves on ~11k states)
"""

import numpy as np
import pytest

from src.attention import solve_modes
from src.pursuit_world import compile_world
from src.shift_planner import ScalarizationWeights, build_shift_mdp, pareto_sweep, sustain_bound_search
from tests.conftest import TOL

W = ScalarizationWeights.from_w1(0.7)


@pytest.mark.slow
class TestPaperWorldTrends:
    """Sustain-bound and weight trends of the 5x5 world"""

    @pytest.fixture(scope="class")
    def sweep(self, paper_world, paper_modes, paper_spec):
        return sustain_bound_search(
            paper_world.mdp,
            paper_modes,
            W,
            4,
            tol=TOL,
            observe_at_decision=paper_spec.observe_at_decision,
            stop_at_bound=False,
        )

    def test_information_rises_with_horizon(self, sweep, paper_world):
        x0 = paper_world.mdp.initial_state
        info = [sweep.solutions[horizon].info_values[x0] for horizon in (1, 2, 3, 4)]

        assert info[0] == 0.0
        assert all(later > earlier for earlier, later in zip(info, info[1:]))

    def test_goal_drops_at_most_ten_percent(self, sweep, paper_world):
        x0 = paper_world.mdp.initial_state
        first = sweep.solutions[1].goal_values[x0]
        last = sweep.solutions[4].goal_values[x0]

        assert last <= first + 10 * TOL
        assert last >= 0.9 * first

    def test_values_monotone_in_horizon(self, sweep):
        for horizon in (1, 2, 3):
            gap = sweep.solutions[horizon + 1].values - sweep.solutions[horizon].values
            assert gap.min() >= -10 * TOL

    def test_free_sensors_never_sustain_longer(self, paper_spec):
        world = compile_world(paper_spec.without_sensor_costs())
        modes = solve_modes(world.mdp, world.modes, tol=TOL)
        result = sustain_bound_search(
            world.mdp, modes, W, 4, tol=TOL, observe_at_decision=paper_spec.observe_at_decision, stop_at_bound=False
        )

        for horizon in (2, 3, 4):
            assert np.max(np.abs(result.solutions[horizon].values - result.solutions[1].values)) <= 10 * TOL

    def test_pareto_staircase(self, paper_world, paper_modes, paper_spec):
        weights = [ScalarizationWeights.from_w1(w1 / 10) for w1 in range(9, 0, -1)]
        points = pareto_sweep(
            paper_world.mdp, paper_modes, 4, weights, tol=TOL, observe_at_decision=paper_spec.observe_at_decision
        )

        for before, after in zip(points, points[1:]):
            assert after.info >= before.info - 10 * TOL
            assert after.goal <= before.goal + 10 * TOL

        durations = points[-1].solution.policy.durations
        assert np.mean(durations == 4) >= 0.9


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
