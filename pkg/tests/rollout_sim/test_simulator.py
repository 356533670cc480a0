"""
Tests for the rollout simulator
"""

import numpy as np
import pytest

from src.mdp_core import InvalidModelError
from src.pursuit_world import CAPTURED
from src.rollout_sim import (
    ReturnEstimate,
    SimulationWorld,
    estimate_returns,
    make_streams,
    rollout,
    run_phase,
    sample_next,
)
from src.shift_planner import ScalarizationWeights, build_shift_mdp, solve_shift
from tests.conftest import TOL

W = ScalarizationWeights.from_w1(0.7)


def solve(world, modes, horizon, observe_at_decision=False):
    sm = build_shift_mdp(world.mdp, modes, horizon, observe_at_decision)
    return solve_shift(sm, W, tol=TOL)


@pytest.fixture(scope="module")
def corridor_sim(corridor_world, corridor_modes):
    return SimulationWorld(mdp=corridor_world.mdp, modes=tuple(corridor_modes), dbn=corridor_world.dbn)


@pytest.fixture(scope="module")
def corridor_solution(corridor_world, corridor_modes):
    return solve(corridor_world, corridor_modes, 1)


@pytest.fixture(scope="module")
def mini_sim(mini_world, mini_modes):
    return SimulationWorld(
        mdp=mini_world.mdp, modes=tuple(mini_modes), dbn=mini_world.dbn, observe_at_decision=True
    )


@pytest.fixture(scope="module")
def mini_solution(mini_world, mini_modes):
    return solve(mini_world, mini_modes, 4, observe_at_decision=True)


class TestReturnEstimate:
    """Test cases for ReturnEstimate"""

    def test_half_width(self):
        estimate = ReturnEstimate(mean=10.0, std=2.0, n=100, tail_bound=0.5)
        assert estimate.half_width == pytest.approx(1.1)
        assert estimate.contains(11.0)
        assert not estimate.contains(11.2)
        assert str(estimate) == "10.00 +/- 1.10"


class TestStreams:
    """Test cases for make_streams and sample_next"""

    def test_same_seed_same_draws(self):
        first = make_streams(7, ["X0", "X1"])
        second = make_streams(7, ["X0", "X1"])
        assert first["X1"].random() == second["X1"].random()
        assert first["X0"].random() != first["X1"].random()

    @pytest.mark.parametrize("factored", [True, False])
    def test_sample_frequencies(self, mini_world, mini_modes, factored):
        """Empirical next-state frequencies match the transition row within 4 sigma"""
        dbn = mini_world.dbn if factored else None
        world = SimulationWorld(mdp=mini_world.mdp, modes=tuple(mini_modes), dbn=dbn)
        streams = make_streams(3, world.stream_names)
        x0 = mini_world.mdp.initial_state
        action = mini_world.mdp.actions.index("N")
        n = 4000

        counts = np.bincount([sample_next(world, x0, action, streams) for _ in range(n)],
                             minlength=mini_world.mdp.n_states)
        row = mini_world.mdp.transitions[action].getrow(x0).toarray().ravel()

        assert set(np.flatnonzero(counts)) <= set(np.flatnonzero(row))
        sigma = np.sqrt(row * (1 - row) / n)
        assert np.all(np.abs(counts / n - row) <= 4 * sigma + 1e-12)


class TestRunPhase:
    """Test cases for run_phase"""

    @pytest.mark.parametrize("mode,unattended", [(1, 2), (2, 1)])
    def test_unattended_variable_does_not_change_the_phase(self, mini_world, mini_sim, mode, unattended):
        """Starts that differ only in the unattended agent share actions and attended values"""
        mdp = mini_world.mdp
        attended = [v for v in range(3) if v != unattended]
        base = ((0, 0), (2, 2), (2, 0))
        a = mdp.index_of(base)

        for value in [(0, 2), (1, 2), (2, 1), (1, 1), (2, 2), (2, 0), CAPTURED]:
            if value == base[unattended]:
                continue
            b = mdp.index_of(tuple(value if v == unattended else base[v] for v in range(3)))
            for seed in range(50):
                first, _, _ = run_phase(mini_sim, a, mode, 10, make_streams(seed, mini_sim.stream_names))
                second, _, _ = run_phase(mini_sim, b, mode, 10, make_streams(seed, mini_sim.stream_names))

                for one, other in zip(first, second):
                    assert one.action == other.action
                    assert [one.state[v] for v in attended] == [other.state[v] for v in attended]

    def test_max_steps_truncates(self, mini_world, mini_sim):
        streams = make_streams(0, mini_sim.stream_names)
        records, _, terminal = run_phase(mini_sim, mini_world.mdp.initial_state, 2, 5, streams, max_steps=1)

        assert len(records) == 1
        assert not terminal
        assert records[0].full_observation
        assert records[0].info_reward == 0.0


class TestRollout:
    """Test cases for rollout"""

    def test_corridor_trace(self, corridor_sim, corridor_solution):
        log = rollout(corridor_sim, corridor_solution, horizon=50, seed=0)

        assert log.terminal
        assert [step.state for step in log.steps] == [((0, 0), (2, 0)), ((1, 0), (2, 0))]
        assert [step.action for step in log.steps] == ["E", "E"]
        assert [step.reward for step in log.steps] == [0.0, 100.0]
        assert [step.info_reward for step in log.steps] == [0.0, 0.0]
        assert log.decision_times == [0, 1]
        assert log.steps[0].to_dict()["state"] == [[0, 0], [2, 0]]

    def test_all_captured_start_stops_after_one_step(self, mini_world, mini_sim, mini_solution):
        """From the penalty cell with every agent captured: one silent step, and the robot moves on"""
        mdp = mini_world.mdp
        done = mdp.index_of(((1, 1), CAPTURED, CAPTURED))
        log = rollout(mini_sim, mini_solution, horizon=50, seed=0, initial_state=done)

        assert len(log) == 1
        assert log.terminal
        assert log.steps[0].reward == 0.0

        for seed in range(20):
            records, final, terminal = run_phase(mini_sim, done, 1, 4, make_streams(seed, mini_sim.stream_names))
            assert len(records) == 1
            assert terminal
            robot, *agents = mdp.states[final]
            assert agents == [CAPTURED, CAPTURED]
            assert robot != (1, 1)

    def test_phase_structure(self, mini_world, mini_sim, mini_solution):
        """Decision points observe fully, earn nothing, and open phases of the chosen length"""
        mdp = mini_world.mdp
        horizon = 40
        for seed in range(1000):
            log = rollout(mini_sim, mini_solution, horizon=horizon, seed=seed)
            assert 1 <= len(log) <= horizon
            assert log.steps[0].time == 0

            phases = []
            for step in log.steps:
                assert step.full_observation == (step.step_in_phase == 1)
                if step.step_in_phase == 1:
                    assert step.info_reward == 0.0
                    x = mdp.index_of(step.state)
                    assert step.mode == mini_solution.policy.modes[x]
                    phases.append([int(mini_solution.policy.durations[x]), 0])
                else:
                    assert step.info_reward == 5.0
                assert step.mode in (1, 2)
                phases[-1][1] += 1

            for duration, length in phases[:-1]:
                assert length == duration
            assert phases[-1][1] <= phases[-1][0]

    def test_timeline_rows(self, corridor_sim, corridor_solution):
        rows = rollout(corridor_sim, corridor_solution, horizon=50, seed=0).timeline_rows()
        assert rows[1] == {"t": 1, "mode": 1, "j": 1, "full_obs": 1, "reward": 100.0, "info_reward": 0.0}

    def test_rejects_foreign_solution(self, mini_sim, corridor_solution):
        with pytest.raises(InvalidModelError):
            rollout(mini_sim, corridor_solution, horizon=10, seed=0)

    def test_rejects_empty_horizon(self, corridor_sim, corridor_solution):
        with pytest.raises(ValueError):
            rollout(corridor_sim, corridor_solution, horizon=0, seed=0)


class TestEstimateReturns:
    """Test cases for estimate_returns"""

    def test_same_seed_same_estimate(self, mini_sim, mini_solution):
        first = estimate_returns(mini_sim, mini_solution, n_rollouts=500, horizon=60, seed=4, batch_size=200)
        second = estimate_returns(mini_sim, mini_solution, n_rollouts=500, horizon=60, seed=4, batch_size=200)
        assert first.to_dict() == second.to_dict()

    def test_free_sensors_earn_nothing(self, mini_zero_cost):
        world, modes = mini_zero_cost
        sim = SimulationWorld(mdp=world.mdp, modes=tuple(modes), dbn=world.dbn)
        report = estimate_returns(sim, solve(world, modes, 2), n_rollouts=200, horizon=50, seed=1)

        assert report.info.mean == 0.0
        assert report.info.tail_bound == 0.0

    @pytest.mark.parametrize("horizon_T", [1, 4])
    def test_agrees_with_solver(self, mini_world, mini_modes, mini_sim, horizon_T):
        """The solver's G and I at the start state fall inside the reported intervals"""
        solution = solve(mini_world, mini_modes, horizon_T, observe_at_decision=True)
        report = estimate_returns(mini_sim, solution, n_rollouts=100_000, horizon=200, seed=0)
        goal, info, _ = solution.at(mini_world.mdp.initial_state)

        assert report.goal.n == 100_000
        assert report.goal.contains(goal)
        assert report.info.contains(info)

    def test_corridor_is_deterministic(self, corridor_sim, corridor_solution):
        report = estimate_returns(corridor_sim, corridor_solution, n_rollouts=100, horizon=100, seed=2)
        assert report.goal.mean == pytest.approx(95.0)
        assert report.goal.std == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.slow
    def test_agrees_with_solver_on_paper_world(self, paper_spec, paper_world, paper_modes):
        world = SimulationWorld(
            mdp=paper_world.mdp,
            modes=tuple(paper_modes),
            dbn=paper_world.dbn,
            observe_at_decision=paper_spec.observe_at_decision,
        )
        solution = solve(paper_world, paper_modes, 4, observe_at_decision=paper_spec.observe_at_decision)
        report = estimate_returns(world, solution, n_rollouts=100_000, horizon=200, seed=0)
        goal, info, _ = solution.at(paper_world.mdp.initial_state)

        for estimate, exact in ((report.goal, goal), (report.info, info)):
            assert abs(estimate.mean - exact) <= 4 * estimate.std / np.sqrt(estimate.n) + estimate.tail_bound + 1e-3

    @pytest.mark.parametrize("n_rollouts,horizon", [(0, 10), (10, 0)])
    def test_invalid_arguments(self, corridor_sim, corridor_solution, n_rollouts, horizon):
        with pytest.raises(ValueError):
            estimate_returns(corridor_sim, corridor_solution, n_rollouts, horizon, seed=0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
