"""
Command implementations: config -> compile -> solve -> sweep -> simulate -> export

Every command resolves its world config, does its work, writes its outputs
atomically into the output directory together with a run manifest, and
returns a CommandResult. Planner errors become a failed result whose exit
code encodes the failure class.
"""

from dataclasses import dataclass
from datetime import datetime
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union
import logging
import time

from .. import __version__
from ..attention import AttentionalMdp, solve_modes
from ..mdp_core import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    FactoredMdp,
    NonConvergenceError,
    PlannerError,
    StateSpaceTooLargeError,
    value_iteration,
)
from ..pursuit_world import CompiledWorld, GridworldSpec, ParseError, compile_world, load_spec_file
from ..rollout_sim import SimulationWorld, estimate_returns, rollout
from ..shift_planner import (
    ScalarizationWeights,
    ShiftSolution,
    build_shift_mdp,
    pareto_sweep,
    solve_shift,
    sustain_bound_search,
)
from .exporters import policy_records, read_json, values_records, write_csv, write_json, write_jsonl
from .models import CommandResult, RunManifest

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

DEFAULT_WORLDS_DIR = "config/worlds"
MANIFEST_NAME = "manifest.json"
DEFAULT_PARETO_WEIGHTS = tuple(round(0.1 * i, 10) for i in range(9, 0, -1))

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NON_CONVERGENCE = 2
EXIT_STATE_CAP = 3

SWEEP_COLUMNS = ["T", "G0", "I0", "V0", "max_t_used"]
PARETO_COLUMNS = ["w1", "w2", "G0", "I0"]
TIMELINE_COLUMNS = ["t", "mode", "j", "full_obs", "reward", "info_reward"]


def exit_code_for(error: Exception) -> int:
    if isinstance(error, NonConvergenceError):
        return EXIT_NON_CONVERGENCE
    if isinstance(error, StateSpaceTooLargeError):
        return EXIT_STATE_CAP
    return EXIT_INVALID


def resolve_world_config(config: PathLike, worlds_dir: PathLike = DEFAULT_WORLDS_DIR) -> Path:
    """
    A world config path, or the name of a bundled world under `worlds_dir`.

    Raises:
        ParseError: If neither exists
    """
    path = Path(config)
    if path.is_file():
        return path
    bundled = Path(worlds_dir) / f"{config}.yaml"
    if bundled.is_file():
        return bundled
    raise ParseError(f"no world config {str(config)!r} (looked for {path} and {bundled})")


@dataclass
class RunContext:
    """A compiled world with its attentional MDPs solved"""

    config_path: Path
    spec: GridworldSpec
    world: CompiledWorld
    modes: List[AttentionalMdp]
    tol: float
    max_iters: int

    @property
    def mdp(self) -> FactoredMdp:
        return self.world.mdp

    @property
    def observe_at_decision(self) -> bool:
        return self.spec.observe_at_decision

    @cached_property
    def full_observation_goal(self) -> float:
        """Optimal task value at x_0 with every sensor on (mode 0 is the original MDP)"""
        values, _ = value_iteration(self.mdp, tol=self.tol, max_iters=self.max_iters)
        return float(values[self.mdp.initial_state])

    def goal_drop(self, goal: float) -> Optional[float]:
        """Relative loss of task value against full observation"""
        baseline = self.full_observation_goal
        if baseline == 0.0:
            return None
        return (baseline - goal) / abs(baseline)

    def simulation_world(self) -> SimulationWorld:
        return SimulationWorld(
            mdp=self.mdp, modes=tuple(self.modes), dbn=self.world.dbn, observe_at_decision=self.observe_at_decision
        )


def prepare_context(
    config_path: PathLike,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    costs_zero: bool = False,
) -> RunContext:
    """Load, compile and solve every configured attention mode"""
    spec = load_spec_file(config_path)
    if costs_zero:
        spec = spec.without_sensor_costs()
        logger.info("Sensor costs set to zero")
    world = compile_world(spec)
    modes = solve_modes(world.mdp, world.modes, tol=tol, max_iters=max_iters)
    return RunContext(
        config_path=Path(config_path), spec=spec, world=world, modes=modes, tol=tol, max_iters=max_iters
    )


def _execute(
    command: str,
    config: PathLike,
    worlds_dir: PathLike,
    parameters: Dict[str, Any],
    out_dir: PathLike,
    body: Callable[[Path, Path], CommandResult],
) -> CommandResult:
    started = datetime.now()
    clock = time.perf_counter()
    out_dir = Path(out_dir)
    try:
        config_path = resolve_world_config(config, worlds_dir)
        result = body(config_path, out_dir)
    except (PlannerError, ValueError) as e:
        logger.error(f"{command} failed: {e}")
        return CommandResult(success=False, command=command, error=str(e), exit_code=exit_code_for(e))

    manifest = RunManifest(
        command=command,
        config_path=str(config_path),
        parameters=parameters,
        version=__version__,
        started_at=started.isoformat(timespec="seconds"),
        wall_clock_seconds=round(time.perf_counter() - clock, 3),
        outputs=[Path(p).name for p in result.outputs],
    )
    result.outputs.append(str(write_json(out_dir / MANIFEST_NAME, manifest.to_dict())))
    logger.info(f"{command} wrote {len(result.outputs)} files to {out_dir}")
    return result


def _solution_header(context: RunContext, solution: ShiftSolution) -> Dict[str, Any]:
    return {
        "world": context.spec.name,
        "T": solution.horizon,
        "w1": solution.weights.w1,
        "w2": solution.weights.w2,
        "observe_at_decision": context.observe_at_decision,
        "initial_state": context.mdp.initial_state,
        "modes": [
            {
                "index": am.mode.index,
                "attended": list(am.mode.attended),
                "deactivation_reward": am.mode.deactivation_reward,
            }
            for am in context.modes
        ],
    }


def _initial_summary(context: RunContext, solution: ShiftSolution) -> Dict[str, Any]:
    goal, info, value = solution.at(context.mdp.initial_state)
    return {
        "G0": goal,
        "I0": info,
        "V0": value,
        "G0_full_observation": context.full_observation_goal,
        "G0_drop": context.goal_drop(goal),
        "max_t_used": solution.max_duration_used,
    }


def cmd_solve(
    config: PathLike,
    T: int,
    w1: float,
    tol: float = DEFAULT_TOL,
    out_dir: PathLike = "results/solve",
    costs_zero: bool = False,
    max_iters: int = DEFAULT_MAX_ITERS,
    worlds_dir: PathLike = DEFAULT_WORLDS_DIR,
) -> CommandResult:
    """Solve M_T at one weight; writes values.json and policy.json"""
    parameters = {"T": T, "w1": w1, "tol": tol, "costs_zero": costs_zero, "max_iters": max_iters}

    def body(config_path: Path, out: Path) -> CommandResult:
        weights = ScalarizationWeights.from_w1(w1)
        context = prepare_context(config_path, tol, max_iters, costs_zero)
        sm = build_shift_mdp(context.mdp, context.modes, T, context.observe_at_decision)
        solution = solve_shift(sm, weights, tol, max_iters)
        header = _solution_header(context, solution)
        outputs = [
            str(write_json(out / "values.json", {**header, "states": values_records(context.mdp, solution)})),
            str(write_json(out / "policy.json", {**header, "states": policy_records(context.mdp, solution)})),
        ]
        summary = _initial_summary(context, solution)
        return CommandResult(success=True, command="solve", outputs=outputs, summary=summary)

    return _execute("solve", config, worlds_dir, parameters, out_dir, body)


def cmd_sweep_t(
    config: PathLike,
    T: int,
    w1: float,
    tol: float = DEFAULT_TOL,
    out_dir: PathLike = "results/sweep-t",
    costs_zero: bool = False,
    max_iters: int = DEFAULT_MAX_ITERS,
    worlds_dir: PathLike = DEFAULT_WORLDS_DIR,
) -> CommandResult:
    """Solve M_1..M_T with warm starts; writes sweep_T.csv with one row per T"""
    parameters = {"T": T, "w1": w1, "tol": tol, "costs_zero": costs_zero, "max_iters": max_iters}

    def body(config_path: Path, out: Path) -> CommandResult:
        weights = ScalarizationWeights.from_w1(w1)
        context = prepare_context(config_path, tol, max_iters, costs_zero)
        search = sustain_bound_search(
            context.mdp,
            context.modes,
            weights,
            T,
            tol,
            max_iters,
            observe_at_decision=context.observe_at_decision,
            stop_at_bound=False,
        )
        x0 = context.mdp.initial_state
        rows = []
        for horizon, solution in sorted(search.solutions.items()):
            goal, info, value = solution.at(x0)
            rows.append({"T": horizon, "G0": goal, "I0": info, "V0": value, "max_t_used": solution.max_duration_used})
        path = write_csv(out / "sweep_T.csv", rows, SWEEP_COLUMNS)
        last = search.solutions[max(search.solutions)]
        summary = {
            **_initial_summary(context, last),
            "T_star": search.bound,
            "bound_reached": search.bound_reached,
            "sweeps": [search.solutions[h].sweeps for h in sorted(search.solutions)],
        }
        return CommandResult(success=True, command="sweep-t", outputs=[str(path)], summary=summary, rows=rows)

    return _execute("sweep-t", config, worlds_dir, parameters, out_dir, body)


def cmd_pareto(
    config: PathLike,
    T: int,
    weights: Sequence[float] = DEFAULT_PARETO_WEIGHTS,
    tol: float = DEFAULT_TOL,
    out_dir: PathLike = "results/pareto",
    costs_zero: bool = False,
    max_iters: int = DEFAULT_MAX_ITERS,
    worlds_dir: PathLike = DEFAULT_WORLDS_DIR,
) -> CommandResult:
    """One solve per w1 in `weights`; writes pareto.csv with header w1,w2,G0,I0"""
    parameters = {"T": T, "weights": list(weights), "tol": tol, "costs_zero": costs_zero, "max_iters": max_iters}

    def body(config_path: Path, out: Path) -> CommandResult:
        weight_list = [ScalarizationWeights.from_w1(w) for w in weights]
        if not weight_list:
            raise ValueError("pareto needs at least one weight")
        context = prepare_context(config_path, tol, max_iters, costs_zero)
        points = pareto_sweep(
            context.mdp, context.modes, T, weight_list, tol, max_iters, observe_at_decision=context.observe_at_decision
        )
        rows = [{"w1": p.weights.w1, "w2": p.weights.w2, "G0": p.goal, "I0": p.info} for p in points]
        path = write_csv(out / "pareto.csv", rows, PARETO_COLUMNS)
        summary = {"points": len(rows), "G0_full_observation": context.full_observation_goal}
        return CommandResult(success=True, command="pareto", outputs=[str(path)], summary=summary, rows=rows)

    return _execute("pareto", config, worlds_dir, parameters, out_dir, body)


def cmd_simulate(
    config: PathLike,
    T: int,
    w1: float,
    n: int = 100_000,
    horizon: int = 200,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    out_dir: PathLike = "results/simulate",
    costs_zero: bool = False,
    max_iters: int = DEFAULT_MAX_ITERS,
    batch_size: int = 10_000,
    worlds_dir: PathLike = DEFAULT_WORLDS_DIR,
) -> CommandResult:
    """Solve, log one rollout and estimate returns; writes timeline.csv, trajectory.jsonl, returns.json"""
    parameters = {
        "T": T,
        "w1": w1,
        "n": n,
        "horizon": horizon,
        "seed": seed,
        "tol": tol,
        "costs_zero": costs_zero,
        "max_iters": max_iters,
        "batch_size": batch_size,
    }

    def body(config_path: Path, out: Path) -> CommandResult:
        weights = ScalarizationWeights.from_w1(w1)
        context = prepare_context(config_path, tol, max_iters, costs_zero)
        sm = build_shift_mdp(context.mdp, context.modes, T, context.observe_at_decision)
        solution = solve_shift(sm, weights, tol, max_iters)
        sim_world = context.simulation_world()

        log = rollout(sim_world, solution, horizon, seed)
        report = estimate_returns(sim_world, solution, n, horizon, seed, batch_size)
        goal, info, value = solution.at(context.mdp.initial_state)
        returns = {
            **report.to_dict(),
            "solver": {"G0": goal, "I0": info, "V0": value},
            "agrees": {"G": report.goal.contains(goal), "I": report.info.contains(info)},
        }
        outputs = [
            str(write_csv(out / "timeline.csv", log.timeline_rows(), TIMELINE_COLUMNS)),
            str(write_jsonl(out / "trajectory.jsonl", (step.to_dict() for step in log.steps))),
            str(write_json(out / "returns.json", returns)),
        ]
        summary = {
            "G0": goal,
            "I0": info,
            "V0": value,
            "G_hat": report.goal.mean,
            "G_half_width": report.goal.half_width,
            "I_hat": report.info.mean,
            "I_half_width": report.info.half_width,
            "decision_times": log.decision_times,
        }
        if not all(returns["agrees"].values()):
            logger.warning("Monte-Carlo estimate falls outside its interval around the solver value")
        return CommandResult(success=True, command="simulate", outputs=outputs, summary=summary)

    return _execute("simulate", config, worlds_dir, parameters, out_dir, body)


COMMANDS: Dict[str, Callable[..., CommandResult]] = {
    "solve": cmd_solve,
    "sweep-t": cmd_sweep_t,
    "pareto": cmd_pareto,
    "simulate": cmd_simulate,
}


def replay_manifest(
    manifest_path: PathLike, out_dir: Optional[PathLike] = None, worlds_dir: PathLike = DEFAULT_WORLDS_DIR
) -> CommandResult:
    """
    Re-run the command recorded in a manifest.

    Args:
        manifest_path: Path to a manifest.json
        out_dir: Where to write (defaults to the manifest's directory, overwriting the recorded outputs)
        worlds_dir: Bundled-world directory

    Returns:
        The replayed command's result
    """
    manifest_path = Path(manifest_path)
    try:
        manifest = RunManifest.from_dict(read_json(manifest_path))
    except (OSError, ValueError, KeyError) as e:
        logger.error(f"Cannot read manifest {manifest_path}: {e}")
        return CommandResult(success=False, command="replay", error=str(e), exit_code=EXIT_INVALID)
    if manifest.command not in COMMANDS:
        return CommandResult(
            success=False, command="replay", error=f"unknown command {manifest.command!r}", exit_code=EXIT_INVALID
        )
    if manifest.version != __version__:
        logger.warning(f"Manifest was written by version {manifest.version}, replaying with {__version__}")
    target = Path(out_dir) if out_dir is not None else manifest_path.parent
    logger.info(f"Replaying {manifest.command} from {manifest_path}")
    return COMMANDS[manifest.command](
        config=manifest.config_path, out_dir=target, worlds_dir=worlds_dir, **manifest.parameters
    )
