#!/usr/bin/env python3
"""
AttentionPlanner Command-Line Entry Point

Runs the attention-based active perception experiments on a pursuit world:
1. solve     - solve the attention-shift MDP for one (T, w1)
2. sweep-t   - solve T = 1..T_max with warm starts (sustain-bound search)
3. pareto    - sweep the scalarization weight at a fixed T
4. simulate  - Monte-Carlo rollouts of the optimal shift policy
5. replay    - re-run a recorded manifest

Defaults come from config/config.yaml; command-line flags override them.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import colorlog
import yaml

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli import (  # noqa: E402
    DEFAULT_PARETO_WEIGHTS,
    EXIT_INVALID,
    CommandResult,
    cmd_pareto,
    cmd_simulate,
    cmd_solve,
    cmd_sweep_t,
    replay_manifest,
)

ROOT = Path(__file__).parent
DEFAULT_SETTINGS = ROOT / "config" / "config.yaml"


def setup_logging(log_level: str = "INFO", log_file: str = None):
    """
    Configure logging for the application.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional log file path
    """
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    console = colorlog.StreamHandler()
    console.setFormatter(colorlog.ColoredFormatter("%(log_color)s" + log_format))
    handlers = [console]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(log_format))
        handlers.append(file_handler)

    logging.basicConfig(level=getattr(logging, log_level.upper()), handlers=handlers, force=True)


def load_config(config_path: str = str(DEFAULT_SETTINGS)) -> dict:
    """
    Load toolkit configuration from a YAML file.

    Args:
        config_path: Path to configuration file

    Returns:
        Configuration dictionary (empty when the file does not exist)
    """
    try:
        with open(config_path, "r") as f:
            config = yaml.safe_load(f) or {}

        logging.info(f"Configuration loaded from {config_path}")
        return config
    except FileNotFoundError:
        logging.warning(f"Configuration file not found: {config_path}; using built-in defaults")
        return {}
    except yaml.YAMLError as e:
        logging.error(f"Error loading configuration: {e}")
        sys.exit(EXIT_INVALID)


def _under_root(path: str) -> Path:
    path = Path(path)
    return path if path.is_absolute() else ROOT / path


def parse_weights(text: str) -> List[float]:
    """Comma-separated w1 values, e.g. "0.9,0.5,0.1" """
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="AttentionPlanner - attention-based active perception for MDPs")
    parser.add_argument(
        "--settings", default=str(DEFAULT_SETTINGS), help="Toolkit configuration file (default: config/config.yaml)"
    )
    parser.add_argument("--log-level", help="Override the configured logging level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser, needs_w1: bool = True):
        sub.add_argument("--config", required=True, help="World config path or bundled world name (e.g. paper-world)")
        sub.add_argument("--T", type=int, required=True, help="Sustain bound T (T_max for sweep-t)")
        if needs_w1:
            sub.add_argument("--w1", type=float, required=True, help="Goal weight w1 (w2 = 1 - w1)")
        sub.add_argument("--tol", type=float, help="Solver tolerance (default from config)")
        sub.add_argument("--out", help="Output directory (default: <output.dir>/<command>)")
        sub.add_argument("--costs-zero", action="store_true", help="Set every sensor cost to zero")

    add_common(subparsers.add_parser("solve", help="Solve the attention-shift MDP for one T and weight"))
    add_common(subparsers.add_parser("sweep-t", help="Solve T = 1..T with warm starts"))

    pareto = subparsers.add_parser("pareto", help="Sweep scalarization weights at a fixed T")
    add_common(pareto, needs_w1=False)
    pareto.add_argument("--weights", type=parse_weights, help="Comma-separated w1 values (default 0.9..0.1)")

    simulate = subparsers.add_parser("simulate", help="Simulate the optimal shift policy")
    add_common(simulate)
    simulate.add_argument("--n", type=int, help="Number of rollouts for the return estimate")
    simulate.add_argument("--horizon", type=int, help="Steps per rollout")
    simulate.add_argument("--seed", type=int, help="Master random seed")
    simulate.add_argument("--batch-size", type=int, help="Rollouts simulated together")

    replay = subparsers.add_parser("replay", help="Re-run the command recorded in a manifest")
    replay.add_argument("--manifest", required=True, help="Path to manifest.json")
    replay.add_argument("--out", help="Output directory (default: the manifest's directory)")
    return parser


def dispatch(args: argparse.Namespace, config: dict) -> CommandResult:
    """Run the selected command with flags layered over the configured defaults"""
    solver = config.get("solver", {})
    rollout_config = config.get("rollout", {})
    worlds_dir = _under_root(config.get("worlds", {}).get("dir", "config/worlds"))

    if args.command == "replay":
        return replay_manifest(args.manifest, out_dir=args.out, worlds_dir=worlds_dir)

    out_dir = args.out or _under_root(config.get("output", {}).get("dir", "results")) / args.command
    common = {
        "config": args.config,
        "T": args.T,
        "tol": args.tol if args.tol is not None else float(solver.get("tol", 1e-6)),
        "out_dir": out_dir,
        "costs_zero": args.costs_zero,
        "max_iters": int(solver.get("max_iters", 100_000)),
        "worlds_dir": worlds_dir,
    }
    if args.command == "solve":
        return cmd_solve(w1=args.w1, **common)
    if args.command == "sweep-t":
        return cmd_sweep_t(w1=args.w1, **common)
    if args.command == "pareto":
        weights = args.weights if args.weights else list(DEFAULT_PARETO_WEIGHTS)
        return cmd_pareto(weights=weights, **common)

    def pick(flag, key, default):
        return flag if flag is not None else int(rollout_config.get(key, default))

    return cmd_simulate(
        w1=args.w1,
        n=pick(args.n, "n", 100_000),
        horizon=pick(args.horizon, "horizon", 200),
        seed=pick(args.seed, "seed", 0),
        batch_size=pick(args.batch_size, "batch_size", 10_000),
        **common,
    )


def print_summary(result: CommandResult):
    """Human-readable summary; numbers rounded to 2 decimals"""
    if not result.success:
        print(f"✗ {result.command} failed: {result.error}")
        return

    print("\n" + "=" * 60)
    print(f"✓ {result.command} complete")
    print("=" * 60)
    for row in result.rows:
        print("  " + "  ".join(f"{key}={_fmt(value)}" for key, value in row.items()))
    for key, value in result.summary.items():
        print(f"  {key}: {_fmt(value)}")
    for path in result.outputs:
        print(f"  wrote {path}")


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return f"{value:.2f}"
    if isinstance(value, list):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function; returns the process exit code"""
    args = build_parser().parse_args(argv)

    setup_logging(log_level=args.log_level or "INFO")
    config = load_config(args.settings)
    log_config = config.get("logging", {})
    setup_logging(log_level=args.log_level or log_config.get("level", "INFO"), log_file=log_config.get("file"))

    logger = logging.getLogger(__name__)
    logger.info(f"Running {args.command}")

    try:
        result = dispatch(args, config)
    except Exception as e:
        logger.error(f"Error in {args.command}: {e}", exc_info=True)
        return EXIT_INVALID

    print_summary(result)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
