#!/usr/bin/env python3
"""
DRE-MARL experiment driver

Trains cooperative multi-agent policies on the particle scenarios with
distributional reward estimation, runs seeded sweeps over configurations,
summarizes metric files and runs the test suites.

Usage:
    python dremarl.py train --scenario cn --agents 3 --reward-setting ac-dist
    python dremarl.py sweep --estimator dre p2p none --seeds 0 1 2
    python dremarl.py summarize results
    python dremarl.py check --slow
"""

import argparse
import itertools
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from tools.lib.config_loader import ConfigurationError
from tools.lib.container import ExperimentContainer
from tools.lib.exceptions import (
    AggregationError,
    DreMarlError,
    NumericalError,
    RewardSettingError,
    ScenarioError,
    ShapeMismatchError,
)
from tools.lib.experiment.summary import find_metric_files, summarize
from tools.lib.experiment.sweep import SUMMARY_FILE, run_single, sweep
from tools.lib.logger import logger
from tools.lib.reporters import CSVReporter, print_run_summary, print_summary_table


TESTS_DIR = Path(__file__).resolve().parent / "tests"

# CLI flag -> RunConfig field
RUN_FLAGS = {
    "scenario": "scenario",
    "agents": "agents",
    "reward_setting": "reward_setting",
    "estimator": "estimator",
    "aggregation": "aggregation",
    "reward_mode": "reward_mode",
    "reward_signal": "reward_signal",
    "episodes": "episodes",
}


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid integer: '{value}'") from e
    if number <= 0:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got {number}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dremarl",
        description="Distributional reward estimation for multi-agent RL",
        epilog="Example: python dremarl.py train --scenario cn --agents 3 --seed 0",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="Train a single run")
    train.add_argument("--config", metavar="FILE", help="JSON configuration file")
    train.add_argument("--out", metavar="DIR", help="Output root (default: $DREMARL_OUTPUT_ROOT or results)")
    train.add_argument("--scenario")
    train.add_argument("--agents", type=positive_int)
    train.add_argument("--reward-setting", dest="reward_setting")
    train.add_argument("--estimator")
    train.add_argument("--aggregation")
    train.add_argument("--reward-mode", dest="reward_mode")
    train.add_argument("--reward-signal", dest="reward_signal")
    train.add_argument("--episodes", type=positive_int)
    train.add_argument("--seed", type=int)
    train.add_argument("--checkpoint", metavar="PATH", help="Save final networks as .npz")
    train.add_argument("--trajectory", metavar="PATH", help="Dump one greedy episode as JSON lines")

    grid = sub.add_parser("sweep", help="Run every (config, seed) combination")
    grid.add_argument("--config", metavar="FILE", help="JSON base configuration file")
    grid.add_argument("--out", metavar="DIR")
    grid.add_argument("--scenario", nargs="+")
    grid.add_argument("--agents", nargs="+", type=positive_int)
    grid.add_argument("--reward-setting", dest="reward_setting", nargs="+")
    grid.add_argument("--estimator", nargs="+")
    grid.add_argument("--aggregation", nargs="+")
    grid.add_argument("--reward-mode", dest="reward_mode", nargs="+")
    grid.add_argument("--reward-signal", dest="reward_signal", nargs="+")
    grid.add_argument("--episodes", type=positive_int)
    grid.add_argument("--seeds", nargs="+", type=int, default=[0, 1, 2])
    grid.add_argument("--workers", type=positive_int, default=1)

    summary = sub.add_parser("summarize", help="Summarize metric files below a directory")
    summary.add_argument("directory", nargs="?", help="Directory to scan (default: output root)")
    summary.add_argument("--csv", metavar="FILE", help="Summary CSV path (default: <directory>/summary.csv)")

    check = sub.add_parser("check", help="Run the property and oracle test suites")
    check.add_argument("--slow", action="store_true", help="Include the long acceptance runs")

    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {field: getattr(args, flag, None) for flag, field in RUN_FLAGS.items()}


def grid_overrides(args: argparse.Namespace) -> List[Dict[str, Any]]:
    """Cartesian product of every list-valued flag; unset flags keep the file value."""
    axes = {
        field: getattr(args, flag)
        for flag, field in RUN_FLAGS.items()
        if flag != "episodes" and getattr(args, flag, None)
    }
    names = sorted(axes)
    combos = itertools.product(*(axes[n] for n in names)) if names else [()]
    grid = [{**dict(zip(names, combo)), "episodes": args.episodes} for combo in combos]
    # no estimator means nothing to aggregate beyond ss-ss
    return [
        o for o in grid
        if o.get("estimator") != "none" or o.get("aggregation", "ss-ss") == "ss-ss"
    ]


def cmd_train(args: argparse.Namespace, container: ExperimentContainer) -> int:
    overrides = _overrides(args)
    overrides["seed"] = args.seed
    loader = container.config_loader
    config = loader.load_config(overrides)
    loader.print_config_summary()

    logger.info(f"\n🚀 Training {config.run_id}")
    record = run_single(
        config,
        container.output_root,
        checkpoint=args.checkpoint,
        trajectory=args.trajectory,
        log=container.structured_logger,
    )
    print_run_summary(record.label, record.seed, {
        "final_mean": record.final_mean,
        "final_stderr": record.final_stderr,
        "episode": config.episodes,
    })
    logger.info(f"   Metrics: {record.metrics_file}")
    if args.checkpoint:
        logger.info(f"   Checkpoint: {args.checkpoint}")
    if args.trajectory:
        logger.info(f"   Trajectory: {args.trajectory}")
    return 0


def cmd_sweep(args: argparse.Namespace, container: ExperimentContainer) -> int:
    loader = container.config_loader
    configs = [loader.load_config(o) for o in grid_overrides(args)]
    result = sweep(
        configs,
        args.seeds,
        container.output_root,
        workers=args.workers,
        log=container.structured_logger,
    )
    print_summary_table(result.summary)
    if result.summary_file:
        logger.info(f"📄 Summary: {result.summary_file}")
    for failure in result.failures:
        logger.warning(f"⚠️  {failure.run_id}: {failure.error}")
    return 1 if result.failures else 0


def cmd_summarize(args: argparse.Namespace, container: ExperimentContainer) -> int:
    root = Path(args.directory) if args.directory else container.output_root
    files = find_metric_files(root)
    if not files:
        logger.error(f"❌ No metric files found below {root}")
        return 1
    rows = summarize(files)
    path = CSVReporter.write_summary_csv(args.csv or root / SUMMARY_FILE, rows)
    print_summary_table(rows)
    logger.info(f"📄 Summary: {path}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    import pytest

    options = [str(TESTS_DIR), "-q"]
    if args.slow:
        options += ["-m", "slow or not slow"]
    return int(pytest.main(options))


def main(argv: Optional[Sequence[str]] = None, container: Optional[ExperimentContainer] = None) -> int:
    """
    Entry point of the experiment driver.

    Args:
        argv: Command-line arguments (default: sys.argv[1:])
        container: Optional dependency injection container for testing

    Returns:
        Exit code (0 for success, 1 for failure)
    """
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return cmd_check(args)

    try:
        if container is None:
            container = ExperimentContainer(
                config_path=getattr(args, "config", None),
                output_root=getattr(args, "out", None),
            )
        if args.command in ("train", "sweep"):
            container.initialize()
        if args.command == "train":
            return cmd_train(args, container)
        if args.command == "sweep":
            return cmd_sweep(args, container)
        return cmd_summarize(args, container)

    except ConfigurationError as e:
        logger.error(f"\n❌ Configuration error: {e}")
        logger.error("   Check the configuration file and command-line flags")
        return 1

    except ScenarioError as e:
        logger.error(f"\n❌ Unsupported scenario: {e}")
        return 1

    except (RewardSettingError, AggregationError) as e:
        logger.error(f"\n❌ Invalid reward setup: {e}")
        return 1

    except NumericalError as e:
        logger.error(f"\n❌ Numerical failure: {e}")
        logger.error("   Try a smaller learning rate or another seed")
        return 1

    except ShapeMismatchError as e:
        logger.error(f"\n❌ Shape mismatch: {e}")
        return 1

    except DreMarlError as e:
        logger.error(f"\n❌ Run failed: {e}")
        return 1

    except Exception as e:
        logger.error(f"\n❌ Unexpected failure: {e}")
        return 1


if __name__ == "__main__":
    exit(main())
