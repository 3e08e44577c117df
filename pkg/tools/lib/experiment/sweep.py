#!/usr/bin/env python3
"""
Seeded multi-run sweeps with per-run failure isolation.

Every (config, seed) pair trains in its own directory
``<out>/runs/<run_id>/`` holding ``config.json``, ``metrics.jsonl`` and
``record.json``. A failing run is recorded with ``status="failed"`` and the
sweep carries on.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from tools.lib.config_loader import canonical_json
from tools.lib.envs.trajectory import dump_trajectory
from tools.lib.exceptions import RunFailedError
from tools.lib.experiment.scoring import final_record
from tools.lib.experiment.summary import CONFIG_FILE, METRICS_FILE, SummaryRow, summarize
from tools.lib.logger import logger
from tools.lib.logging.structured_logger import StructuredLogger
from tools.lib.models.config_models import RunConfig
from tools.lib.reporters.csv_reporter import CSVReporter
from tools.lib.reporters.json_reporter import MetricsWriter, save_run_record
from tools.lib.trainer.checkpoint import save_checkpoint
from tools.lib.trainer.loop import greedy_trajectory, train


RECORD_FILE = "record.json"
SUMMARY_FILE = "summary.csv"


@dataclass
class RunRecord:
    """Outcome of one (config, seed) run."""

    run_id: str
    label: str
    seed: int
    config: Dict[str, Any]
    status: str = "ok"
    metrics_file: Optional[str] = None
    final_mean: Optional[float] = None
    final_stderr: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class SweepResult:
    records: List[RunRecord]
    summary: List[SummaryRow] = field(default_factory=list)
    summary_file: Optional[Path] = None

    @property
    def failures(self) -> List[RunRecord]:
        return [r for r in self.records if not r.ok]


def run_dir(out: Union[str, Path], config: RunConfig) -> Path:
    return Path(out) / "runs" / config.run_id


def run_single(
    config: RunConfig,
    out: Union[str, Path],
    checkpoint: Optional[Union[str, Path]] = None,
    trajectory: Optional[Union[str, Path]] = None,
    log: Optional[StructuredLogger] = None,
) -> RunRecord:
    """
    Train one run and persist its config snapshot, metrics and record.

    Optionally saves a checkpoint of every network and a trajectory dump of
    one greedy episode after training.
    Evaluation events go to ``log`` when given.

    Raises:
        Whatever training raises; callers decide how to isolate it
    """
    directory = run_dir(out, config)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / CONFIG_FILE).write_text(canonical_json(config) + "\n", encoding="utf-8")

    writer = MetricsWriter(directory / METRICS_FILE)
    result = train(config, on_record=writer, log=log)
    final = final_record(result.records)
    if checkpoint is not None:
        stores = dict(result.nets.param_stores())
        if result.estimator is not None:
            stores.update(result.estimator.param_stores())
        save_checkpoint(checkpoint, stores)
    if trajectory is not None:
        dump_trajectory(trajectory, greedy_trajectory(result.nets, config))

    record = RunRecord(
        run_id=config.run_id,
        label=config.label,
        seed=config.seed,
        config=json.loads(canonical_json(config)),
        metrics_file=str(writer.path),
        final_mean=final["final_mean"],
        final_stderr=final["final_stderr"],
    )
    save_run_record(directory / RECORD_FILE, asdict(record))
    return record


def _failed(config: RunConfig, out: Union[str, Path], exc: BaseException) -> RunRecord:
    error = RunFailedError(config.label, config.seed, f"{type(exc).__name__}: {exc}")
    logger.error(f"❌ {error}")
    record = RunRecord(
        run_id=config.run_id,
        label=config.label,
        seed=config.seed,
        config=json.loads(canonical_json(config)),
        status="failed",
        error=str(error),
    )
    save_run_record(run_dir(out, config) / RECORD_FILE, asdict(record))
    return record


def expand(configs: Sequence[RunConfig], seeds: Sequence[int]) -> List[RunConfig]:
    """Cartesian product of configurations and seeds."""
    return [c.model_copy(update={"seed": s}) for c in configs for s in seeds]


def _check_unique(runs: Sequence[RunConfig]) -> None:
    """Distinct configurations must not share a run directory."""
    seen: Dict[str, str] = {}
    for config in runs:
        snapshot = canonical_json(config)
        previous = seen.setdefault(config.run_id, snapshot)
        if previous != snapshot:
            raise ValueError(f"run ID {config.run_id} is shared by different configurations")


def sweep(
    configs: Sequence[RunConfig],
    seeds: Sequence[int],
    out: Union[str, Path],
    workers: int = 1,
    log: Optional[StructuredLogger] = None,
) -> SweepResult:
    """
    Run every (config, seed) pair and summarize the successful ones.

    Args:
        configs: Configurations (their own seed fields are replaced)
        seeds: Seeds applied to every configuration
        out: Output root
        workers: Process count; 1 runs sequentially in this process
        log: Structured logger handed to every run

    Returns:
        SweepResult with one RunRecord per pair and the summary rows

    Raises:
        ValueError: If no configuration is given or two different
            configurations share a run ID
    """
    if not configs:
        raise ValueError("sweep needs at least one configuration")
    runs = expand(configs, seeds)
    _check_unique(runs)
    logger.info(f"🚀 Starting sweep of {len(runs)} runs (max {workers} workers)")

    records: List[RunRecord] = []
    if workers <= 1:
        for config in runs:
            try:
                records.append(run_single(config, out, log=log))
            except Exception as e:
                records.append(_failed(config, out, e))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [(config, executor.submit(run_single, config, out, log=log)) for config in runs]
            for config, future in futures:
                try:
                    records.append(future.result())
                except Exception as e:
                    records.append(_failed(config, out, e))

    completed = [r for r in records if r.ok]
    logger.info(
        f"✅ Sweep completed: {len(completed)} success, {len(records) - len(completed)} failed"
    )

    result = SweepResult(records=records)
    if completed:
        result.summary = summarize(r.metrics_file for r in completed if r.metrics_file)
        result.summary_file = CSVReporter.write_summary_csv(Path(out) / SUMMARY_FILE, result.summary)
    return result


__all__ = ["RunRecord", "SweepResult", "run_dir", "run_single", "expand", "sweep"]
