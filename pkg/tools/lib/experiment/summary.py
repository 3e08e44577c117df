"""
Cross-run summaries computed purely from metric files.

Each run directory holds ``metrics.jsonl`` and a ``config.json`` snapshot;
runs sharing a configuration label are pooled across seeds.
"""

import json
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from tools.lib.experiment.scoring import OMEGA, final_record, normalize_scores
from tools.lib.logger import logger
from tools.lib.models.config_models import RunConfig
from tools.lib.utils import mean_stderr


METRICS_FILE = "metrics.jsonl"
CONFIG_FILE = "config.json"


@dataclass
class SummaryRow:
    """Mean ± standard error of final evaluations across seeds."""

    label: str
    scenario: str
    agents: int
    reward_setting: str
    estimator: str
    aggregation: str
    seeds: int
    mean: float
    stderr: float
    normalized: Optional[float] = None

    @property
    def cell(self) -> Tuple[str, int, str]:
        return (self.scenario, self.agents, self.reward_setting)


def load_run(metrics_file: Union[str, Path]) -> Tuple[RunConfig, Dict[str, float]]:
    """Config snapshot and final evaluation of one run directory."""
    path = Path(metrics_file)
    with open(path.parent / CONFIG_FILE, encoding="utf-8") as f:
        config = RunConfig.model_validate(json.load(f))
    with open(path, encoding="utf-8") as f:
        records = [json.loads(line) for line in f if line.strip()]
    return config, final_record(records)


def summarize(metric_files: Iterable[Union[str, Path]], omega: float = OMEGA) -> List[SummaryRow]:
    """
    Pool runs by configuration label and score them within their cell.

    Args:
        metric_files: Paths of metrics.jsonl files
        omega: Upper end of the normalized scale

    Returns:
        Rows sorted by label; ``normalized`` stays None in single-row cells
    """
    finals: Dict[str, List[float]] = defaultdict(list)
    configs: Dict[str, RunConfig] = {}
    for metrics_file in sorted(Path(p) for p in metric_files):
        try:
            config, final = load_run(metrics_file)
        except (ValueError, OSError) as e:
            # failed runs leave a stream without evaluations or a partial directory
            logger.warning(f"⚠️  Skipping {metrics_file}: {e}")
            continue
        finals[config.label].append(final["final_mean"])
        configs.setdefault(config.label, config)

    rows = []
    for label in sorted(finals):
        c = configs[label]
        mean, stderr = mean_stderr(finals[label])
        rows.append(
            SummaryRow(
                label=label,
                scenario=c.scenario,
                agents=c.agents,
                reward_setting=c.reward_setting,
                estimator=c.estimator,
                aggregation=c.aggregation,
                seeds=len(finals[label]),
                mean=mean,
                stderr=stderr,
            )
        )

    cells: Dict[Tuple[str, int, str], List[SummaryRow]] = defaultdict(list)
    for row in rows:
        cells[row.cell].append(row)
    for members in cells.values():
        if len(members) < 2:
            continue
        scores = normalize_scores([r.mean for r in members], omega)
        for row, value in zip(members, scores.values):
            row.normalized = value
    return rows


def find_metric_files(root: Union[str, Path]) -> List[Path]:
    """Every metrics.jsonl below ``root``."""
    return sorted(Path(root).rglob(METRICS_FILE))


__all__ = ["METRICS_FILE", "CONFIG_FILE", "SummaryRow", "load_run", "summarize", "find_metric_files"]
