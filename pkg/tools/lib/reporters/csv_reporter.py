#!/usr/bin/env python3
"""
CSV Reporter Module - summary tables of experiment sweeps

One row per configuration: scenario, agents, reward setting, estimator,
aggregation, seed count, mean ± standard error of final evaluations and the
normalized score within its (scenario, agents, reward setting) cell.
"""

import csv
from pathlib import Path
from typing import Dict, List, Sequence, Union

from tools.lib.experiment.summary import SummaryRow


SUMMARY_HEADER = [
    "label",
    "scenario",
    "agents",
    "reward_setting",
    "estimator",
    "aggregation",
    "seeds",
    "mean",
    "stderr",
    "normalized",
]


class CSVReporter:
    """CSV summary writer"""

    @staticmethod
    def write_summary_csv(filename: Union[str, Path], rows: Sequence[SummaryRow]) -> Path:
        """
        Write the cross-run summary table

        Args:
            filename: Output file
            rows: Summary rows in output order

        Returns:
            Path of the written file
        """
        path = Path(filename)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(SUMMARY_HEADER)
            for row in rows:
                writer.writerow(
                    [
                        row.label,
                        row.scenario,
                        row.agents,
                        row.reward_setting,
                        row.estimator,
                        row.aggregation,
                        row.seeds,
                        repr(row.mean),
                        repr(row.stderr),
                        "" if row.normalized is None else repr(row.normalized),
                    ]
                )
        return path

    @staticmethod
    def read_summary_csv(filename: Union[str, Path]) -> List[Dict[str, str]]:
        """Read a summary table back as a list of dicts keyed by header."""
        with open(filename, newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))
