"""
Experiment driver: scoring, sweeps and summaries.
"""

from tools.lib.experiment.scoring import OMEGA, NormalizedScores, final_record, normalize_scores
from tools.lib.experiment.summary import SummaryRow, find_metric_files, summarize

__all__ = [
    "OMEGA",
    "NormalizedScores",
    "normalize_scores",
    "final_record",
    "SummaryRow",
    "summarize",
    "find_metric_files",
]
