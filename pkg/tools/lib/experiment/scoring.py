"""
Normalized performance and final-evaluation extraction.
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np


OMEGA = 10.0


@dataclass(frozen=True)
class NormalizedScores:
    """
    Affinely rescaled scores in [0, omega].

    ``degenerate`` is set when every input was equal; all scores are then
    omega / 2.
    """

    values: Tuple[float, ...]
    omega: float = OMEGA
    degenerate: bool = False


def normalize_scores(values: Sequence[float], omega: float = OMEGA) -> NormalizedScores:
    """
    Map the minimum to 0 and the maximum to omega.

    Raises:
        ValueError: If fewer than two values are given
    """
    data = np.asarray(values, dtype=np.float64)
    if data.size < 2:
        raise ValueError("normalize_scores needs at least two values")
    low, high = float(data.min()), float(data.max())
    if high == low:
        return NormalizedScores(tuple([omega / 2.0] * data.size), omega, degenerate=True)
    scaled = omega * ((data - low) / (high - low))
    # extremes are exact; rounding may not land on them
    scaled[data == low] = 0.0
    scaled[data == high] = omega
    scaled = np.clip(scaled, 0.0, omega)
    return NormalizedScores(tuple(float(v) for v in scaled), omega)


def final_record(records: Iterable[Mapping[str, Any]]) -> Dict[str, Any]:
    """
    Final evaluation of a metric stream.

    Returns:
        Dict with episode, final_mean and final_stderr of the last record

    Raises:
        ValueError: If the stream holds no evaluation record
    """
    last = None
    for record in records:
        if record.get("eval_mean_reward") is not None:
            last = record
    if last is None:
        raise ValueError("Metric stream contains no evaluation records")
    return {
        "episode": int(last["episode"]),
        "final_mean": float(last["eval_mean_reward"]),
        "final_stderr": float(last.get("eval_stderr", 0.0)),
    }


__all__ = ["OMEGA", "NormalizedScores", "normalize_scores", "final_record"]
