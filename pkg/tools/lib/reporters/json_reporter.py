#!/usr/bin/env python3
"""
JSON Reporter Module

This module persists metric streams as line-delimited JSON and run records
as JSON documents.

Functions:
    - MetricsWriter: Append metric records to a .jsonl file as they arrive
    - read_metrics(): Load a metric stream
    - save_run_record() / load_run_record(): Persist a run's outcome
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from tools.lib.logger import logger


PathLike = Union[str, Path]


def _dumps(record: Mapping[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


class MetricsWriter:
    """
    Line-delimited JSON writer; one record per line, keys sorted.

    The file is truncated on open so that a rerun with the same seed
    produces a byte-identical stream.
    """

    def __init__(self, path: PathLike):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text("", encoding="utf-8")
        self.count = 0

    def __call__(self, record: Mapping[str, Any]) -> None:
        self.write(record)

    def write(self, record: Mapping[str, Any]) -> None:
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(_dumps(record) + "\n")
        self.count += 1


def read_metrics(path: PathLike) -> List[Dict[str, Any]]:
    """Load every record of a metric stream."""
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def save_run_record(path: PathLike, record: Mapping[str, Any]) -> Path:
    """
    Save a run record as indented JSON

    Returns:
        Path of the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(record, f, ensure_ascii=False, indent=2, sort_keys=True)
    logger.debug(f"📄 Run record saved to {path}")
    return path


def load_run_record(path: PathLike) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as f:
        return json.load(f)  # type: ignore[no-any-return]
