#!/usr/bin/env python3
"""
Console Reporter Module

This module renders training progress and sweep summaries for the console.

Functions:
    - format_summary_table(): Render summary rows as a fixed-width table
    - print_summary_table(): Log the summary table
    - print_run_summary(): Log the final evaluation of one run
"""

from typing import Any, Dict, List, Optional, Sequence

from tools.lib.experiment.summary import SummaryRow
from tools.lib.logger import logger
from tools.lib.utils import format_number


def _fmt(value: Optional[float], places: int = 2) -> str:
    return "-" if value is None else format_number(value, places)


def format_summary_table(rows: Sequence[SummaryRow]) -> str:
    """
    Render summary rows grouped by (scenario, agents, reward setting)

    Args:
        rows: Summary rows as returned by summarize()

    Returns:
        str: Formatted table
    """
    lines: List[str] = ["=" * 80, "📊 Experiment summary", "=" * 80]
    current = None
    for row in sorted(rows, key=lambda r: (r.cell, r.label)):
        if row.cell != current:
            current = row.cell
            scenario, agents, setting = row.cell
            lines.extend(["", f"🔍 {scenario} | N={agents} | {setting}"])
        lines.append(
            f"   {row.estimator:<5} {row.aggregation:<9}"
            f"{_fmt(row.mean):>12} ± {_fmt(row.stderr):<8}"
            f" seeds={row.seeds:<3} score={_fmt(row.normalized)}"
        )
    lines.extend(["", "=" * 80])
    return "\n".join(lines)


def print_summary_table(rows: Sequence[SummaryRow]) -> None:
    if not rows:
        logger.warning("⚠️  No completed runs to summarize")
        return
    logger.info(format_summary_table(rows))


def print_run_summary(label: str, seed: int, final: Dict[str, Any]) -> None:
    """
    Print the final evaluation of a single run

    Args:
        label: Configuration label
        seed: Run seed
        final: Dict with final_mean / final_stderr / episode
    """
    logger.info(f"\n🎯 {label} (seed {seed}):")
    logger.info(f"   📈 Final evaluation: {_fmt(final.get('final_mean'))} ± {_fmt(final.get('final_stderr'))}")
    logger.info(f"   🏁 Evaluated at episode {final.get('episode')}")
