#!/usr/bin/env python3
"""
Reporters Module

This module provides the output formats for training runs and sweeps.

Available reporters:
    - Console Reporter: Formatted console output
    - JSON Reporter: Line-delimited metric streams and run records
    - CSV Reporter: Cross-run summary tables
"""

from tools.lib.reporters.console_reporter import (
    format_summary_table,
    print_run_summary,
    print_summary_table,
)
from tools.lib.reporters.csv_reporter import CSVReporter
from tools.lib.reporters.json_reporter import (
    MetricsWriter,
    load_run_record,
    read_metrics,
    save_run_record,
)


__all__ = [
    "format_summary_table",
    "print_run_summary",
    "print_summary_table",
    "MetricsWriter",
    "read_metrics",
    "save_run_record",
    "load_run_record",
    "CSVReporter",
]
