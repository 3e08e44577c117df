#!/usr/bin/env python3
"""
Utility Functions Module

Provides common helpers for number formatting and summary statistics.
"""

from typing import Sequence, Tuple, Union

import numpy as np


def format_number(number: Union[int, float, str], decimal_places: int = 2) -> str:
    """
    Format number with thousand separators and specified decimal places

    Args:
        number: Number to format (can be int, float, or string)
        decimal_places (int): Number of decimal places (default: 2)

    Returns:
        str: Formatted number string with thousand separators
    """
    if isinstance(number, str):
        number = float(number)
    return f"{number:,.{decimal_places}f}"


def mean_stderr(values: Sequence[float]) -> Tuple[float, float]:
    """
    Mean and standard error of the mean

    A single value has standard error 0.

    Raises:
        ValueError: For an empty sequence
    """
    data = np.asarray(values, dtype=np.float64)
    if data.size == 0:
        raise ValueError("mean_stderr needs at least one value")
    if data.size == 1:
        return float(data[0]), 0.0
    return float(data.mean()), float(data.std(ddof=1) / np.sqrt(data.size))
