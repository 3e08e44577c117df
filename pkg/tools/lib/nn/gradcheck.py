"""
Central finite-difference check of analytic gradients.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from tools.lib.nn.params import ParamStore, backward
from tools.lib.nn.tensor import Tensor


@dataclass(frozen=True)
class GradientReport:
    """Outcome of a gradient check."""

    max_relative_error: float
    checked: int
    skipped: int
    worst_parameter: str = ""


def gradient_check(
    loss_fn: Callable[[], Tensor],
    params: ParamStore,
    h: float = 1e-5,
    max_entries: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    floor: float = 1e-5,
    kink_tolerance: float = 1e-2,
) -> GradientReport:
    """
    Compare backward() gradients with central differences.

    The relative error of one entry is |a - n| / max(|a|, |n|, floor).
    Entries where the forward and backward one-sided slopes disagree by more
    than ``kink_tolerance`` straddle a leaky-relu or clip kink and are skipped.

    Args:
        loss_fn: Rebuilds the scalar loss from the current parameter values
        params: Parameters to perturb
        h: Step size
        max_entries: Sample at most this many entries per parameter
        rng: Sampler for entry selection (required with max_entries)
        floor: Denominator floor
        kink_tolerance: Relative one-sided slope disagreement treated as a kink

    Returns:
        GradientReport with the worst relative error over checked entries
    """
    analytic = backward(loss_fn(), params)
    base = loss_fn().item()
    worst, worst_name = 0.0, ""
    checked = skipped = 0

    for name in params.names():
        flat = params[name].data.reshape(-1)
        grad = analytic[name].reshape(-1)
        indices = np.arange(flat.size)
        if max_entries is not None and flat.size > max_entries:
            sampler = rng if rng is not None else np.random.default_rng(0)
            indices = sampler.choice(flat.size, size=max_entries, replace=False)

        for j in indices:
            original = flat[j]
            flat[j] = original + h
            plus = loss_fn().item()
            flat[j] = original - h
            minus = loss_fn().item()
            flat[j] = original

            forward_slope = (plus - base) / h
            backward_slope = (base - minus) / h
            scale = max(abs(forward_slope), abs(backward_slope), floor)
            if abs(forward_slope - backward_slope) / scale > kink_tolerance:
                skipped += 1
                continue

            numeric = (plus - minus) / (2.0 * h)
            a = float(grad[j])
            error = abs(a - numeric) / max(abs(a), abs(numeric), floor)
            checked += 1
            if error > worst:
                worst, worst_name = error, name

    return GradientReport(
        max_relative_error=worst,
        checked=checked,
        skipped=skipped,
        worst_parameter=worst_name,
    )


__all__ = ["GradientReport", "gradient_check"]
