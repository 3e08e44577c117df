"""
Adam optimizer over a ParamStore.
"""

from typing import Mapping

import numpy as np

from tools.lib.exceptions import NumericalError, ShapeMismatchError
from tools.lib.nn.params import ParamStore


def adam_step(
    params: ParamStore,
    grads: Mapping[str, np.ndarray],
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> ParamStore:
    """
    Apply one bias-corrected Adam update in place.

    Args:
        params: Parameters and their moment slots
        grads: Gradient per parameter name, shapes matching the parameters
        lr: Learning rate (0 leaves values untouched)
        beta1: First-moment decay
        beta2: Second-moment decay
        eps: Denominator guard

    Returns:
        The same ParamStore, with its step counter incremented

    Raises:
        ShapeMismatchError: If a gradient shape differs from its parameter
        NumericalError: If the update would produce non-finite values
    """
    if lr < 0:
        raise ValueError(f"Learning rate must be >= 0, got {lr}")

    for name in params:
        if name not in grads:
            raise KeyError(f"No gradient for parameter '{name}'")
        if np.shape(grads[name]) != params[name].shape:
            raise ShapeMismatchError(
                f"Gradient for '{name}'", params[name].shape, np.shape(grads[name])
            )

    step = params.step + 1
    updates = {}
    new_moments = {}
    for name in params:
        g = np.asarray(grads[name], dtype=np.float64)
        m, v = params.moments(name)
        m_new = beta1 * m + (1.0 - beta1) * g
        v_new = beta2 * v + (1.0 - beta2) * g * g
        m_hat = m_new / (1.0 - beta1**step)
        v_hat = v_new / (1.0 - beta2**step)
        delta = lr * m_hat / (np.sqrt(v_hat) + eps)
        if not (np.all(np.isfinite(delta)) and np.all(np.isfinite(v_new))):
            raise NumericalError(f"Adam update of '{name}'")
        updates[name] = delta
        new_moments[name] = (m_new, v_new)

    # Commit only after every parameter produced a finite update
    for name, delta in updates.items():
        m, v = params.moments(name)
        m[...], v[...] = new_moments[name]
        params[name].data -= delta
    params.advance()
    return params


__all__ = ["adam_step"]
