"""
Per-branch Gaussian reward beliefs and the losses defined on them.

The tensor helpers here are shared by every estimator so that the float-level
``nll_loss``/``regularizer`` and the training losses evaluate one formula.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from tools.lib.exceptions import ActionIndexError, NumericalError
from tools.lib.nn import Tensor, as_tensor


SIGMA_FLOOR = 1e-4
LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class RewardBeliefs:
    """
    Gaussian parameters (mu, sigma) for every action branch.

    Arrays share a shape whose trailing axis is the branch index, so a
    single agent has shape (K,) and a batch of agents (B, N, K).
    """

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self) -> None:
        mu = np.asarray(self.mu, dtype=np.float64)
        sigma = np.asarray(self.sigma, dtype=np.float64)
        if mu.shape != sigma.shape:
            raise ValueError(f"mu shape {mu.shape} differs from sigma shape {sigma.shape}")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(sigma))):
            raise NumericalError("reward beliefs")
        if np.any(sigma <= 0):
            raise ValueError("sigma must be > 0 on every branch")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def num_actions(self) -> int:
        return int(self.mu.shape[-1])

    @classmethod
    def floored(cls, mu: np.ndarray, sigma: np.ndarray, floor: float = SIGMA_FLOOR) -> "RewardBeliefs":
        """Beliefs with sigma raised to at least ``floor``."""
        return cls(mu=np.asarray(mu, dtype=np.float64), sigma=np.maximum(sigma, floor))


def split_head(out: Tensor, num_actions: int, floor: float = SIGMA_FLOOR) -> Tuple[Tensor, Tensor]:
    """Split a (..., 2K) network output into mu and softplus-floored sigma."""
    mu = out[..., :num_actions]
    sigma = out[..., num_actions:].softplus() + floor
    return mu, sigma


def gaussian_nll(mu: Tensor, sigma: Tensor, target: object) -> Tensor:
    """Elementwise 0.5*ln(2*pi*sigma^2) + (r - mu)^2 / (2*sigma^2)."""
    residual = as_tensor(target) - mu
    return 0.5 * LOG_2PI + sigma.log() + residual * residual / (2.0 * sigma * sigma)


def belief_penalty(mu: Tensor, sigma: Tensor, alpha: float, beta: float) -> Tensor:
    """alpha * ||sigma||_1 + beta * population variance of mu, over the last axis."""
    centered = mu - mu.mean(axis=-1, keepdims=True)
    return alpha * sigma.sum(axis=-1) + beta * (centered * centered).mean(axis=-1)


def _check_coefficients(alpha: float, beta: float) -> None:
    if alpha < 0 or beta < 0:
        raise ValueError(f"alpha and beta must be >= 0, got {alpha}, {beta}")


def nll_loss(beliefs: RewardBeliefs, k: int, r_k: float) -> float:
    """Negative log likelihood of reward r_k on branch k."""
    if not 0 <= k < beliefs.num_actions:
        raise ActionIndexError(k, beliefs.num_actions)
    sigma = beliefs.sigma[..., k]
    if np.any(sigma <= 0):
        raise ValueError("sigma must be > 0")
    return float(gaussian_nll(Tensor(beliefs.mu[..., k]), Tensor(sigma), r_k).item())


def regularizer(beliefs: RewardBeliefs, alpha: float, beta: float) -> float:
    _check_coefficients(alpha, beta)
    penalty = belief_penalty(Tensor(beliefs.mu), Tensor(beliefs.sigma), alpha, beta)
    return float(penalty.item())


def sample_or_mean(
    beliefs: RewardBeliefs, mode: str, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """
    Reduce beliefs to one reward per branch.

    Args:
        beliefs: Branch Gaussians
        mode: "mean" returns mu; "sample" draws every branch independently
        rng: Generator used in sample mode

    Returns:
        Array shaped like beliefs.mu
    """
    if mode == "mean":
        return beliefs.mu.copy()
    if mode == "sample":
        if rng is None:
            raise ValueError("sample mode needs an rng")
        return beliefs.mu + beliefs.sigma * rng.standard_normal(beliefs.mu.shape)
    raise ValueError(f"Unknown reward mode '{mode}' (expected mean or sample)")


__all__ = [
    "SIGMA_FLOOR",
    "RewardBeliefs",
    "split_head",
    "gaussian_nll",
    "belief_penalty",
    "nll_loss",
    "regularizer",
    "sample_or_mean",
]
