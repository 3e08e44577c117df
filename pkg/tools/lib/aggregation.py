#!/usr/bin/env python3
"""
Reward build-up and policy-weighted aggregation.

    build_up   m = r_hat with the executed branch replaced by the received reward
    g (critic) MO: pi_i . mean_j(m_j)       SS: pi_i . m_i
    l (actor)  MO: mean over all m entries  SMO: mean(m_i)   SS: received r_i

Scheme tags name the lumped rule first, then the mixed rule:
ss-ss, smo-mo, mo-mo, smo-ss and smo-only (critic trains on received rewards).
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from tools.lib.exceptions import ActionIndexError, AggregationError


MIXED_RULES = ("MO", "SS")
LUMPED_RULES = ("MO", "SMO", "SS")
SIMPLEX_TOLERANCE = 1e-9


@dataclass(frozen=True)
class AggregationScheme:
    """A lumped rule for the actors and an optional mixed rule for the critic."""

    lumped: str
    mixed: Optional[str]

    def __post_init__(self) -> None:
        if self.lumped not in LUMPED_RULES:
            raise AggregationError(f"Unknown lumped rule '{self.lumped}'")
        if self.mixed is not None and self.mixed not in MIXED_RULES:
            raise AggregationError(f"Unknown mixed rule '{self.mixed}'")

    @classmethod
    def from_tag(cls, tag: str) -> "AggregationScheme":
        if tag not in SCHEMES:
            raise AggregationError(
                f"Unknown aggregation scheme '{tag}' (expected one of {', '.join(SCHEMES)})"
            )
        return SCHEMES[tag]

    @property
    def tag(self) -> str:
        return f"{self.lumped.lower()}-{self.mixed.lower() if self.mixed else 'only'}"


SCHEMES: Dict[str, AggregationScheme] = {
    "ss-ss": AggregationScheme("SS", "SS"),
    "smo-mo": AggregationScheme("SMO", "MO"),
    "mo-mo": AggregationScheme("MO", "MO"),
    "smo-ss": AggregationScheme("SMO", "SS"),
    "smo-only": AggregationScheme("SMO", None),
}


def _check_simplex(weights: np.ndarray) -> None:
    if np.any(weights < 0) or np.any(np.abs(weights.sum(axis=-1) - 1.0) > SIMPLEX_TOLERANCE):
        raise AggregationError("Policy weights must be non-negative and sum to 1")


def _as_matrix(ms: Sequence[Sequence[float]]) -> np.ndarray:
    try:
        matrix = np.asarray(ms, dtype=np.float64)
    except ValueError as e:
        raise AggregationError(f"Built-up vectors differ in length: {e}") from e
    if matrix.ndim != 2:
        raise AggregationError("Built-up vectors must form an (agents, K) matrix")
    return matrix


def build_up(r_hat: Sequence[float], k: int, r_k: float) -> np.ndarray:
    """Copy of r_hat with branch k replaced by the received reward."""
    m = np.array(r_hat, dtype=np.float64)
    if not 0 <= k < m.shape[-1]:
        raise ActionIndexError(k, m.shape[-1])
    m[k] = r_k
    return m


def mixed_reward(g: str, ms: Sequence[Sequence[float]], i: int, weights: Sequence[float]) -> float:
    """Critic target reward of agent i under mixed rule g."""
    matrix = _as_matrix(ms)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (matrix.shape[1],):
        raise AggregationError(f"Weights of length {w.size} for K={matrix.shape[1]}")
    _check_simplex(w)
    if g == "MO":
        return float(matrix.mean(axis=0) @ w)
    if g == "SS":
        return float(matrix[i] @ w)
    raise AggregationError(f"Unknown mixed rule '{g}'")


def lumped_reward(l: str, ms: Sequence[Sequence[float]], i: int, r_k: float) -> float:
    """Advantage reward of agent i under lumped rule l."""
    matrix = _as_matrix(ms)
    if l == "MO":
        return float(matrix.mean())
    if l == "SMO":
        return float(matrix[i].mean())
    if l == "SS":
        return float(r_k)
    raise AggregationError(f"Unknown lumped rule '{l}'")


def build_up_batch(r_hat: np.ndarray, actions: np.ndarray, rewards: np.ndarray) -> np.ndarray:
    """Batched build_up over (..., N, K) estimates, (..., N) actions and rewards."""
    m = np.array(r_hat, dtype=np.float64)
    actions = np.asarray(actions, dtype=np.int64)
    k_count = m.shape[-1]
    if actions.shape != m.shape[:-1] or np.shape(rewards) != m.shape[:-1]:
        raise AggregationError("Actions and rewards must match the leading estimate axes")
    if np.any((actions < 0) | (actions >= k_count)):
        raise ActionIndexError(int(actions[(actions < 0) | (actions >= k_count)][0]), k_count)
    np.put_along_axis(m, actions[..., None], np.asarray(rewards, dtype=np.float64)[..., None], axis=-1)
    return m


def mixed_rewards(
    g: Optional[str], m: np.ndarray, weights: np.ndarray, rewards: np.ndarray
) -> np.ndarray:
    """
    Batched mixed rewards, shape (B, N).

    Args:
        g: "MO", "SS", or None to pass the received rewards through
        m: Built-up vectors (B, N, K)
        weights: Target-policy distributions (B, N, K)
        rewards: Received rewards (B, N)
    """
    if g is None:
        return np.asarray(rewards, dtype=np.float64).copy()
    if weights.shape != m.shape:
        raise AggregationError(f"Weights shape {weights.shape} differs from {m.shape}")
    _check_simplex(weights)
    if g == "MO":
        return (m.mean(axis=-2, keepdims=True) * weights).sum(axis=-1)
    if g == "SS":
        return (m * weights).sum(axis=-1)
    raise AggregationError(f"Unknown mixed rule '{g}'")


def lumped_rewards(l: str, m: np.ndarray, rewards: np.ndarray) -> np.ndarray:
    """Batched lumped rewards, shape (B, N)."""
    rewards = np.asarray(rewards, dtype=np.float64)
    if l == "MO":
        return np.broadcast_to(m.mean(axis=(-2, -1))[..., None], rewards.shape).copy()
    if l == "SMO":
        return m.mean(axis=-1)
    if l == "SS":
        return rewards.copy()
    raise AggregationError(f"Unknown lumped rule '{l}'")


__all__ = [
    "MIXED_RULES",
    "LUMPED_RULES",
    "SCHEMES",
    "AggregationScheme",
    "build_up",
    "mixed_reward",
    "lumped_reward",
    "build_up_batch",
    "mixed_rewards",
    "lumped_rewards",
]
