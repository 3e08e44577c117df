"""
Replay storage for joint agent transitions.
"""

from collections import deque
from dataclasses import dataclass
from typing import Deque, Iterable, List

import numpy as np

from tools.lib.exceptions import AggregationError


@dataclass(frozen=True)
class Transition:
    """
    One joint step of all agents.

    Attributes:
        obs: (N, F) observations before the step
        policies: (N, K) behavior-policy distributions that chose the actions
        actions: (N,) executed action indices
        rewards: (N,) received (possibly perturbed) rewards
        next_obs: (N, F) observations after the step
    """

    obs: np.ndarray
    policies: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_obs: np.ndarray

    def __post_init__(self) -> None:
        p = self.policies
        if np.any(p < 0) or np.any(np.abs(p.sum(axis=-1) - 1.0) > 1e-9):
            raise AggregationError("Stored policy vectors must be probability simplices")


@dataclass(frozen=True)
class Batch:
    """Stacked transitions; every field gains a leading batch axis."""

    obs: np.ndarray
    policies: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_obs: np.ndarray

    @classmethod
    def stack(cls, transitions: List[Transition]) -> "Batch":
        return cls(
            obs=np.stack([t.obs for t in transitions]),
            policies=np.stack([t.policies for t in transitions]),
            actions=np.stack([t.actions for t in transitions]).astype(np.int64),
            rewards=np.stack([t.rewards for t in transitions]),
            next_obs=np.stack([t.next_obs for t in transitions]),
        )

    def __len__(self) -> int:
        return int(self.obs.shape[0])


class ReplayBuffer:
    """
    Bounded FIFO of transitions with periodic partial clearing.

    The oldest transitions leave first, both when the capacity is exceeded and
    on refresh().
    """

    def __init__(self, capacity: int = 25000):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._items: Deque[Transition] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._items)

    def add(self, transition: Transition) -> None:
        self._items.append(transition)

    def extend(self, transitions: Iterable[Transition]) -> None:
        for t in transitions:
            self.add(t)

    def items(self) -> List[Transition]:
        """Transitions from oldest to newest."""
        return list(self._items)

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        """Uniform draw with replacement."""
        if not self._items:
            raise ValueError("Cannot sample from an empty replay buffer")
        items = self.items()
        idx = rng.integers(0, len(items), size=batch_size)
        return Batch.stack([items[i] for i in idx])

    def refresh(self, fraction: float = 0.4) -> int:
        """
        Drop the oldest ``fraction`` of stored transitions.

        Returns:
            Number of transitions removed
        """
        if not 0.0 <= fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {fraction}")
        drop = int(len(self._items) * fraction)
        for _ in range(drop):
            self._items.popleft()
        return drop


__all__ = ["Transition", "Batch", "ReplayBuffer"]
