#!/usr/bin/env python3
"""
Multi-action-branch distributional reward estimator.

Each agent owns an MLP that maps its observation to 2K outputs: K branch
means and K pre-softplus spreads. The executed action selects which branch a
received reward trains; the other branches are inferred from the same
observation.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from tools.lib.envs.particle import NUM_ACTIONS
from tools.lib.estimators.beliefs import (
    SIGMA_FLOOR,
    RewardBeliefs,
    belief_penalty,
    gaussian_nll,
    sample_or_mean,
    split_head,
)
from tools.lib.exceptions import ActionIndexError, ShapeMismatchError
from tools.lib.nn import MlpSpec, ParamStore, Tensor, adam_step, backward, init_mlp, mlp_forward


def check_actions(actions: np.ndarray, num_actions: int) -> np.ndarray:
    actions = np.asarray(actions, dtype=np.int64)
    bad = actions[(actions < 0) | (actions >= num_actions)]
    if bad.size:
        raise ActionIndexError(int(bad.reshape(-1)[0]), num_actions)
    return actions


def check_batch(obs: np.ndarray, *others: np.ndarray) -> int:
    size = int(np.shape(obs)[0]) if np.ndim(obs) else 0
    if size == 0:
        raise ValueError("Estimator update needs a non-empty batch")
    for other in others:
        if np.shape(other)[0] != size:
            raise ShapeMismatchError("batch length", size, np.shape(other)[0])
    return size


@dataclass
class EstimatorNet:
    """One agent's distributional estimator."""

    spec: MlpSpec
    params: ParamStore
    num_actions: int = NUM_ACTIONS
    sigma_floor: float = SIGMA_FLOOR

    def __post_init__(self) -> None:
        if self.spec.output_width != 2 * self.num_actions:
            raise ShapeMismatchError(
                "estimator output width", 2 * self.num_actions, self.spec.output_width
            )

    @classmethod
    def create(
        cls,
        obs_width: int,
        rng: np.random.Generator,
        num_actions: int = NUM_ACTIONS,
        hidden_widths: Tuple[int, ...] = (64, 64),
        sigma_floor: float = SIGMA_FLOOR,
    ) -> "EstimatorNet":
        spec = MlpSpec(
            input_width=obs_width, hidden_widths=hidden_widths, output_width=2 * num_actions
        )
        return cls(spec, init_mlp(spec, rng), num_actions, sigma_floor)

    def head(self, obs: np.ndarray) -> Tuple[Tensor, Tensor]:
        return split_head(mlp_forward(self.spec, self.params, obs), self.num_actions, self.sigma_floor)


def estimate(net: EstimatorNet, obs: np.ndarray) -> RewardBeliefs:
    """Branch beliefs for one observation (F,) or a batch (..., F)."""
    mu, sigma = net.head(obs)
    return RewardBeliefs(mu.numpy(), sigma.numpy())


def estimator_loss(
    net: EstimatorNet,
    obs: np.ndarray,
    actions: np.ndarray,
    rewards: np.ndarray,
    alpha: float,
    beta: float,
) -> Tensor:
    """Mean over the batch of branch NLL plus the per-sample belief penalty."""
    size = check_batch(obs, actions, rewards)
    actions = check_actions(actions, net.num_actions)
    mu, sigma = net.head(np.asarray(obs, dtype=np.float64).reshape(size, -1))
    rows = np.arange(size)
    nll = gaussian_nll(mu[rows, actions], sigma[rows, actions], np.asarray(rewards, dtype=np.float64))
    return (nll + belief_penalty(mu, sigma, alpha, beta)).mean()


def estimator_update(
    net: EstimatorNet,
    obs: np.ndarray,
    actions: np.ndarray,
    rewards: np.ndarray,
    alpha: float = 0.1,
    beta: float = 10.0,
    lr: float = 1e-3,
) -> float:
    """
    One Adam step on the estimator loss.

    Returns:
        The mean loss measured before the step
    """
    loss = estimator_loss(net, obs, actions, rewards, alpha, beta)
    adam_step(net.params, backward(loss, net.params), lr)
    return loss.item()


@dataclass
class DistributionalEstimator:
    """Per-agent distributional estimators used by the trainer."""

    nets: List[EstimatorNet]
    alpha: float = 0.1
    beta: float = 10.0
    name: str = field(default="dre", init=False)

    @classmethod
    def create(
        cls,
        num_agents: int,
        obs_width: int,
        rng: np.random.Generator,
        alpha: float = 0.1,
        beta: float = 10.0,
        num_actions: int = NUM_ACTIONS,
        hidden_widths: Tuple[int, ...] = (64, 64),
        sigma_floor: float = SIGMA_FLOOR,
    ) -> "DistributionalEstimator":
        nets = [
            EstimatorNet.create(obs_width, rng, num_actions, hidden_widths, sigma_floor)
            for _ in range(num_agents)
        ]
        return cls(nets, alpha, beta)

    def update(self, obs: np.ndarray, actions: np.ndarray, rewards: np.ndarray, lr: float) -> float:
        """Update every agent on its own column of a (B, N, ...) batch; mean pre-step loss."""
        losses = [
            estimator_update(net, obs[:, i], actions[:, i], rewards[:, i], self.alpha, self.beta, lr)
            for i, net in enumerate(self.nets)
        ]
        return float(np.mean(losses))

    def beliefs(self, obs: np.ndarray) -> RewardBeliefs:
        per_agent = [estimate(net, obs[:, i]) for i, net in enumerate(self.nets)]
        return RewardBeliefs(
            np.stack([b.mu for b in per_agent], axis=1),
            np.stack([b.sigma for b in per_agent], axis=1),
        )

    def branch_rewards(
        self,
        obs: np.ndarray,
        actions: np.ndarray,
        mode: str = "mean",
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        """Estimated reward for every branch, shape (B, N, K)."""
        return sample_or_mean(self.beliefs(obs), mode, rng)

    def param_stores(self) -> Dict[str, ParamStore]:
        return {f"estimator.{i}": net.params for i, net in enumerate(self.nets)}


__all__ = [
    "EstimatorNet",
    "estimate",
    "estimator_loss",
    "estimator_update",
    "DistributionalEstimator",
    "check_actions",
    "check_batch",
]
