"""
Global reward estimation from the joint observation-action (the GRE ablation).

A single network reads every agent's observation plus the concatenated
one-hot actions of all agents (N*K entries) and outputs one Gaussian over the
team-level reward. Per-agent branch beliefs are obtained by counterfactual
queries that replace agent i's action with each k in turn.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

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
from tools.lib.estimators.distributional import check_actions, check_batch
from tools.lib.exceptions import ShapeMismatchError
from tools.lib.nn import MlpSpec, ParamStore, Tensor, adam_step, backward, init_mlp, mlp_forward


@dataclass
class GlobalNet:
    """Joint-input distributional estimator with a single output branch."""

    spec: MlpSpec
    params: ParamStore
    num_agents: int
    obs_width: int
    num_actions: int = NUM_ACTIONS
    sigma_floor: float = SIGMA_FLOOR

    def __post_init__(self) -> None:
        expected = self.num_agents * (self.obs_width + self.num_actions)
        if self.spec.input_width != expected:
            raise ShapeMismatchError("GRE input width", expected, self.spec.input_width)

    @classmethod
    def create(
        cls,
        num_agents: int,
        obs_width: int,
        rng: np.random.Generator,
        num_actions: int = NUM_ACTIONS,
        hidden_widths: Tuple[int, ...] = (64, 64),
        sigma_floor: float = SIGMA_FLOOR,
    ) -> "GlobalNet":
        spec = MlpSpec(
            input_width=num_agents * (obs_width + num_actions),
            hidden_widths=hidden_widths,
            output_width=2,
        )
        return cls(spec, init_mlp(spec, rng), num_agents, obs_width, num_actions, sigma_floor)

    def inputs(self, joint_obs: np.ndarray, joint_actions: np.ndarray) -> np.ndarray:
        joint_obs = np.asarray(joint_obs, dtype=np.float64)
        if joint_obs.shape[-2:] != (self.num_agents, self.obs_width):
            raise ShapeMismatchError(
                "GRE joint observation", (self.num_agents, self.obs_width), joint_obs.shape[-2:]
            )
        actions = check_actions(joint_actions, self.num_actions)
        onehot = np.eye(self.num_actions)[actions]
        lead = joint_obs.shape[:-2]
        return np.concatenate(
            [joint_obs.reshape(*lead, -1), onehot.reshape(*lead, -1)], axis=-1
        )

    def head(self, joint_obs: np.ndarray, joint_actions: np.ndarray) -> Tuple[Tensor, Tensor]:
        out = mlp_forward(self.spec, self.params, self.inputs(joint_obs, joint_actions))
        return split_head(out, 1, self.sigma_floor)


def gre_estimate(net: GlobalNet, joint_obs: np.ndarray, joint_actions: np.ndarray) -> RewardBeliefs:
    """Beliefs over the team reward, trailing branch axis of length 1."""
    mu, sigma = net.head(joint_obs, joint_actions)
    return RewardBeliefs(mu.numpy(), sigma.numpy())


def gre_branches(net: GlobalNet, joint_obs: np.ndarray, joint_actions: np.ndarray) -> RewardBeliefs:
    """
    Counterfactual per-agent branch beliefs.

    Args:
        joint_obs: (B, N, F)
        joint_actions: (B, N)

    Returns:
        RewardBeliefs of shape (B, N, K)
    """
    joint_obs = np.asarray(joint_obs, dtype=np.float64)
    actions = check_actions(joint_actions, net.num_actions)
    batch = joint_obs.shape[0]
    k_count = net.num_actions
    mu = np.empty((batch, net.num_agents, k_count))
    sigma = np.empty_like(mu)
    # One agent at a time keeps the counterfactual batch at B*K rows
    for i in range(net.num_agents):
        queries = np.repeat(actions[:, None, :], k_count, axis=1)  # (B, K, N)
        queries[:, :, i] = np.arange(k_count)
        obs = np.repeat(joint_obs[:, None], k_count, axis=1)  # (B, K, N, F)
        beliefs = gre_estimate(net, obs, queries)
        mu[:, i, :] = beliefs.mu[..., 0]
        sigma[:, i, :] = beliefs.sigma[..., 0]
    return RewardBeliefs(mu, sigma)


def gre_loss(
    net: GlobalNet,
    joint_obs: np.ndarray,
    joint_actions: np.ndarray,
    team_rewards: np.ndarray,
    alpha: float,
    beta: float,
) -> Tensor:
    check_batch(joint_obs, joint_actions, team_rewards)
    mu, sigma = net.head(joint_obs, joint_actions)
    nll = gaussian_nll(mu[..., 0], sigma[..., 0], np.asarray(team_rewards, dtype=np.float64))
    return (nll + belief_penalty(mu, sigma, alpha, beta)).mean()


def gre_update(
    net: GlobalNet,
    joint_obs: np.ndarray,
    joint_actions: np.ndarray,
    team_rewards: np.ndarray,
    alpha: float = 0.1,
    beta: float = 10.0,
    lr: float = 1e-3,
) -> float:
    """One Adam step on the joint NLL; returns the pre-step loss."""
    loss = gre_loss(net, joint_obs, joint_actions, team_rewards, alpha, beta)
    adam_step(net.params, backward(loss, net.params), lr)
    return loss.item()


@dataclass
class GlobalEstimator:
    """GRE wrapper used by the trainer; trains on the agents' mean received reward."""

    net: GlobalNet
    alpha: float = 0.1
    beta: float = 10.0
    name: str = field(default="gre", init=False)

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
    ) -> "GlobalEstimator":
        net = GlobalNet.create(num_agents, obs_width, rng, num_actions, hidden_widths, sigma_floor)
        return cls(net, alpha, beta)

    def update(self, obs: np.ndarray, actions: np.ndarray, rewards: np.ndarray, lr: float) -> float:
        return gre_update(self.net, obs, actions, rewards.mean(axis=1), self.alpha, self.beta, lr)

    def branch_rewards(
        self,
        obs: np.ndarray,
        actions: np.ndarray,
        mode: str = "mean",
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        return sample_or_mean(gre_branches(self.net, obs, actions), mode, rng)

    def param_stores(self) -> Dict[str, ParamStore]:
        return {"estimator.global": self.net.params}


__all__ = [
    "GlobalNet",
    "gre_estimate",
    "gre_branches",
    "gre_loss",
    "gre_update",
    "GlobalEstimator",
]
