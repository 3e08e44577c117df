"""
Point-to-point reward regression (the p2p ablation).

The regressor predicts one scalar reward from either the observation alone
(``obs``) or the observation concatenated with a one-hot action
(``obs_action``) and is trained by mean squared error.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from tools.lib.envs.particle import NUM_ACTIONS
from tools.lib.estimators.distributional import check_actions, check_batch
from tools.lib.nn import MlpSpec, ParamStore, Tensor, adam_step, backward, init_mlp, mlp_forward


INPUT_MODES = ("obs", "obs_action")


@dataclass
class PointNet:
    """One agent's scalar reward regressor."""

    spec: MlpSpec
    params: ParamStore
    num_actions: int = NUM_ACTIONS
    input_mode: str = "obs_action"

    def __post_init__(self) -> None:
        if self.input_mode not in INPUT_MODES:
            raise ValueError(f"Unknown p2p input mode '{self.input_mode}'")

    @classmethod
    def create(
        cls,
        obs_width: int,
        rng: np.random.Generator,
        num_actions: int = NUM_ACTIONS,
        input_mode: str = "obs_action",
        hidden_widths: Tuple[int, ...] = (64, 64),
    ) -> "PointNet":
        width = obs_width + (num_actions if input_mode == "obs_action" else 0)
        spec = MlpSpec(input_width=width, hidden_widths=hidden_widths, output_width=1)
        return cls(spec, init_mlp(spec, rng), num_actions, input_mode)

    def inputs(self, obs: np.ndarray, actions: Optional[np.ndarray]) -> np.ndarray:
        obs = np.asarray(obs, dtype=np.float64)
        if self.input_mode == "obs":
            return obs
        if actions is None:
            raise ValueError("obs_action regression needs actions")
        actions = check_actions(actions, self.num_actions)
        return np.concatenate([obs, np.eye(self.num_actions)[actions]], axis=-1)

    def forward(self, obs: np.ndarray, actions: Optional[np.ndarray] = None) -> Tensor:
        out = mlp_forward(self.spec, self.params, self.inputs(obs, actions))
        return out[..., 0]


def p2p_estimate(net: PointNet, obs: np.ndarray, actions: Optional[np.ndarray] = None) -> np.ndarray:
    """Scalar prediction per input row (a 0-d array for a single observation)."""
    return net.forward(obs, actions).numpy()


def p2p_branches(net: PointNet, obs: np.ndarray) -> np.ndarray:
    """Prediction for every action branch, shape (..., K)."""
    obs = np.asarray(obs, dtype=np.float64)
    if net.input_mode == "obs":
        value = p2p_estimate(net, obs)
        return np.repeat(value[..., None], net.num_actions, axis=-1)
    columns = [
        p2p_estimate(net, obs, np.full(obs.shape[:-1], k, dtype=np.int64))
        for k in range(net.num_actions)
    ]
    return np.stack(columns, axis=-1)


def p2p_loss(net: PointNet, obs: np.ndarray, actions: np.ndarray, rewards: np.ndarray) -> Tensor:
    check_batch(obs, actions, rewards)
    residual = net.forward(obs, actions) - np.asarray(rewards, dtype=np.float64)
    return (residual * residual).mean()


def p2p_update(
    net: PointNet, obs: np.ndarray, actions: np.ndarray, rewards: np.ndarray, lr: float = 1e-3
) -> float:
    """One Adam step on the squared error; returns the pre-step loss."""
    loss = p2p_loss(net, obs, actions, rewards)
    adam_step(net.params, backward(loss, net.params), lr)
    return loss.item()


@dataclass
class PointEstimator:
    """Per-agent p2p regressors used by the trainer."""

    nets: List[PointNet]
    name: str = field(default="p2p", init=False)

    @classmethod
    def create(
        cls,
        num_agents: int,
        obs_width: int,
        rng: np.random.Generator,
        num_actions: int = NUM_ACTIONS,
        input_mode: str = "obs_action",
        hidden_widths: Tuple[int, ...] = (64, 64),
    ) -> "PointEstimator":
        return cls(
            [
                PointNet.create(obs_width, rng, num_actions, input_mode, hidden_widths)
                for _ in range(num_agents)
            ]
        )

    def update(self, obs: np.ndarray, actions: np.ndarray, rewards: np.ndarray, lr: float) -> float:
        losses = [
            p2p_update(net, obs[:, i], actions[:, i], rewards[:, i], lr)
            for i, net in enumerate(self.nets)
        ]
        return float(np.mean(losses))

    def branch_rewards(
        self,
        obs: np.ndarray,
        actions: np.ndarray,
        mode: str = "mean",
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        # Point predictions carry no spread, so sample mode falls back to the prediction
        return np.stack([p2p_branches(net, obs[:, i]) for i, net in enumerate(self.nets)], axis=1)

    def param_stores(self) -> Dict[str, ParamStore]:
        return {f"estimator.{i}": net.params for i, net in enumerate(self.nets)}


__all__ = [
    "INPUT_MODES",
    "PointNet",
    "p2p_estimate",
    "p2p_branches",
    "p2p_loss",
    "p2p_update",
    "PointEstimator",
]
