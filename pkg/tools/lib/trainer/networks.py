"""
Actor, critic and target networks of one training run.
"""

from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from tools.lib.envs.particle import NUM_ACTIONS
from tools.lib.models.config_models import HyperParameters
from tools.lib.nn import GatSpec, MlpSpec, ParamStore, Tensor, gat_forward, init_gat, init_mlp, mlp_forward


@dataclass
class AgentNets:
    """
    Decentralized actors and the shared attention critic.

    Each agent owns actor parameters and a target copy; the critic and its
    target are shared across agents and score every agent in one pass.
    """

    actor_spec: MlpSpec
    actors: List[ParamStore]
    target_actors: List[ParamStore]
    critic_spec: GatSpec
    critic: ParamStore
    target_critic: ParamStore

    @classmethod
    def create(
        cls,
        num_agents: int,
        obs_width: int,
        rng: np.random.Generator,
        hyper: HyperParameters = HyperParameters(),
        num_actions: int = NUM_ACTIONS,
    ) -> "AgentNets":
        actor_spec = MlpSpec(
            input_width=obs_width,
            hidden_widths=hyper.hidden_widths,
            output_width=num_actions,
            slope=hyper.leaky_slope,
        )
        critic_spec = GatSpec(
            input_width=obs_width,
            heads=hyper.attention_heads,
            head_width=hyper.head_width,
            hidden_widths=hyper.hidden_widths,
            slope=hyper.leaky_slope,
        )
        actors = [init_mlp(actor_spec, rng) for _ in range(num_agents)]
        critic = init_gat(critic_spec, rng)
        return cls(
            actor_spec=actor_spec,
            actors=actors,
            target_actors=[a.clone() for a in actors],
            critic_spec=critic_spec,
            critic=critic,
            target_critic=critic.clone(),
        )

    @property
    def num_agents(self) -> int:
        return len(self.actors)

    def logits(self, i: int, obs: np.ndarray, target: bool = False) -> Tensor:
        params = self.target_actors[i] if target else self.actors[i]
        return mlp_forward(self.actor_spec, params, obs)

    def policies(self, obs: np.ndarray, target: bool = False) -> np.ndarray:
        """Action distributions for (..., N, F) observations, shape (..., N, K)."""
        obs = np.asarray(obs, dtype=np.float64)
        columns = [
            self.logits(i, obs[..., i, :], target).softmax(axis=-1).numpy()
            for i in range(self.num_agents)
        ]
        return np.stack(columns, axis=-2)

    def value_tensor(self, obs: np.ndarray, target: bool = False) -> Tensor:
        params = self.target_critic if target else self.critic
        return gat_forward(self.critic_spec, params, obs)[..., 0]

    def values(self, obs: np.ndarray, target: bool = False) -> np.ndarray:
        """State values for (B, N, F) or (N, F) observations."""
        return self.value_tensor(obs, target).numpy()

    def param_stores(self) -> Dict[str, ParamStore]:
        stores: Dict[str, ParamStore] = {}
        for i, (actor, target) in enumerate(zip(self.actors, self.target_actors)):
            stores[f"actor.{i}"] = actor
            stores[f"target_actor.{i}"] = target
        stores["critic"] = self.critic
        stores["target_critic"] = self.target_critic
        return stores


def entropy(probs: np.ndarray) -> np.ndarray:
    """Shannon entropy over the last axis (0 log 0 = 0)."""
    p = np.asarray(probs, dtype=np.float64)
    logs = np.log(np.where(p > 0, p, 1.0))
    return -(p * logs).sum(axis=-1)


__all__ = ["AgentNets", "entropy"]
