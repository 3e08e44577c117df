#!/usr/bin/env python3
"""
Gradient updates of one training iteration.

    critic   minimize mean (R_mixed + gamma * V_target(o') - V(o))^2
    actor    maximize mean min(u * A, clip(u, 1-eps, 1+eps) * A) + eta * H(pi)
    targets  target <- tau * current + (1 - tau) * target
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from tools.lib.aggregation import AggregationScheme, build_up_batch, lumped_rewards, mixed_rewards
from tools.lib.estimators.factory import RewardEstimator
from tools.lib.exceptions import NumericalError, ShapeMismatchError
from tools.lib.nn import GatSpec, MlpSpec, ParamStore, Tensor, adam_step, backward, gat_forward, minimum, mlp_forward
from tools.lib.trainer.buffer import Batch
from tools.lib.trainer.networks import AgentNets


def soft_update(current: ParamStore, target: ParamStore, tau: float) -> ParamStore:
    """
    Move target parameters toward the current ones.

    Raises:
        ShapeMismatchError: If the stores hold different names or shapes
    """
    if set(current.names()) != set(target.names()):
        raise ShapeMismatchError("soft update parameter names differ")
    for name in current:
        src, dst = current[name].data, target[name].data
        if src.shape != dst.shape:
            raise ShapeMismatchError(f"soft update of '{name}'", dst.shape, src.shape)
        dst[...] = tau * src + (1.0 - tau) * dst
    return target


def aggregate_batch(
    batch: Batch,
    nets: AgentNets,
    estimator: Optional[RewardEstimator],
    scheme: AggregationScheme,
    mode: str = "mean",
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Mixed (critic) and lumped (actor) rewards for a batch.

    Without an estimator both equal the received rewards. Otherwise the
    estimator's branch rewards are built up with the received reward and
    weighted by the target policy evaluated at the stored observations.

    Returns:
        Tuple of (mixed, lumped), each of shape (B, N)
    """
    if estimator is None:
        return batch.rewards.copy(), batch.rewards.copy()
    r_hat = estimator.branch_rewards(batch.obs, batch.actions, mode, rng)
    m = build_up_batch(r_hat, batch.actions, batch.rewards)
    weights = nets.policies(batch.obs, target=True)
    mixed = mixed_rewards(scheme.mixed, m, weights, batch.rewards)
    lumped = lumped_rewards(scheme.lumped, m, batch.rewards)
    return mixed, lumped


def critic_targets(
    nets: AgentNets, next_obs: np.ndarray, mixed: np.ndarray, gamma: float
) -> np.ndarray:
    """R_mixed + gamma * V_target(o'), held fixed during the critic step."""
    return mixed + gamma * nets.values(next_obs, target=True)


def critic_loss(
    spec: GatSpec, params: ParamStore, obs: np.ndarray, targets: np.ndarray
) -> Tensor:
    values = gat_forward(spec, params, obs)[..., 0]
    residual = values - targets
    return (residual * residual).mean()


def critic_update(
    nets: AgentNets, batch: Batch, mixed: np.ndarray, gamma: float, lr: float
) -> float:
    """One Adam step on the Bellman residual; returns the pre-step loss."""
    if len(batch) < 1:
        raise ValueError("critic update needs a non-empty batch")
    targets = critic_targets(nets, batch.next_obs, mixed, gamma)
    loss = critic_loss(nets.critic_spec, nets.critic, batch.obs, targets)
    adam_step(nets.critic, backward(loss, nets.critic), lr)
    return loss.item()


def advantages(nets: AgentNets, batch: Batch, lumped: np.ndarray, gamma: float) -> np.ndarray:
    """One-step advantage r_lumped + gamma * V_target(o') - V(o), shape (B, N)."""
    adv = lumped + gamma * nets.values(batch.next_obs, target=True) - nets.values(batch.obs)
    if not np.all(np.isfinite(adv)):
        raise NumericalError("advantages")
    return adv


@dataclass(frozen=True)
class ActorTerms:
    """Pieces of the actor objective, exposed for inspection."""

    objective: Tensor
    ratio: np.ndarray
    entropy: np.ndarray


def actor_objective(
    spec: MlpSpec,
    params: ParamStore,
    obs: np.ndarray,
    actions: np.ndarray,
    adv: np.ndarray,
    log_denominator: np.ndarray,
    clip_epsilon: float = 0.2,
    entropy_scale: float = 0.3,
) -> ActorTerms:
    """
    Clipped surrogate plus entropy bonus for one agent.

    Args:
        spec: Actor network widths
        params: Actor parameters being optimized
        obs: (B, F) observations
        actions: (B,) executed actions
        adv: (B,) advantages
        log_denominator: (B,) log-probability of the actions under the
            importance-ratio denominator, already floored
        clip_epsilon: Ratio clip range
        entropy_scale: Entropy weight
    """
    logp = mlp_forward(spec, params, obs).log_softmax(axis=-1)
    rows = np.arange(len(actions))
    ratio = (logp[rows, actions] - log_denominator).exp()
    unclipped = ratio * adv
    clipped = ratio.clip(1.0 - clip_epsilon, 1.0 + clip_epsilon) * adv
    probs = logp.exp()
    ent = -(probs * logp).sum(axis=-1)
    objective = (minimum(unclipped, clipped) + entropy_scale * ent).mean()
    return ActorTerms(objective=objective, ratio=ratio.numpy(), entropy=ent.numpy())


def actor_update(
    nets: AgentNets,
    i: int,
    batch: Batch,
    adv: np.ndarray,
    lr: float,
    clip_epsilon: float = 0.2,
    entropy_scale: float = 0.3,
    prob_floor: float = 1e-8,
    importance_ratio: str = "target",
) -> float:
    """
    One Adam ascent step for agent i.

    The importance-ratio denominator is the target actor evaluated now
    ("target") or the stored behavior distribution ("behavior"); its
    probabilities are floored at ``prob_floor``.

    Returns:
        The objective measured before the step
    """
    obs = batch.obs[:, i]
    actions = batch.actions[:, i]
    rows = np.arange(len(actions))
    if importance_ratio == "target":
        log_target = nets.logits(i, obs, target=True).log_softmax(axis=-1).numpy()
        log_denominator = np.maximum(log_target[rows, actions], np.log(prob_floor))
    elif importance_ratio == "behavior":
        log_denominator = np.log(np.maximum(batch.policies[rows, i, actions], prob_floor))
    else:
        raise ValueError(f"Unknown importance ratio '{importance_ratio}'")

    terms = actor_objective(
        nets.actor_spec,
        nets.actors[i],
        obs,
        actions,
        adv[:, i],
        log_denominator,
        clip_epsilon,
        entropy_scale,
    )
    grads = backward(-terms.objective, nets.actors[i])
    adam_step(nets.actors[i], grads, lr)
    return terms.objective.item()


__all__ = [
    "soft_update",
    "aggregate_batch",
    "critic_targets",
    "critic_loss",
    "critic_update",
    "advantages",
    "ActorTerms",
    "actor_objective",
    "actor_update",
]
