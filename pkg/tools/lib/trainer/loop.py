#!/usr/bin/env python3
"""
Centralized-training, decentralized-execution loop.

A run pre-fills the replay buffer with random-policy episodes, then
alternates episode collection with periodic update events. Each update event
trains the reward estimators, aggregates rewards, steps the critic and the
actors on independent uniform draws from the buffer and soft-updates the
targets. Evaluation uses greedy actions on a fixed seed sequence.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from tools.lib.aggregation import AggregationScheme
from tools.lib.envs import particle
from tools.lib.envs.trajectory import trajectory_record
from tools.lib.envs.uncertainty import RewardSetting, perturb_batch
from tools.lib.estimators.factory import RewardEstimator, build_estimator
from tools.lib.logging.structured_logger import StructuredLogger
from tools.lib.models.config_models import RunConfig
from tools.lib.trainer.buffer import ReplayBuffer, Transition
from tools.lib.trainer.networks import AgentNets
from tools.lib.trainer.updates import (
    actor_update,
    advantages,
    aggregate_batch,
    critic_update,
    soft_update,
)
from tools.lib.tracing.run_context import RunContext


MetricRecord = Dict[str, Any]


def exploration_probability(episode: int, total: int, start: float = 0.7, end: float = 0.9) -> float:
    """Policy-action probability: linear from start to end over the first half, then flat."""
    half = max(total / 2.0, 1.0)
    fraction = min(max(episode / half, 0.0), 1.0)
    return start + (end - start) * fraction


def select_actions(
    policies: np.ndarray,
    p: float,
    rng: Optional[np.random.Generator],
    greedy: bool = False,
) -> np.ndarray:
    """
    Pick one action per agent.

    With probability p an agent samples from its policy, otherwise it picks
    uniformly. Greedy selection takes the argmax and draws nothing.
    """
    if greedy:
        return policies.argmax(axis=-1).astype(np.int64)
    if rng is None:
        raise ValueError("stochastic action selection needs an rng")
    num_agents, k_count = policies.shape
    actions = np.empty(num_agents, dtype=np.int64)
    for i in range(num_agents):
        if rng.random() < p:
            cdf = np.cumsum(policies[i])
            actions[i] = min(int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right")), k_count - 1)
        else:
            actions[i] = int(rng.integers(k_count))
    return actions


def received_rewards(
    individual: np.ndarray, team: float, signal: str, setting: RewardSetting, actions: np.ndarray
) -> np.ndarray:
    """Rewards the agents observe: team or individual signal, then perturbation."""
    base = np.full_like(individual, team) if signal == "team" else individual
    return perturb_batch(setting, base, actions)


def collect_episode(
    nets: AgentNets,
    config: RunConfig,
    env_seed: int,
    p: float,
    rng: np.random.Generator,
    setting: RewardSetting,
    random_policy: bool = False,
) -> Tuple[List[Transition], float]:
    """
    Roll out one 25-step episode.

    The stored policy vector is the actor's softmax output even when the
    executed action came from uniform exploration.

    Args:
        nets: Actors used for acting
        config: Scenario, agent count and reward signal
        env_seed: Seed of the episode's initial placement
        p: Probability of acting from the policy
        rng: Exploration stream
        setting: Reward-uncertainty setting applied to stored rewards
        random_policy: Act uniformly at random (buffer pre-fill)

    Returns:
        Tuple of (transitions, team reward summed over the episode)
    """
    state, obs = particle.reset(config.scenario, config.agents, env_seed)
    transitions: List[Transition] = []
    episode_reward = 0.0
    while not state.done:
        policies = nets.policies(obs)
        actions = select_actions(policies, 0.0 if random_policy else p, rng)
        result = particle.step(state, actions)
        rewards = received_rewards(
            result.rewards, result.team_reward, config.reward_signal, setting, actions
        )
        transitions.append(Transition(obs, policies, actions, rewards, result.observations))
        episode_reward += result.team_reward
        state, obs = result.state, result.observations
    return transitions, episode_reward


def evaluate(
    nets: AgentNets,
    config: RunConfig,
    episodes: Optional[int] = None,
) -> Tuple[float, float, List[float]]:
    """
    Greedy evaluation on the fixed seed sequence.

    An episode scores the sum over steps and agents of individual rewards
    under the evaluation reward setting.

    Returns:
        Tuple of (mean, standard error, per-episode scores)
    """
    hyper = config.hyper
    count = episodes if episodes is not None else hyper.eval_episodes
    tag = config.effective_eval_setting
    scores: List[float] = []
    for j in range(count):
        seed = hyper.eval_seed + j
        setting = RewardSetting.from_seed(
            tag, [seed, 1], delta=hyper.reward_delta, scale=hyper.reward_scale
        )
        state, obs = particle.reset(config.scenario, config.agents, seed)
        total = 0.0
        while not state.done:
            actions = select_actions(nets.policies(obs), 1.0, None, greedy=True)
            result = particle.step(state, actions)
            total += float(perturb_batch(setting, result.rewards, actions).sum())
            state, obs = result.state, result.observations
        scores.append(total)
    values = np.asarray(scores)
    stderr = float(values.std(ddof=1) / np.sqrt(len(values))) if len(values) > 1 else 0.0
    return float(values.mean()), stderr, scores


def greedy_trajectory(nets: AgentNets, config: RunConfig, seed: Optional[int] = None) -> List[Dict[str, Any]]:
    """Trajectory records of one greedy episode (default: the first evaluation seed)."""
    env_seed = config.hyper.eval_seed if seed is None else seed
    state, obs = particle.reset(config.scenario, config.agents, env_seed)
    steps: List[Dict[str, Any]] = []
    while not state.done:
        actions = select_actions(nets.policies(obs), 1.0, None, greedy=True)
        result = particle.step(state, actions)
        steps.append(trajectory_record(result, actions))
        state, obs = result.state, result.observations
    return steps


@dataclass
class TrainingResult:
    """Metric stream and final networks of one run."""

    records: List[MetricRecord]
    nets: AgentNets
    estimator: Optional[RewardEstimator]
    final_mean: float
    final_stderr: float


@dataclass
class _Accumulator:
    critic: List[float] = field(default_factory=list)
    actor: List[float] = field(default_factory=list)
    estimator: List[float] = field(default_factory=list)

    def drain(self) -> Dict[str, Optional[float]]:
        out = {
            "critic_loss": float(np.mean(self.critic)) if self.critic else None,
            "actor_objective": float(np.mean(self.actor)) if self.actor else None,
            "estimator_loss": float(np.mean(self.estimator)) if self.estimator else None,
        }
        self.critic, self.actor, self.estimator = [], [], []
        return out


class Trainer:
    """
    One seeded training run.

    Independent random streams (network init, environment placements,
    exploration, buffer sampling, reward noise, estimator sampling) are
    spawned from the run seed, so a (config, seed) pair fully determines the
    metric stream.
    """

    def __init__(self, config: RunConfig, log: Optional[StructuredLogger] = None):
        self.config = config
        self.log = log or StructuredLogger("dremarl.trainer")
        hyper = config.hyper
        streams = np.random.SeedSequence(config.seed).spawn(6)
        init_rng = np.random.default_rng(streams[0])
        self.env_rng = np.random.default_rng(streams[1])
        self.explore_rng = np.random.default_rng(streams[2])
        self.buffer_rng = np.random.default_rng(streams[3])
        self.estimate_rng = np.random.default_rng(streams[5])

        self.num_agents = particle.agent_count(config.scenario, config.agents)
        self.obs_width = particle.observation_width(config.scenario, config.agents)
        self.nets = AgentNets.create(self.num_agents, self.obs_width, init_rng, hyper)
        self.estimator = build_estimator(
            config.estimator,
            self.num_agents,
            self.obs_width,
            init_rng,
            alpha=hyper.alpha,
            beta=hyper.beta,
            hidden_widths=hyper.hidden_widths,
            sigma_floor=hyper.sigma_floor,
            p2p_input=config.p2p_input,
        )
        self.scheme = AggregationScheme.from_tag(config.aggregation)
        self.buffer = ReplayBuffer(hyper.buffer_capacity)
        self.setting = RewardSetting.from_seed(
            config.reward_setting, streams[4], delta=hyper.reward_delta, scale=hyper.reward_scale
        )
        self._acc = _Accumulator()

    def _next_env_seed(self) -> int:
        return int(self.env_rng.integers(0, 2**31 - 1))

    def prefill(self) -> None:
        """Fill the buffer with random-policy episodes."""
        for _ in range(self.config.hyper.prefill_episodes):
            transitions, _ = collect_episode(
                self.nets, self.config, self._next_env_seed(), 0.0,
                self.explore_rng, self.setting, random_policy=True,
            )
            self.buffer.extend(transitions)

    def update(self) -> None:
        """One update event: estimators, critic, actors, then targets."""
        hyper, config = self.config.hyper, self.config
        size = hyper.batch_size

        if self.estimator is not None:
            b = self.buffer.sample(size, self.buffer_rng)
            self._acc.estimator.append(self.estimator.update(b.obs, b.actions, b.rewards, hyper.lr))

        b = self.buffer.sample(size, self.buffer_rng)
        mixed, _ = aggregate_batch(
            b, self.nets, self.estimator, self.scheme, config.reward_mode, self.estimate_rng
        )
        self._acc.critic.append(critic_update(self.nets, b, mixed, hyper.gamma, hyper.lr))

        b = self.buffer.sample(size, self.buffer_rng)
        _, lumped = aggregate_batch(
            b, self.nets, self.estimator, self.scheme, config.reward_mode, self.estimate_rng
        )
        adv = advantages(self.nets, b, lumped, hyper.gamma)
        objectives = [
            actor_update(
                self.nets, i, b, adv, hyper.lr, hyper.clip_epsilon,
                hyper.entropy_scale, hyper.prob_floor, config.importance_ratio,
            )
            for i in range(self.num_agents)
        ]
        self._acc.actor.append(float(np.mean(objectives)))

        for actor, target in zip(self.nets.actors, self.nets.target_actors):
            soft_update(actor, target, hyper.tau)
        soft_update(self.nets.critic, self.nets.target_critic, hyper.tau)

    def _record(self, episode: int, started: float) -> MetricRecord:
        mean, stderr, _ = evaluate(self.nets, self.config)
        record: MetricRecord = {
            "episode": episode,
            "eval_mean_reward": mean,
            "eval_stderr": stderr,
            **self._acc.drain(),
        }
        if self.config.record_wall_time:
            record["wall_time"] = time.perf_counter() - started
        self.log.info(
            f"📈 Episode {episode}: eval mean reward {mean:.3f} ± {stderr:.3f}",
            event="evaluation",
            **record,
        )
        return record

    def run(self, on_record: Optional[Callable[[MetricRecord], None]] = None) -> TrainingResult:
        """
        Execute the full run.

        Args:
            on_record: Called with every metric record as soon as it exists

        Returns:
            TrainingResult with the metric stream and final networks
        """
        config, hyper = self.config, self.config.hyper
        records: List[MetricRecord] = []
        started = time.perf_counter()

        with RunContext(config.run_id):
            self.log.info(f"🚀 Starting run {config.run_id}", event="run_start", episodes=config.episodes)
            self.prefill()
            for episode in range(1, config.episodes + 1):
                p = exploration_probability(
                    episode - 1, config.episodes, hyper.exploration_start, hyper.exploration_end
                )
                transitions, _ = collect_episode(
                    self.nets, config, self._next_env_seed(), p, self.explore_rng, self.setting
                )
                self.buffer.extend(transitions)

                if episode % hyper.update_interval == 0:
                    self.update()
                if episode % hyper.refresh_interval == 0:
                    dropped = self.buffer.refresh(hyper.buffer_clear_rate)
                    self.log.debug("Buffer refreshed", event="buffer_refresh", dropped=dropped)
                if episode % hyper.eval_interval == 0 or episode == config.episodes:
                    record = self._record(episode, started)
                    records.append(record)
                    if on_record is not None:
                        on_record(record)

            self.log.info(f"✅ Run {config.run_id} finished", event="run_end")

        final = records[-1]
        return TrainingResult(
            records=records,
            nets=self.nets,
            estimator=self.estimator,
            final_mean=final["eval_mean_reward"],
            final_stderr=final["eval_stderr"],
        )


def train(
    config: RunConfig,
    on_record: Optional[Callable[[MetricRecord], None]] = None,
    log: Optional[StructuredLogger] = None,
) -> TrainingResult:
    """Train one run from a validated configuration."""
    return Trainer(config, log=log).run(on_record)


__all__ = [
    "exploration_probability",
    "select_actions",
    "received_rewards",
    "collect_episode",
    "evaluate",
    "greedy_trajectory",
    "TrainingResult",
    "Trainer",
    "train",
]
