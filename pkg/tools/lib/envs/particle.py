#!/usr/bin/env python3
"""
Two-dimensional cooperative particle scenarios with discrete actions.

Scenarios:
    cn    Cooperative navigation: q agents cover q landmarks without colliding
    ref   Reference: each agent steers its partner's reward by reaching the
          goal landmark its partner was told about (q agents, 3 landmarks)
    trea  Treasure collection: q collectors pick up treasures and hand them to
          their matched bank (2q agents, q treasures)

Each episode lasts 25 steps. Actions are indices into
{no-op, +x, -x, +y, -y}; velocities are damped then accelerated, and
positions integrate the new velocity.
"""

import copy
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from tools.lib.exceptions import (
    ActionIndexError,
    EpisodeFinishedError,
    ScenarioError,
    ShapeMismatchError,
)


DT = 0.1
DAMPING = 0.25
ACCEL = 1.0
AGENT_RADIUS = 0.1
LANDMARK_RADIUS = 0.05
EPISODE_LENGTH = 25
NUM_ACTIONS = 5
REF_LANDMARKS = 3
DELIVERY_BONUS = 5.0

ACTION_VECTORS = np.array(
    [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
)

SUPPORTED_AGENTS: Dict[str, Tuple[int, ...]] = {
    "cn": (3, 7, 10),
    "ref": (2, 7, 10),
    "trea": (3, 7, 10),
}

Seed = Union[int, np.random.SeedSequence]


def validate_scenario(scenario: str, q: int) -> None:
    """Raise ScenarioError unless (scenario, q) is a supported combination."""
    if scenario not in SUPPORTED_AGENTS:
        raise ScenarioError(scenario)
    if q not in SUPPORTED_AGENTS[scenario]:
        allowed = ", ".join(str(n) for n in SUPPORTED_AGENTS[scenario])
        raise ScenarioError(
            scenario, q, f"Scenario '{scenario}' supports {allowed} agents, got {q}"
        )


def agent_count(scenario: str, q: int) -> int:
    """Number of acting agents (TREA-q has q collectors and q banks)."""
    validate_scenario(scenario, q)
    return 2 * q if scenario == "trea" else q


def landmark_count(scenario: str, q: int) -> int:
    validate_scenario(scenario, q)
    return REF_LANDMARKS if scenario == "ref" else q


def observation_width(scenario: str, q: int) -> int:
    """Length of every agent's observation vector."""
    n, l = agent_count(scenario, q), landmark_count(scenario, q)
    width = 4 + 2 * l + 2 * (n - 1)
    if scenario == "ref":
        width += REF_LANDMARKS
    elif scenario == "trea":
        width += 2
    return width


def partner(i: int, q: int) -> int:
    """REF partner of agent i."""
    return (i + 1) % q


@dataclass
class WorldState:
    """
    Snapshot of one particle world.

    ``goals`` holds each REF agent's goal-landmark index; ``holding`` and
    ``delivered`` are per-collector TREA flags (``delivered`` marks a
    completed hand-over during the most recent step).
    """

    scenario: str
    q: int
    positions: np.ndarray
    velocities: np.ndarray
    landmarks: np.ndarray
    rng: np.random.Generator
    step: int = 0
    goals: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    holding: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))
    delivered: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def num_agents(self) -> int:
        return int(self.positions.shape[0])

    @property
    def done(self) -> bool:
        return self.step >= EPISODE_LENGTH

    def copy(self) -> "WorldState":
        return replace(
            self,
            positions=self.positions.copy(),
            velocities=self.velocities.copy(),
            landmarks=self.landmarks.copy(),
            rng=copy.deepcopy(self.rng),
            goals=self.goals.copy(),
            holding=self.holding.copy(),
            delivered=self.delivered.copy(),
        )


@dataclass(frozen=True)
class StepResult:
    """Outcome of one environment step."""

    state: WorldState
    observations: np.ndarray
    rewards: np.ndarray
    team_reward: float
    done: bool


def observe(state: WorldState) -> np.ndarray:
    """Observation matrix of shape (num_agents, observation_width)."""
    n = state.num_agents
    rows: List[np.ndarray] = []
    for i in range(n):
        own = state.positions[i]
        parts = [
            state.velocities[i],
            own,
            (state.landmarks - own).reshape(-1),
            (np.delete(state.positions, i, axis=0) - own).reshape(-1),
        ]
        if state.scenario == "ref":
            # The goal is known only to the partner, which reports it here
            parts.append(np.eye(REF_LANDMARKS)[state.goals[i]])
        elif state.scenario == "trea":
            is_collector = i < state.q
            collector = i if is_collector else i - state.q
            parts.append(np.array([float(is_collector), float(state.holding[collector])]))
        rows.append(np.concatenate(parts))
    return np.stack(rows)


def _pairwise(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)


def scenario_reward(state: WorldState) -> np.ndarray:
    """
    Deterministic per-agent rewards for the current state.

    CN: -sum over landmarks of the closest agent distance, minus 1 for every
    other agent overlapping this one. REF: agent i receives minus the distance
    of its partner to the partner's goal. TREA: collectors are penalised by
    the distance to the nearest treasure, banks by the distance to their
    collector, and a completed delivery pays both a bonus.
    """
    pos, marks = state.positions, state.landmarks

    if state.scenario == "cn":
        coverage = -float(_pairwise(marks, pos).min(axis=1).sum())
        dist = _pairwise(pos, pos)
        overlaps = (dist < 2 * AGENT_RADIUS).sum(axis=1) - 1
        return coverage - overlaps.astype(np.float64)

    if state.scenario == "ref":
        q = state.q
        rewards = np.empty(q)
        for i in range(q):
            j = partner(i, q)
            rewards[i] = -float(np.linalg.norm(pos[j] - marks[state.goals[j]]))
        return rewards

    if state.scenario == "trea":
        q = state.q
        collectors, banks = pos[:q], pos[q:]
        rewards = np.empty(2 * q)
        rewards[:q] = -_pairwise(collectors, marks).min(axis=1)
        rewards[q:] = -np.linalg.norm(banks - collectors, axis=1)
        bonus = DELIVERY_BONUS * state.delivered.astype(np.float64)
        rewards[:q] += bonus
        rewards[q:] += bonus
        return rewards

    raise ScenarioError(state.scenario)


def reset(scenario: str, q: int, seed: Seed) -> Tuple[WorldState, np.ndarray]:
    """
    Start a new episode with uniform placements in [-1, 1]^2.

    Args:
        scenario: One of cn, ref, trea
        q: Agent count parameter (see SUPPORTED_AGENTS)
        seed: Integer seed or SeedSequence; equal seeds give equal worlds

    Returns:
        Tuple of (state, observations)
    """
    n, l = agent_count(scenario, q), landmark_count(scenario, q)
    rng = np.random.default_rng(seed)
    positions = rng.uniform(-1.0, 1.0, size=(n, 2))
    landmarks = rng.uniform(-1.0, 1.0, size=(l, 2))
    state = WorldState(
        scenario=scenario,
        q=q,
        positions=positions,
        velocities=np.zeros((n, 2)),
        landmarks=landmarks,
        rng=rng,
    )
    if scenario == "ref":
        state.goals = rng.integers(0, REF_LANDMARKS, size=q)
    elif scenario == "trea":
        state.holding = np.zeros(q, dtype=bool)
        state.delivered = np.zeros(q, dtype=bool)
    return state, observe(state)


def _update_treasures(state: WorldState) -> None:
    q = state.q
    state.delivered = np.zeros(q, dtype=bool)
    touch_treasure = _pairwise(state.positions[:q], state.landmarks) < AGENT_RADIUS + LANDMARK_RADIUS
    for c in range(q):
        if state.holding[c]:
            if np.linalg.norm(state.positions[c] - state.positions[q + c]) < 2 * AGENT_RADIUS:
                state.holding[c] = False
                state.delivered[c] = True
        elif touch_treasure[c].any():
            picked = int(np.argmax(touch_treasure[c]))
            state.holding[c] = True
            state.landmarks[picked] = state.rng.uniform(-1.0, 1.0, size=2)
            touch_treasure = _pairwise(state.positions[:q], state.landmarks) < AGENT_RADIUS + LANDMARK_RADIUS


def step(state: WorldState, joint_action: Sequence[int]) -> StepResult:
    """
    Advance the world one step. The input state is left untouched.

    Raises:
        EpisodeFinishedError: If the episode already lasted 25 steps
        ShapeMismatchError: If the number of actions differs from the agents
        ActionIndexError: If an action index is outside [0, 5)
    """
    if state.done:
        raise EpisodeFinishedError(
            f"Episode already finished after {EPISODE_LENGTH} steps"
        )
    actions = np.asarray(joint_action)
    if actions.shape != (state.num_agents,):
        raise ShapeMismatchError("joint action length", state.num_agents, actions.shape)
    for a in actions:
        if not 0 <= int(a) < NUM_ACTIONS:
            raise ActionIndexError(int(a), NUM_ACTIONS)

    nxt = state.copy()
    accel = ACCEL * ACTION_VECTORS[actions.astype(np.int64)]
    nxt.velocities = (1.0 - DAMPING) * nxt.velocities + accel * DT
    nxt.positions = nxt.positions + nxt.velocities * DT
    nxt.step += 1
    if nxt.scenario == "trea":
        _update_treasures(nxt)

    rewards = scenario_reward(nxt)
    return StepResult(
        state=nxt,
        observations=observe(nxt),
        rewards=rewards,
        team_reward=float(rewards.sum()),
        done=nxt.done,
    )


def rollout(
    scenario: str,
    q: int,
    seed: Seed,
    actions: Sequence[Sequence[int]],
    state: Optional[WorldState] = None,
) -> List[StepResult]:
    """Replay a fixed action sequence from a fresh (or given) state."""
    if state is None:
        state, _ = reset(scenario, q, seed)
    results = []
    for joint in actions:
        result = step(state, joint)
        results.append(result)
        state = result.state
    return results


__all__ = [
    "DT",
    "DAMPING",
    "ACCEL",
    "AGENT_RADIUS",
    "LANDMARK_RADIUS",
    "EPISODE_LENGTH",
    "NUM_ACTIONS",
    "SUPPORTED_AGENTS",
    "WorldState",
    "StepResult",
    "validate_scenario",
    "agent_count",
    "landmark_count",
    "observation_width",
    "partner",
    "observe",
    "scenario_reward",
    "reset",
    "step",
    "rollout",
]
