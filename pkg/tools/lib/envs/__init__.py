"""
Particle scenarios and reward-uncertainty settings.
"""

from tools.lib.envs.particle import (
    EPISODE_LENGTH,
    NUM_ACTIONS,
    SUPPORTED_AGENTS,
    StepResult,
    WorldState,
    agent_count,
    observation_width,
    reset,
    scenario_reward,
    step,
)
from tools.lib.envs.uncertainty import RewardSetting, perturb, perturb_batch

__all__ = [
    "EPISODE_LENGTH",
    "NUM_ACTIONS",
    "SUPPORTED_AGENTS",
    "StepResult",
    "WorldState",
    "agent_count",
    "observation_width",
    "reset",
    "scenario_reward",
    "step",
    "RewardSetting",
    "perturb",
    "perturb_batch",
]
