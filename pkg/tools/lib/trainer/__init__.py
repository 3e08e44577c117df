"""
CTDE training: replay storage, networks, updates and the run loop.
"""

from tools.lib.trainer.buffer import Batch, ReplayBuffer, Transition
from tools.lib.trainer.checkpoint import load_checkpoint, restore_checkpoint, save_checkpoint
from tools.lib.trainer.loop import (
    Trainer,
    TrainingResult,
    collect_episode,
    evaluate,
    greedy_trajectory,
    exploration_probability,
    train,
)
from tools.lib.trainer.networks import AgentNets, entropy
from tools.lib.trainer.updates import (
    actor_update,
    advantages,
    aggregate_batch,
    critic_update,
    soft_update,
)

__all__ = [
    "Transition",
    "Batch",
    "ReplayBuffer",
    "AgentNets",
    "entropy",
    "soft_update",
    "aggregate_batch",
    "critic_update",
    "advantages",
    "actor_update",
    "exploration_probability",
    "collect_episode",
    "evaluate",
    "greedy_trajectory",
    "Trainer",
    "TrainingResult",
    "train",
    "save_checkpoint",
    "load_checkpoint",
    "restore_checkpoint",
]
