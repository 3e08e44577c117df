"""
Line-delimited JSON dumps of particle-world trajectories.
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

from tools.lib.envs.particle import StepResult


def trajectory_record(result: StepResult, actions: Sequence[int]) -> Dict[str, Any]:
    """One JSON-ready record describing the state after a step."""
    state = result.state
    return {
        "step": state.step,
        "positions": state.positions.tolist(),
        "velocities": state.velocities.tolist(),
        "landmarks": state.landmarks.tolist(),
        "actions": [int(a) for a in actions],
        "rewards": result.rewards.tolist(),
        "team_reward": result.team_reward,
    }


def dump_trajectory(path: Union[str, Path], steps: Iterable[Dict[str, Any]]) -> Path:
    """Write one JSON object per line and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for record in steps:
            f.write(json.dumps(record, sort_keys=True) + "\n")
    return path


def load_trajectory(path: Union[str, Path]) -> List[Dict[str, Any]]:
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


__all__ = ["trajectory_record", "dump_trajectory", "load_trajectory"]
