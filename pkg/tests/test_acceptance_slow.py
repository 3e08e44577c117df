"""
Long acceptance runs. Deselected by default; run with ``pytest -m slow``
or ``python dremarl.py check --slow``.
"""

import pytest

from tools.lib.models.config_models import RunConfig
from tools.lib.trainer import train


SEEDS = (0, 1, 2)


def final_reward(estimator: str, seed: int, episodes: int = 2000) -> float:
    config = RunConfig(
        scenario="cn",
        agents=3,
        reward_setting="ac-dist",
        estimator=estimator,
        aggregation="ss-ss",
        seed=seed,
        episodes=episodes,
    )
    return train(config).final_mean


@pytest.mark.slow
def test_directional_ablation():
    """Test DRE matches or beats p2p and no estimation in at least two of three seeds"""
    finals = {
        estimator: [final_reward(estimator, seed) for seed in SEEDS]
        for estimator in ("dre", "p2p", "none")
    }
    for baseline in ("p2p", "none"):
        wins = sum(d >= b for d, b in zip(finals["dre"], finals[baseline]))
        assert wins >= 2, f"dre vs {baseline}: {finals}"


@pytest.mark.slow
def test_learning_happens():
    """Test noise-free training without estimation improves on its first evaluation in two of three seeds"""
    improved = []
    for seed in SEEDS:
        config = RunConfig(
            scenario="cn",
            agents=3,
            reward_setting="dete",
            estimator="none",
            seed=seed,
            episodes=2000,
        )
        records = train(config).records
        improved.append(records[-1]["eval_mean_reward"] > records[0]["eval_mean_reward"])
    assert sum(improved) >= 2, f"improvement per seed: {improved}"
