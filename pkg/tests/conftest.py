"""
Shared pytest configuration: hypothesis profiles, numpy error policy and
small-run fixtures.
"""

import hypothesis
import numpy as np
import pytest

from tools.lib.models.config_models import HyperParameters, RunConfig
from tools.lib.tracing.run_context import clear_run_id


np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.load_profile("default")


SMALL_HYPER = {
    "batch_size": 32,
    "hidden_widths": (16, 16),
    "attention_heads": 2,
    "head_width": 4,
    "buffer_capacity": 2000,
    "eval_interval": 4,
    "eval_episodes": 2,
    "prefill_episodes": 1,
    "update_interval": 2,
    "refresh_interval": 6,
}


def small_config(**overrides) -> RunConfig:
    """A RunConfig small enough to train in seconds."""
    hyper = {**SMALL_HYPER, **overrides.pop("hyper", {})}
    fields = {"episodes": 8, **overrides}
    return RunConfig(hyper=HyperParameters(**hyper), **fields)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(autouse=True)
def reset_run_id():
    yield
    clear_run_id()


@pytest.fixture
def make_config():
    return small_config
