"""
Pydantic Models for Run Configuration

This module defines Pydantic models for validating training-run configuration.
Provides type-safe configuration with automatic validation and helpful error messages.
Defaults reproduce the published hyperparameter table.
"""

from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from tools.lib.envs.particle import SUPPORTED_AGENTS


class HyperParameters(BaseModel):
    """Optimizer, trainer and network constants"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    lr: float = Field(1e-3, gt=0, description="Adam learning rate for every network")
    gamma: float = Field(0.95, ge=0, lt=1, description="Discount factor")
    tau: float = Field(0.01, gt=0, le=1, description="Target soft-update rate")
    batch_size: int = Field(1024, ge=1, description="Samples per gradient step")
    entropy_scale: float = Field(0.3, ge=0, description="Entropy bonus weight (eta)")
    alpha: float = Field(0.1, ge=0, description="Estimator sigma L1 weight")
    beta: float = Field(10.0, ge=0, description="Estimator mean-variance weight")
    clip_epsilon: float = Field(0.2, gt=0, description="Importance-ratio clip range")
    exploration_start: float = Field(0.7, ge=0, le=1, description="Initial policy-action probability")
    exploration_end: float = Field(0.9, ge=0, le=1, description="Final policy-action probability")
    buffer_capacity: int = Field(25000, ge=1, description="Replay capacity in transitions")
    buffer_clear_rate: float = Field(0.4, ge=0, lt=1, description="Oldest fraction dropped per refresh")
    refresh_interval: int = Field(100, ge=1, description="Episodes between buffer refreshes")
    update_interval: int = Field(4, ge=1, description="Episodes between update events")
    prefill_episodes: int = Field(4, ge=0, description="Random-policy episodes before training")
    eval_interval: int = Field(100, ge=1, description="Training episodes between evaluations")
    eval_episodes: int = Field(10, ge=2, description="Greedy episodes per evaluation")
    eval_seed: int = Field(100_000, ge=0, description="First seed of the fixed evaluation sequence")
    hidden_widths: Tuple[int, ...] = Field((64, 64), description="MLP hidden layer widths")
    attention_heads: int = Field(8, ge=1, description="Critic attention heads")
    head_width: int = Field(8, ge=1, description="Units per attention head")
    leaky_slope: float = Field(0.01, gt=0, lt=1, description="Leaky-relu negative slope")
    sigma_floor: float = Field(1e-4, gt=0, description="Lower bound on estimated sigma")
    prob_floor: float = Field(1e-8, gt=0, description="Probability floor in importance ratios")
    reward_delta: float = Field(0.001, gt=0, description="ac-dist noise standard deviation")
    reward_scale: float = Field(0.05, ge=0, description="dist disturbance scale")

    @field_validator("hidden_widths")
    @classmethod
    def validate_widths(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        """Hidden widths must be positive"""
        if any(w <= 0 for w in v):
            raise ValueError(f"hidden widths must be > 0, got {list(v)}")
        return v

    @model_validator(mode="after")
    def validate_exploration(self) -> "HyperParameters":
        """Exploration probability ramps upward"""
        if self.exploration_start > self.exploration_end:
            raise ValueError("exploration_start must not exceed exploration_end")
        return self


class RunConfig(BaseModel):
    """Root configuration model for a single training run"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    scenario: Literal["cn", "ref", "trea"] = "cn"
    agents: int = Field(3, ge=1, description="Agent count parameter q")
    reward_setting: Literal["dete", "dist", "ac-dist"] = "dete"
    eval_reward_setting: Literal["same", "dete", "dist", "ac-dist"] = "same"
    estimator: Literal["dre", "p2p", "gre", "none"] = "dre"
    aggregation: Literal["ss-ss", "smo-mo", "mo-mo", "smo-ss", "smo-only"] = "ss-ss"
    reward_mode: Literal["mean", "sample"] = "mean"
    reward_signal: Literal["team", "individual"] = "team"
    importance_ratio: Literal["target", "behavior"] = "target"
    p2p_input: Literal["obs", "obs_action"] = "obs_action"
    seed: int = Field(0, ge=0)
    episodes: int = Field(2000, ge=1, description="Training episodes after pre-fill")
    record_wall_time: bool = Field(False, description="Add wall_time to metric records")
    hyper: HyperParameters = Field(default_factory=HyperParameters)

    @field_validator("reward_setting", "eval_reward_setting", mode="before")
    @classmethod
    def normalize_setting(cls, v: object) -> object:
        """Accept ac_dist as a spelling of ac-dist"""
        return v.replace("_", "-") if isinstance(v, str) else v

    @model_validator(mode="after")
    def validate_agents(self) -> "RunConfig":
        """Agent count must be supported by the scenario"""
        allowed = SUPPORTED_AGENTS[self.scenario]
        if self.agents not in allowed:
            raise ValueError(
                f"scenario '{self.scenario}' supports {', '.join(map(str, allowed))} agents,"
                f" got {self.agents}"
            )
        return self

    @model_validator(mode="after")
    def validate_aggregation(self) -> "RunConfig":
        """Without an estimator there are no beliefs to weight"""
        if self.estimator == "none" and self.aggregation != "ss-ss":
            raise ValueError(
                f"aggregation '{self.aggregation}' needs a reward estimator;"
                " estimator 'none' only supports ss-ss"
            )
        return self

    @property
    def label(self) -> str:
        """
        Configuration label shared by all seeds.

        Axes left at their defaults are omitted, so every distinct
        configuration gets a distinct label.
        """
        parts = [
            self.scenario,
            str(self.agents),
            self.estimator,
            self.aggregation,
            self.reward_setting,
        ]
        if self.reward_mode != "mean":
            parts.append(self.reward_mode)
        if self.reward_signal != "team":
            parts.append(self.reward_signal)
        if self.importance_ratio != "target":
            parts.append(f"ratio-{self.importance_ratio}")
        if self.estimator == "p2p" and self.p2p_input != "obs_action":
            parts.append(f"input-{self.p2p_input}")
        if self.eval_reward_setting != "same":
            parts.append(f"eval-{self.eval_reward_setting}")
        return "-".join(parts)

    @property
    def run_id(self) -> str:
        return f"{self.label}-s{self.seed}"

    @property
    def effective_eval_setting(self) -> str:
        return self.reward_setting if self.eval_reward_setting == "same" else self.eval_reward_setting
