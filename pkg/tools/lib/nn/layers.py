"""
Dense and graph-attention layers over the Tensor autodiff engine.

Parameter naming follows ``{prefix}dense{i}.weight`` / ``{prefix}dense{i}.bias``
for MLPs and ``{prefix}attn.proj.weight``, ``{prefix}attn.src``,
``{prefix}attn.dst`` plus an MLP under ``{prefix}head.`` for the attention
critic. Weights are drawn uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)];
biases start at zero.
"""

from typing import Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from tools.lib.exceptions import ShapeMismatchError
from tools.lib.nn.params import ParamStore
from tools.lib.nn.tensor import ArrayLike, Tensor, as_tensor


LEAKY_SLOPE = 0.01


def leaky_relu(x: float, slope: float = LEAKY_SLOPE) -> float:
    """Scalar leaky-relu: x if x >= 0 else slope * x."""
    if not 0.0 < slope < 1.0:
        raise ValueError(f"slope must be in (0, 1), got {slope}")
    return float(x) if x >= 0 else slope * float(x)


class MlpSpec(BaseModel):
    """Fully connected network: input -> hidden widths -> output."""

    model_config = ConfigDict(frozen=True)

    input_width: int = Field(..., gt=0)
    hidden_widths: Tuple[int, ...] = (64, 64)
    output_width: int = Field(..., gt=0)
    slope: float = Field(LEAKY_SLOPE, gt=0, lt=1)

    @field_validator("hidden_widths")
    @classmethod
    def _positive_widths(cls, widths: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(w <= 0 for w in widths):
            raise ValueError(f"hidden widths must be > 0, got {widths}")
        return widths

    @property
    def layer_widths(self) -> Tuple[int, ...]:
        return (self.input_width, *self.hidden_widths, self.output_width)


class GatSpec(BaseModel):
    """Single multi-head attention layer over all agents, then a value MLP."""

    model_config = ConfigDict(frozen=True)

    input_width: int = Field(..., gt=0)
    heads: int = Field(8, ge=1)
    head_width: int = Field(8, ge=1)
    hidden_widths: Tuple[int, ...] = (64, 64)
    slope: float = Field(LEAKY_SLOPE, gt=0, lt=1)

    @property
    def head_spec(self) -> MlpSpec:
        return MlpSpec(
            input_width=self.heads * self.head_width,
            hidden_widths=self.hidden_widths,
            output_width=1,
            slope=self.slope,
        )


def _uniform(rng: np.random.Generator, fan_in: int, shape: Tuple[int, ...]) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def init_mlp(
    spec: MlpSpec,
    rng: np.random.Generator,
    params: Optional[ParamStore] = None,
    prefix: str = "",
) -> ParamStore:
    """
    Register freshly initialized MLP parameters.

    Args:
        spec: Network widths
        rng: Source of the weight draws
        params: Store to add into (a new one is created when omitted)
        prefix: Name prefix for every parameter

    Returns:
        The store holding the new parameters
    """
    params = params if params is not None else ParamStore()
    widths = spec.layer_widths
    for i, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
        params.add(f"{prefix}dense{i}.weight", _uniform(rng, fan_in, (fan_in, fan_out)))
        params.add(f"{prefix}dense{i}.bias", np.zeros(fan_out))
    return params


def mlp_forward(
    spec: MlpSpec, params: ParamStore, inputs: ArrayLike, prefix: str = ""
) -> Tensor:
    """
    Evaluate the MLP on a single input vector or a batch (..., input_width).

    Raises:
        ShapeMismatchError: If the trailing input width differs from the first layer size
        NumericalError: If any activation is non-finite
    """
    x = as_tensor(inputs)
    if x.ndim == 0 or x.shape[-1] != spec.input_width:
        raise ShapeMismatchError(
            "MLP input width", spec.input_width, x.shape[-1] if x.ndim else None
        )
    single = x.ndim == 1
    if single:
        x = x.reshape(1, spec.input_width)

    layers = len(spec.layer_widths) - 1
    h = x
    for i in range(layers):
        h = h @ params[f"{prefix}dense{i}.weight"] + params[f"{prefix}dense{i}.bias"]
        if i < layers - 1:
            h = h.leaky_relu(spec.slope)

    if single:
        h = h.reshape(spec.output_width)
    return h


def init_gat(
    spec: GatSpec,
    rng: np.random.Generator,
    params: Optional[ParamStore] = None,
    prefix: str = "",
) -> ParamStore:
    params = params if params is not None else ParamStore()
    width = spec.heads * spec.head_width
    params.add(
        f"{prefix}attn.proj.weight",
        _uniform(rng, spec.input_width, (spec.input_width, width)),
    )
    # Attention vectors act on [z_i || z_j], so fan-in is twice the head width
    params.add(f"{prefix}attn.src", _uniform(rng, 2 * spec.head_width, (spec.heads, spec.head_width)))
    params.add(f"{prefix}attn.dst", _uniform(rng, 2 * spec.head_width, (spec.heads, spec.head_width)))
    init_mlp(spec.head_spec, rng, params, prefix=f"{prefix}head.")
    return params


def gat_forward(
    spec: GatSpec,
    params: ParamStore,
    node_features: ArrayLike,
    prefix: str = "",
    return_attention: bool = False,
) -> Union[Tensor, Tuple[Tensor, np.ndarray]]:
    """
    Per-agent state values from one attention pass over the complete agent graph.

    Every agent attends to every agent including itself. Per head h the logit
    for the pair (i, j) is leaky_relu(src_h . z_i + dst_h . z_j) and the
    weights are a softmax over j. Head outputs are concatenated, passed through
    leaky-relu and mapped to a scalar by the value MLP.

    Args:
        spec: Attention and head widths
        params: Parameters created by init_gat with the same prefix
        node_features: (N, F) or batched (B, N, F)
        prefix: Parameter name prefix
        return_attention: Also return the attention weights (B, H, N, N)

    Returns:
        Values of shape (N, 1) or (B, N, 1), optionally with attention weights
    """
    x = as_tensor(node_features)
    if x.ndim not in (2, 3) or x.shape[-1] != spec.input_width:
        raise ShapeMismatchError(
            "GAT node features (N, F) or (B, N, F)",
            spec.input_width,
            x.shape,
        )
    single = x.ndim == 2
    if single:
        x = x.reshape(1, *x.shape)
    batch, agents, _ = x.shape
    heads, width = spec.heads, spec.head_width

    z = (x @ params[f"{prefix}attn.proj.weight"]).reshape(batch, agents, heads, width)
    z = z.transpose(0, 2, 1, 3)  # (B, H, N, d)

    src = (z * params[f"{prefix}attn.src"].reshape(1, heads, 1, width)).sum(axis=-1)
    dst = (z * params[f"{prefix}attn.dst"].reshape(1, heads, 1, width)).sum(axis=-1)
    logits = src.reshape(batch, heads, agents, 1) + dst.reshape(batch, heads, 1, agents)
    attention = logits.leaky_relu(spec.slope).softmax(axis=-1)

    mixed = (attention @ z).transpose(0, 2, 1, 3).reshape(batch, agents, heads * width)
    values = mlp_forward(spec.head_spec, params, mixed.leaky_relu(spec.slope), prefix=f"{prefix}head.")

    weights = attention.numpy()
    if single:
        values = values.reshape(agents, 1)
        weights = weights[0]
    if return_attention:
        return values, weights
    return values


__all__ = [
    "LEAKY_SLOPE",
    "leaky_relu",
    "MlpSpec",
    "GatSpec",
    "init_mlp",
    "mlp_forward",
    "init_gat",
    "gat_forward",
]
