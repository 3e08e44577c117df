"""
Reverse-mode autodiff, dense and graph-attention layers, and Adam.
"""

from tools.lib.nn.gradcheck import GradientReport, gradient_check
from tools.lib.nn.layers import (
    LEAKY_SLOPE,
    GatSpec,
    MlpSpec,
    gat_forward,
    init_gat,
    init_mlp,
    leaky_relu,
    mlp_forward,
)
from tools.lib.nn.optim import adam_step
from tools.lib.nn.params import ParamStore, backward
from tools.lib.nn.tensor import Tensor, as_tensor, concat, minimum

__all__ = [
    "Tensor",
    "as_tensor",
    "concat",
    "minimum",
    "ParamStore",
    "backward",
    "adam_step",
    "LEAKY_SLOPE",
    "leaky_relu",
    "MlpSpec",
    "GatSpec",
    "init_mlp",
    "mlp_forward",
    "init_gat",
    "gat_forward",
    "GradientReport",
    "gradient_check",
]
