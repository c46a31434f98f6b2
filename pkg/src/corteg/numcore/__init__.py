"""Tensor arithmetic with reverse-mode autodiff, layers, and the optimizer."""

from .tensor import (
    Tensor,
    add,
    backward,
    concat,
    default_dtype,
    embedding,
    exp,
    gelu,
    layernorm,
    log,
    matmul,
    mean,
    mul,
    power,
    precision,
    reshape,
    slice_,
    softmax,
    sum_,
    take_tokens,
    tanh,
    transpose,
)
from .layers import (
    LORA_PROJECTIONS,
    LayerNorm,
    Linear,
    LoraPair,
    TransformerBlock,
    kaiming_uniform,
    sinusoidal_embedding,
)
from .optim import AdamW, ParamGroup, cosine_warmup_lr

__all__ = [
    "Tensor", "add", "backward", "concat", "default_dtype", "embedding", "exp",
    "gelu", "layernorm", "log", "matmul", "mean", "mul", "power", "precision",
    "reshape", "slice_", "softmax", "sum_", "take_tokens", "tanh", "transpose",
    "LORA_PROJECTIONS", "LayerNorm", "Linear", "LoraPair", "TransformerBlock",
    "kaiming_uniform", "sinusoidal_embedding",
    "AdamW", "ParamGroup", "cosine_warmup_lr",
]
