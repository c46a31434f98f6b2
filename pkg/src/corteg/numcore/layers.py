"""Neural layers used by the encoder: linear, layernorm, attention with
optional low-rank adapters, and the pre-norm transformer block.

Parameters live in plain classes exposing ``named_params()``; freezing is a
matter of flipping ``requires_grad`` on the underlying tensors.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError
from . import tensor as T
from .tensor import Tensor


def kaiming_uniform(rng: np.random.Generator, fan_in: int, shape) -> np.ndarray:
    """Fan-in scaled uniform init, the default for every linear map here."""
    bound = 1.0 / math.sqrt(max(fan_in, 1))
    return rng.uniform(-bound, bound, size=shape)


class Linear:
    """y = x @ w + b with w of shape (d_in, d_out)."""

    def __init__(self, d_in: int, d_out: int, rng: np.random.Generator, name: str,
                 zero_init: bool = False):
        if zero_init:
            w = np.zeros((d_in, d_out))
        else:
            w = kaiming_uniform(rng, d_in, (d_in, d_out))
        b = np.zeros(d_out) if zero_init else kaiming_uniform(rng, d_in, (d_out,))
        self.w = Tensor.param(w, name=f"{name}.w")
        self.b = Tensor.param(b, name=f"{name}.b")
        self.name = name

    def __call__(self, x: Tensor) -> Tensor:
        return T.matmul(x, self.w) + self.b

    def named_params(self):
        return {self.w.name: self.w, self.b.name: self.b}


class LoraPair:
    """Low-rank update for one projection: delta(x) = (alpha/r) * (x @ a) @ b.

    ``a`` is fan-in uniform, ``b`` starts at zero so the update is a no-op
    until trained.
    """

    def __init__(self, d_in: int, d_out: int, rank: int, alpha: float,
                 rng: np.random.Generator, name: str):
        self.a = Tensor.param(kaiming_uniform(rng, d_in, (d_in, rank)), name=f"{name}.a")
        self.b = Tensor.param(np.zeros((rank, d_out)), name=f"{name}.b")
        self.scale = alpha / rank
        self.name = name

    def __call__(self, x: Tensor) -> Tensor:
        return T.matmul(T.matmul(x, self.a), self.b) * self.scale

    def named_params(self):
        return {self.a.name: self.a, self.b.name: self.b}


class LayerNorm:
    def __init__(self, dim: int, name: str, eps: float = 1e-5):
        self.gamma = Tensor.param(np.ones(dim), name=f"{name}.g")
        self.beta = Tensor.param(np.zeros(dim), name=f"{name}.b")
        self.eps = eps
        self.name = name

    def __call__(self, x: Tensor) -> Tensor:
        return T.layernorm(x, self.gamma, self.beta, self.eps)

    def named_params(self):
        return {self.gamma.name: self.gamma, self.beta.name: self.beta}


LORA_PROJECTIONS = ("q", "k", "v", "fc1", "fc2")


class TransformerBlock:
    """Pre-norm block: x + MHSA(LN(x)); x + MLP(LN(x)) with GELU.

    ``lora`` maps projection names from :data:`LORA_PROJECTIONS` to
    :class:`LoraPair`; absent keys run the frozen base projection alone. The
    attention output projection carries no adapter.
    """

    def __init__(self, dim: int, heads: int, mlp_ratio: float,
                 rng: np.random.Generator, name: str):
        if dim % heads != 0:
            raise ConfigError(f"{name}: embed dim {dim} not divisible by {heads} heads")
        self.dim = dim
        self.heads = heads
        self.head_dim = dim // heads
        hidden = int(round(dim * mlp_ratio))
        self.ln1 = LayerNorm(dim, f"{name}.ln1")
        self.q = Linear(dim, dim, rng, f"{name}.q")
        self.k = Linear(dim, dim, rng, f"{name}.k")
        self.v = Linear(dim, dim, rng, f"{name}.v")
        self.out = Linear(dim, dim, rng, f"{name}.out")
        self.ln2 = LayerNorm(dim, f"{name}.ln2")
        self.fc1 = Linear(dim, hidden, rng, f"{name}.fc1")
        self.fc2 = Linear(hidden, dim, rng, f"{name}.fc2")
        self.lora: dict[str, LoraPair] = {}
        self.name = name

    def add_lora(self, rank: int, alpha: float, rng: np.random.Generator):
        dims = {
            "q": (self.dim, self.dim),
            "k": (self.dim, self.dim),
            "v": (self.dim, self.dim),
            "fc1": (self.dim, self.fc1.w.shape[1]),
            "fc2": (self.fc1.w.shape[1], self.dim),
        }
        for proj in LORA_PROJECTIONS:
            d_in, d_out = dims[proj]
            self.lora[proj] = LoraPair(d_in, d_out, rank, alpha, rng,
                                       f"{self.name}.lora.{proj}")

    def _proj(self, which: str, x: Tensor) -> Tensor:
        base = getattr(self, which)(x)
        pair = self.lora.get(which)
        return base + pair(x) if pair is not None else base

    def __call__(self, x: Tensor) -> Tensor:
        h = self.ln1(x)
        q, k, v = self._proj("q", h), self._proj("k", h), self._proj("v", h)
        btd = q.shape
        split = btd[:-1] + (self.heads, self.head_dim)
        # (..., T, D) -> (..., H, T, hd)
        axes = tuple(range(len(split)))
        perm = axes[:-3] + (axes[-2], axes[-3], axes[-1])
        qh = T.transpose(T.reshape(q, split), perm)
        kh = T.transpose(T.reshape(k, split), perm)
        vh = T.transpose(T.reshape(v, split), perm)
        swap_last = axes[:-2] + (axes[-1], axes[-2])
        scores = T.matmul(qh, T.transpose(kh, swap_last)) * (1.0 / math.sqrt(self.head_dim))
        attn = T.softmax(scores, axis=-1)
        ctx = T.matmul(attn, vh)
        ctx = T.reshape(T.transpose(ctx, perm), btd)
        x = x + self.out(ctx)
        h = self.ln2(x)
        h = self._proj("fc2", T.gelu(self._proj("fc1", h)))
        return x + h

    def named_params(self):
        out = {}
        for part in (self.ln1, self.q, self.k, self.v, self.out, self.ln2,
                     self.fc1, self.fc2):
            out.update(part.named_params())
        for pair in self.lora.values():
            out.update(pair.named_params())
        return out


def sinusoidal_embedding(n_positions: int, dim: int, base: float = 10000.0) -> np.ndarray:
    """Fixed sin/cos position table of shape (n_positions, dim)."""
    pos = np.arange(n_positions)[:, None].astype(np.float64)
    i = np.arange(dim // 2)[None, :].astype(np.float64)
    angles = pos / np.power(base, 2 * i / dim)
    table = np.zeros((n_positions, dim))
    table[:, 0::2] = np.sin(angles)
    table[:, 1::2] = np.cos(angles)
    return table
