"""AdamW with parameter groups and the warmup + cosine learning-rate rule."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import TrainingError
from .tensor import Tensor


def cosine_warmup_lr(epoch: int, total: int, warmup: int, base: float) -> float:
    """Linear ramp 0 -> base over ``warmup`` epochs, then cosine decay to 0.

    ``epoch`` may be fractional for per-step schedules.
    """
    if not 0 <= epoch < total or warmup >= total:
        raise TrainingError(f"cosine_warmup_lr: epoch={epoch}, warmup={warmup}, total={total}")
    if epoch < warmup:
        return base * epoch / warmup
    progress = (epoch - warmup) / (total - warmup)
    return base * 0.5 * (1.0 + math.cos(math.pi * progress))


@dataclass
class ParamGroup:
    params: list[Tensor]
    lr_scale: float = 1.0
    weight_decay: float = 0.0


@dataclass
class AdamW:
    """Decoupled weight decay Adam over named parameter groups.

    Frozen tensors (requires_grad False) are skipped entirely, so they can sit
    in a group without ever moving.
    """

    groups: dict[str, ParamGroup]
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    _m: dict[int, np.ndarray] = field(default_factory=dict)
    _v: dict[int, np.ndarray] = field(default_factory=dict)

    def zero_grad(self):
        for group in self.groups.values():
            for p in group.params:
                p.grad = None

    def step(self, lr: float | None = None):
        """Apply one update using gradients currently on the parameters."""
        base_lr = self.lr if lr is None else lr
        self.step_count += 1
        t = self.step_count
        bias1 = 1.0 - self.beta1**t
        bias2 = 1.0 - self.beta2**t
        for group in self.groups.values():
            glr = base_lr * group.lr_scale
            for p in group.params:
                if not p.requires_grad or p.grad is None:
                    continue
                g = p.grad
                if not np.all(np.isfinite(g)):
                    raise TrainingError(f"non-finite gradient on {p.name or 'parameter'}")
                key = id(p)
                m = self._m.get(key)
                if m is None:
                    m = np.zeros_like(p.data)
                    self._m[key] = m
                    self._v[key] = np.zeros_like(p.data)
                v = self._v[key]
                m *= self.beta1
                m += (1.0 - self.beta1) * g
                v *= self.beta2
                v += (1.0 - self.beta2) * (g * g)
                update = (m / bias1) / (np.sqrt(v / bias2) + self.eps)
                if group.weight_decay:
                    p.data = p.data - glr * (update + group.weight_decay * p.data)
                else:
                    p.data = p.data - glr * update
