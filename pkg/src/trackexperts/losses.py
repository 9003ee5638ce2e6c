"""Loss functions with their exp-concavity metadata."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import rel_entr

from .errors import ConfigError, DomainError

LOG_CLAMP = 1e-12

KINDS = ("log", "square", "relative_entropy", "linear_bounded")
_ETA = {"log": 1.0, "square": 0.5, "relative_entropy": 1.0, "linear_bounded": None}
_RANGE = {"log": None, "square": (0.0, 1.0), "relative_entropy": None, "linear_bounded": (0.0, 1.0)}


@dataclass(frozen=True)
class LossFn:
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown loss {self.kind!r}; expected one of {KINDS}")

    @property
    def exp_concavity_eta(self) -> Optional[float]:
        """Largest eta for which exp(-eta * loss) is concave, or None."""
        return _ETA[self.kind]

    @property
    def range_hint(self):
        return _RANGE[self.kind]

    @property
    def bounded(self) -> bool:
        return self.range_hint is not None

    def __call__(self, p, y) -> float:
        kind = self.kind
        if kind == "log":
            y = _binary(y)
            q = float(p) if y == 1 else 1.0 - float(p)
            return -math.log(_clamp(q))
        if kind == "square":
            d = np.asarray(p, dtype=float) - np.asarray(y, dtype=float)
            return float(np.sum(d * d))
        if kind == "relative_entropy":
            p = _clamp(float(p))
            y = float(y)
            if not 0.0 <= y <= 1.0:
                raise DomainError(f"relative entropy outcome must lie in [0, 1], got {y}")
            return float(rel_entr(y, p) + rel_entr(1.0 - y, 1.0 - p))
        p = np.asarray(p, dtype=float)
        y = _loss_vector(y, p.shape[-1])
        return float(p @ y)

    def batch(self, F, y) -> np.ndarray:
        """Losses of every row of ``F`` (one row per expert) against outcome ``y``."""
        F = np.asarray(F, dtype=float)
        kind = self.kind
        if kind == "log":
            y = _binary(y)
            q = F if y == 1 else 1.0 - F
            if np.any(q < LOG_CLAMP):
                warnings.warn("log-loss argument clamped away from 0", RuntimeWarning, stacklevel=2)
                q = np.maximum(q, LOG_CLAMP)
            return -np.log(q)
        if kind == "square":
            d = F - np.asarray(y, dtype=float)
            return d * d if d.ndim == 1 else np.sum(d * d, axis=-1)
        if kind == "relative_entropy":
            y = float(y)
            Fc = np.clip(F, LOG_CLAMP, 1.0 - LOG_CLAMP)
            return rel_entr(y, Fc) + rel_entr(1.0 - y, 1.0 - Fc)
        y = _loss_vector(y, F.shape[-1])
        return F @ y


def loss_eval(loss: LossFn, p, y) -> float:
    return loss(p, y)


def _binary(y) -> int:
    if y in (0, 1):
        return int(y)
    raise DomainError(f"outcome must be 0 or 1, got {y!r}")


def _clamp(q: float) -> float:
    if q < LOG_CLAMP or q > 1.0 - LOG_CLAMP:
        warnings.warn("log-loss argument clamped to [1e-12, 1-1e-12]", RuntimeWarning, stacklevel=3)
        return min(max(q, LOG_CLAMP), 1.0 - LOG_CLAMP)
    return q


def _loss_vector(y, dim: int) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (dim,):
        raise DomainError(f"loss vector must have shape ({dim},), got {y.shape}")
    if y.min() < 0.0 or y.max() > 1.0:
        raise DomainError("losses must lie in [0, 1]")
    return y
