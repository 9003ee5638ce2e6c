"""Base learners that the tracker restarts at every segment start.

A learner factory is any callable ``factory(start) -> learner``.  A learner
exposes ``predict(t)``, ``update(y)`` and the ``last_loss`` it incurred on the
latest update; ``predict`` must precede ``update`` every round.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, Union

import numpy as np

from .errors import ConfigError, DomainError, ProtocolError
from .losses import LossFn


class BaseLearner(Protocol):
    start: int
    last_loss: float

    def predict(self, t: int): ...

    def update(self, y) -> None: ...


LearnerFactory = Callable[[int], BaseLearner]

LOG_LOSS = LossFn("log")


class KTLearner:
    """Krichevsky-Trofimov (add-1/2) estimator of the probability of a 1."""

    loss = LOG_LOSS

    def __init__(self, start: int = 1):
        self.start = start
        self.n0 = 0
        self.n1 = 0
        self.last_loss = math.nan
        self._pending = None

    def predict(self, t: Optional[int] = None) -> float:
        self._pending = (self.n1 + 0.5) / (self.n0 + self.n1 + 1.0)
        return self._pending

    def update(self, y) -> None:
        p = self._pending
        if p is None:
            raise ProtocolError("KTLearner.update called before predict")
        if y == 1:
            self.n1 += 1
            self.last_loss = -math.log(p)
        elif y == 0:
            self.n0 += 1
            self.last_loss = -math.log1p(-p)
        else:
            raise DomainError(f"KT learner needs binary outcomes, got {y!r}")
        self._pending = None


def kt_predict(n0: int, n1: int) -> float:
    return (n1 + 0.5) / (n0 + n1 + 1.0)


def eta_schedule_convex(t: int, n_experts: int) -> float:
    """``2 * sqrt(ln N / t)``."""
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    if n_experts < 2:
        raise DomainError(f"need at least 2 experts, got {n_experts}")
    return 2.0 * math.sqrt(math.log(n_experts) / t)


@dataclass
class EWAConfig:
    """Exponentially weighted average forecaster over a finite expert set.

    ``advice`` is either static, shape ``(N,)`` or ``(N, d)``, or per round,
    shape ``(n, N)`` / ``(n, N, d)`` with ``per_round=True`` (row ``t-1`` is
    the advice at round ``t``).  ``eta`` is a positive constant or
    ``"convex"`` for ``2 sqrt(ln N / k)`` with ``k`` the learner's local round.
    """

    loss: LossFn
    advice: np.ndarray
    per_round: bool = False
    weights: Optional[np.ndarray] = None
    eta: Union[float, str] = 1.0
    log_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.advice = np.asarray(self.advice, dtype=float)
        if self.per_round and self.advice.ndim < 2:
            raise ConfigError("per-round advice needs shape (n, N) or (n, N, d)")
        n = self.n_experts
        if self.weights is None:
            w = np.full(n, 1.0 / n)
        else:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (n,) or np.any(w <= 0):
                raise ConfigError("initial weights must be positive, one per expert")
            if abs(w.sum() - 1.0) > 1e-9:
                raise ConfigError(f"initial weights must sum to 1, got {w.sum()}")
        self.weights = w
        self.log_weights = np.log(w)
        if isinstance(self.eta, str):
            if self.eta != "convex":
                raise ConfigError(f"unknown eta schedule {self.eta!r}")
        elif not self.eta > 0:
            raise ConfigError(f"eta must be positive, got {self.eta}")

    @property
    def n_experts(self) -> int:
        return self.advice.shape[1] if self.per_round else self.advice.shape[0]

    def advice_at(self, t: int) -> np.ndarray:
        if self.per_round:
            if not 1 <= t <= self.advice.shape[0]:
                raise DomainError(f"no advice for round {t}")
            return self.advice[t - 1]
        return self.advice

    def eta_at(self, k: int) -> float:
        if self.eta == "convex":
            n = self.n_experts
            return 2.0 * math.sqrt(math.log(n) / k) if n > 1 else 1.0
        return float(self.eta)

    def factory(self) -> LearnerFactory:
        return lambda start: EWALearner(self, start)


class EWALearner:
    """One run of exponential weighting, started at ``start``."""

    def __init__(self, cfg: EWAConfig, start: int = 1):
        self.cfg = cfg
        self.loss = cfg.loss
        self.start = start
        self.cum_losses = np.zeros(cfg.n_experts)
        self.last_loss = math.nan
        self.rounds = 0
        self._pending = None

    def weights(self, t: int) -> np.ndarray:
        """Normalized expert weights ``pi_{i,t}`` for the coming round."""
        k = self.rounds + 1
        logits = self.cfg.log_weights - self.cfg.eta_at(k) * self.cum_losses
        w = np.exp(logits - logits.max())
        return w / w.sum()

    def predict(self, t: int):
        F = self.cfg.advice_at(t)
        pi = self.weights(t)
        p = pi @ F
        self._pending = (F, p)
        return float(p) if np.ndim(p) == 0 else p

    def update(self, y) -> None:
        if self._pending is None:
            raise ProtocolError("EWALearner.update called before predict")
        F, p = self._pending
        self.cum_losses += self.loss.batch(F, y)
        self.last_loss = self.loss(p, y)
        self.rounds += 1
        self._pending = None


def ewa_factory(cfg: EWAConfig) -> LearnerFactory:
    return cfg.factory()


@dataclass(frozen=True)
class RegretBound:
    """A declared regret bound ``rho(m)`` with ``rho(0) = 0``.

    kinds: ``"kt"`` (1/2 ln m + ln 2), ``"ewa_convex"`` (sqrt(m ln N)),
    ``"ewa_expconcave"`` (ln N / eta), ``"constant"`` (``value``).
    """

    kind: str
    n_experts: int = 1
    eta: float = 1.0
    value: float = 0.0

    def __call__(self, m: float) -> float:
        if m <= 0:
            return 0.0
        if self.kind == "kt":
            # below m=1 interpolate linearly to 0; stays concave and nondecreasing
            return 0.5 * math.log(m) + math.log(2.0) if m >= 1 else m * math.log(2.0)
        if self.kind == "ewa_convex":
            return math.sqrt(m * math.log(self.n_experts))
        if self.kind == "ewa_expconcave":
            return math.log(self.n_experts) / self.eta
        if self.kind == "constant":
            return self.value
        raise ConfigError(f"unknown regret bound kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n_experts": self.n_experts, "eta": self.eta, "value": self.value}


KT_REGRET = RegretBound("kt")


def declared_regret_bound(learner) -> RegretBound:
    """The regret bound a learner (instance, class or EWAConfig) guarantees."""
    if learner is KTLearner or isinstance(learner, KTLearner):
        return KT_REGRET
    cfg = learner.cfg if isinstance(learner, EWALearner) else learner
    if not isinstance(cfg, EWAConfig):
        raise ConfigError(f"no declared regret bound for {learner!r}")
    n = cfg.n_experts
    eta_ec = cfg.loss.exp_concavity_eta
    if cfg.eta != "convex" and eta_ec is not None and cfg.eta <= eta_ec:
        return RegretBound("ewa_expconcave", n_experts=n, eta=float(cfg.eta))
    if cfg.eta == "convex" and cfg.loss.bounded:
        return RegretBound("ewa_convex", n_experts=n)
    raise ConfigError("EWA configuration has no declared regret bound "
                      "(use eta='convex' with a bounded loss, or eta <= the exp-concavity eta)")
