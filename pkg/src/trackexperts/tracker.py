"""The tracking forecaster, implemented by the per-segment weight recursion.

For every live segment start ``t'`` the tracker keeps ``log v_t(t')`` (the total
exponential weight of all paths whose current segment began at ``t'``) and one
base-learner instance started at ``t'``.  The prediction is the
``v``-weighted mixture of those learners.  Pruning keeps the number of live
segments at ``O(g log t)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .errors import ConfigError, DomainError, ProtocolError
from .learners import LearnerFactory
from .losses import LossFn
from .paths import SwitchLaw
from .pruning import UNBOUNDED, PruneSchedule


def _lse(x: np.ndarray) -> float:
    m = x.max()
    if m == -np.inf:
        return m
    return float(m + np.log(np.exp(x - m).sum()))


@dataclass
class TrackerConfig:
    law: SwitchLaw
    learner_factory: LearnerFactory
    loss: LossFn
    eta: float
    sched: PruneSchedule = UNBOUNDED
    horizon_hint: Optional[int] = None
    # renormalize slot weights after every round; predictions do not depend on it
    renormalize: bool = True

    def __post_init__(self):
        if not self.eta > 0:
            raise ConfigError(f"eta must be positive, got {self.eta}")
        ec = self.loss.exp_concavity_eta
        if ec is not None and self.eta > ec + 1e-15:
            raise ConfigError(f"eta={self.eta} exceeds the exp-concavity eta {ec} of {self.loss.kind} loss")


class Tracker:
    """Predict/observe state machine; call :meth:`predict` then :meth:`observe` each round."""

    def __init__(self, cfg: TrackerConfig):
        self.cfg = cfg
        self.t = 1
        self.starts: List[int] = [1]
        self._ends = np.array([cfg.sched.span_end(1)], dtype=float)
        self.log_weights = np.zeros(1)
        self.learners = [cfg.learner_factory(1)]
        self.cum_loss = 0.0
        self.live_counts: List[int] = []
        self.update_count = 0
        self.slot_predictions = None
        self._prediction = None

    @property
    def live_segments(self) -> int:
        return len(self.starts)

    def slot_probs(self) -> np.ndarray:
        """Normalized slot weights ``v_t(t') / sum v_t``."""
        lw = self.log_weights
        return np.exp(lw - _lse(lw))

    def predict(self):
        if self._prediction is not None:
            return self._prediction
        t = self.t
        preds = [learner.predict(t) for learner in self.learners]
        P = np.asarray(preds, dtype=float)
        w = self.slot_probs()
        mix = w @ P
        self.slot_predictions = P
        self._prediction = float(mix) if P.ndim == 1 else mix
        return self._prediction

    def observe(self, y) -> float:
        """Consume outcome ``y`` for the current round; return the forecaster's loss."""
        if self._prediction is None:
            raise ProtocolError("observe() called before predict() for this round")
        cfg = self.cfg
        loss = cfg.loss(self._prediction, y)
        ells = np.empty(len(self.learners))
        for i, learner in enumerate(self.learners):
            learner.update(y)
            ells[i] = learner.last_loss
        self.update_count += len(self.learners)
        self.cum_loss += loss
        self.live_counts.append(len(self.starts))
        self._advance(ells)
        return loss

    def _advance(self, ells: np.ndarray) -> None:
        cfg = self.cfg
        t1 = self.t + 1
        starts = np.asarray(self.starts, dtype=np.int64)
        p = cfg.law.switch_probs(t1, starts)
        live = self._ends > t1
        base = self.log_weights - cfg.eta * ells
        # dead slots hand all their mass to the new segment (switch prob 1)
        with np.errstate(divide="ignore"):
            new_lw = _lse(base + np.where(live, np.log(p), 0.0))
        kept = base[live] + np.log1p(-p[live])
        lw = np.append(kept, new_lw)
        if cfg.renormalize:
            lw -= _lse(lw)
        if live.all():
            self.starts.append(t1)
        else:
            idx = np.flatnonzero(live)
            self.starts = [self.starts[i] for i in idx] + [t1]
            self.learners = [self.learners[i] for i in idx]
            self._ends = self._ends[live]
        self.learners.append(cfg.learner_factory(t1))
        self._ends = np.append(self._ends, cfg.sched.span_end(t1))
        self.log_weights = lw
        self.t = t1
        self._prediction = None
        self.slot_predictions = None


def eta_preset(kind: str, n: int, n_experts: Optional[int] = None, C: Optional[int] = None,
               g: Optional[int] = 1, phi: float = 1.0, loss: Optional[LossFn] = None) -> float:
    """Horizon-dependent learning rates.

    ``convex_unknown_C``: ``phi ln n / sqrt n``;
    ``convex_known_C``: ``sqrt(8 (C+1) ln n (log2 n / floor(log2(g+1)) + 2) / n)``;
    ``exp_concave``: the loss's own exp-concavity eta.
    """
    if n < 2:
        raise ConfigError(f"eta presets need n >= 2, got {n}")
    if kind == "convex_unknown_C":
        return phi * math.log(n) / math.sqrt(n)
    if kind == "convex_known_C":
        if C is None:
            raise ConfigError("convex_known_C preset needs the switch budget C")
        step = (g + 1).bit_length() - 1 if g is not None else math.log2(n)
        return math.sqrt(8 * (C + 1) * math.log(n) * (math.log2(n) / step + 2) / n)
    if kind == "exp_concave":
        if loss is None or loss.exp_concavity_eta is None:
            raise ConfigError("exp_concave preset needs an exp-concave loss")
        return loss.exp_concavity_eta
    raise ConfigError(f"unknown eta preset {kind!r}")


@dataclass
class RunReport:
    predictions: list
    losses: List[float]
    cum_loss: List[float]
    live_segments: List[int]
    update_count: int = 0

    @property
    def total_loss(self) -> float:
        return self.cum_loss[-1] if self.cum_loss else 0.0

    def __len__(self):
        return len(self.losses)

    def rows(self):
        for i, (p, l, c, k) in enumerate(zip(self.predictions, self.losses, self.cum_loss,
                                             self.live_segments)):
            yield i + 1, p, l, c, k

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "prediction", "loss", "cum_loss", "live_segments"])
            for t, p, l, c, k in self.rows():
                w.writerow([t, format_decision(p), repr(float(l)), repr(float(c)), k])

    @classmethod
    def from_csv(cls, path) -> "RunReport":
        preds, losses, cums, live = [], [], [], []
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                preds.append(parse_decision(row["prediction"]))
                losses.append(float(row["loss"]))
                cums.append(float(row["cum_loss"]))
                live.append(int(row["live_segments"]))
        return cls(preds, losses, cums, live)


def format_decision(p) -> str:
    if np.ndim(p) == 0:
        return repr(float(p))
    return " ".join(repr(float(x)) for x in np.ravel(p))


def parse_decision(text: str):
    parts = text.split()
    if len(parts) == 1:
        return float(parts[0])
    return np.array([float(x) for x in parts])


def run_sequence(cfg: TrackerConfig, outcomes: Sequence) -> RunReport:
    """Drive a fresh tracker over ``outcomes``."""
    if len(outcomes) == 0:
        raise DomainError("outcome sequence is empty")
    tr = Tracker(cfg)
    preds, losses, cums = [], [], []
    for y in outcomes:
        preds.append(tr.predict())
        losses.append(tr.observe(y))
        cums.append(tr.cum_loss)
    return RunReport(preds, losses, cums, list(tr.live_counts), tr.update_count)
