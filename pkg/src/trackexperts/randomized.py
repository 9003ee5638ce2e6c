"""Randomized tracking over ``N`` actions with loss vectors in ``[0, 1]^N``.

Each round samples a segment start with probability proportional to its
weight, takes the distribution of the learner started there, and draws the
action from it.  Because a learner's output depends on a path only through
the start of its current segment, this gives the same action distribution as
sampling a whole path.  Weights evolve with each segment's *expected* loss.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from .bounds import hoeffding_radius
from .errors import DomainError, ProtocolError
from .learners import EWAConfig
from .losses import LossFn
from .paths import SwitchLaw
from .pruning import UNBOUNDED, PruneSchedule
from .tracker import Tracker, TrackerConfig

__all__ = ["ActionRecord", "RandomizedTracker", "expected_loss", "hoeffding_radius",
           "run_randomized", "write_action_log"]

LINEAR = LossFn("linear_bounded")


def expected_loss(p, losses) -> float:
    """``sum_i p_i * losses_i``."""
    p = np.asarray(p, dtype=float)
    losses = np.asarray(losses, dtype=float)
    if p.shape != losses.shape:
        raise DomainError(f"dimension mismatch: {p.shape} vs {losses.shape}")
    return float(p @ losses)


def round_rng(seed: int, t: int) -> np.random.Generator:
    """Independent counter-based stream for round ``t`` of experiment ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(t,))))


@dataclass
class ActionRecord:
    t: int
    start: int
    action: int
    realized_loss: float
    expected_loss: float


class RandomizedTracker:
    def __init__(self, law: SwitchLaw, n_actions: int, eta: float, seed: int = 0,
                 sched: PruneSchedule = UNBOUNDED, base_eta: Union[float, str] = "convex"):
        if n_actions < 1:
            raise DomainError("need at least one action")
        self.n_actions = n_actions
        self.seed = int(seed)
        self.base = EWAConfig(LINEAR, np.eye(n_actions), eta=base_eta)
        self.tracker = Tracker(TrackerConfig(law, self.base.factory(), LINEAR, eta, sched))
        self.realized_loss = 0.0
        self.records: List[ActionRecord] = []
        self._draw = None

    @property
    def t(self) -> int:
        return self.tracker.t

    @property
    def expected_cum_loss(self) -> float:
        """Sum of the mixture's expected losses (what the weights are driven by)."""
        return self.tracker.cum_loss

    def action_distribution(self) -> np.ndarray:
        """Marginal law of the next action."""
        return np.asarray(self.tracker.predict())

    def sample_action(self) -> int:
        if self._draw is not None:
            return self._draw[1]
        tr = self.tracker
        tr.predict()
        rng = round_rng(self.seed, tr.t)
        probs = tr.slot_probs()
        k = min(int(np.searchsorted(np.cumsum(probs), rng.random() * probs.sum(), side="right")),
                len(probs) - 1)
        p = tr.slot_predictions[k]
        cdf = np.cumsum(p)
        action = min(int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right")),
                     self.n_actions - 1)
        self._draw = (tr.starts[k], action, p)
        return action

    def observe_losses(self, losses) -> float:
        """Feed the loss vector; returns the realized loss of the sampled action."""
        if self._draw is None:
            raise ProtocolError("observe_losses() called before sample_action()")
        losses = np.asarray(losses, dtype=float)
        if losses.shape != (self.n_actions,):
            raise DomainError(f"loss vector must have shape ({self.n_actions},)")
        if np.any(losses < 0) or np.any(losses > 1):
            raise DomainError("losses must lie in [0, 1]")
        start, action, p = self._draw
        t = self.tracker.t
        realized = float(losses[action])
        self.tracker.observe(losses)
        self.realized_loss += realized
        self.records.append(ActionRecord(t, start, action, realized, expected_loss(p, losses)))
        self._draw = None
        return realized


LossSource = Union[np.ndarray, Callable[[int, Sequence[int]], Sequence[float]]]


def run_randomized(rt: RandomizedTracker, losses: LossSource, n: Optional[int] = None) -> List[ActionRecord]:
    """Play ``n`` rounds; ``losses`` is an ``(n, N)`` array or ``f(t, past_actions) -> vector``."""
    if callable(losses):
        if n is None:
            raise DomainError("n is required with a loss callback")
        source = losses
    else:
        arr = np.asarray(losses, dtype=float)
        n = arr.shape[0] if n is None else n
        source = lambda t, _actions: arr[t - 1]
    actions: List[int] = []
    for _ in range(n):
        t = rt.t
        actions.append(rt.sample_action())
        rt.observe_losses(source(t, tuple(actions[:-1])))
    return rt.records


def write_action_log(records: Sequence[ActionRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "start", "action", "realized_loss", "expected_loss"])
        for r in records:
            w.writerow([r.t, r.start, r.action, repr(r.realized_loss), repr(r.expected_loss)])


def read_action_log(path) -> List[ActionRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(ActionRecord(int(row["t"]), int(row["start"]), int(row["action"]),
                                    float(row["realized_loss"]), float(row["expected_loss"])))
    return out
