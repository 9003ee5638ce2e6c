"""Synthetic data: piecewise Bernoulli outcome sequences and switching loss matrices.

Also the flat-file readers and writers the harness uses (outcomes: one token per
line; loss matrices: CSV with one row per round).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, DomainError
from .paths import TransitionPath


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def _switch_times(n: int, switch_times, C: Optional[int], rng) -> Tuple[int, ...]:
    if switch_times is not None:
        return tuple(int(s) for s in switch_times)
    if C is None:
        return ()
    if not 0 <= C <= n - 1:
        raise ConfigError(f"cannot place C={C} switches in n={n} rounds")
    return tuple(sorted(int(s) for s in rng.choice(np.arange(2, n + 1), size=C, replace=False)))


@dataclass
class PiecewiseBernoulliSpec:
    """``n`` outcomes, segment ``c`` drawn i.i.d. Bernoulli(``theta[c]``).

    Give either ``switch_times`` or a count ``C``; with ``C`` the switch times are
    placed uniformly at random (from the same seed).  With neither, ``C`` is
    taken as ``len(theta) - 1``.
    """

    n: int
    theta: Sequence[float]
    switch_times: Optional[Sequence[int]] = None
    C: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        self.theta = tuple(float(x) for x in self.theta)
        for x in self.theta:
            if not 0.0 < x < 1.0:
                raise DomainError(f"theta must lie strictly inside (0, 1), got {x}")
        if self.switch_times is None and self.C is None:
            self.C = len(self.theta) - 1

    @classmethod
    def from_config(cls, cfg: dict, n: int, seed) -> "PiecewiseBernoulliSpec":
        known = {"theta", "switch_times", "C"}
        extra = set(cfg) - known - {"generator"}
        if extra:
            raise ConfigError(f"unknown piecewise_bernoulli fields: {sorted(extra)}")
        if "theta" not in cfg:
            raise ConfigError("piecewise_bernoulli needs 'theta'")
        return cls(n, cfg["theta"], cfg.get("switch_times"), cfg.get("C"), seed)


def generate_piecewise_bernoulli(spec: PiecewiseBernoulliSpec, seed=None):
    """Return ``(outcomes, true_path)``; deterministic given the seed."""
    rng = _rng(spec.seed if seed is None else seed)
    times = _switch_times(spec.n, spec.switch_times, spec.C, rng)
    path = TransitionPath(spec.n, times)
    segs = path.segments()
    if len(spec.theta) != len(segs):
        raise ConfigError(f"{len(segs)} segments but {len(spec.theta)} theta values")
    y = np.empty(spec.n, dtype=np.int64)
    for (a, b), th in zip(segs, spec.theta):
        y[a - 1:b - 1] = rng.random(b - a) < th
    return y.tolist(), path


def generate_switching_losses(n: int, n_actions: int, C: int = 3, good: float = 0.3,
                              bad: float = 0.6, switch_times=None, seed=0):
    """Bernoulli losses in ``{0, 1}``: one action per segment has mean ``good``, the rest ``bad``.

    Returns ``(losses (n, N), true_path, best_action_per_segment)``.
    """
    if n_actions < 1:
        raise ConfigError("need at least one action")
    for m in (good, bad):
        if not 0.0 <= m <= 1.0:
            raise DomainError(f"loss means must lie in [0, 1], got {m}")
    rng = _rng(seed)
    path = TransitionPath(n, _switch_times(n, switch_times, C, rng))
    means = np.full((n, n_actions), float(bad))
    best = []
    prev = -1
    for a, b in path.segments():
        choices = [i for i in range(n_actions) if i != prev] or [0]
        i = int(rng.choice(choices))
        means[a - 1:b - 1, i] = good
        best.append(i)
        prev = i
    losses = (rng.random((n, n_actions)) < means).astype(float)
    return losses, path, best


def read_outcomes(path) -> List:
    """One token per line; integers stay integers, anything else is parsed as float."""
    out = []
    with open(path) as fh:
        for line in fh:
            tok = line.strip()
            if not tok or tok.startswith("#"):
                continue
            try:
                out.append(int(tok))
            except ValueError:
                out.append(float(tok))
    return out


def write_outcomes(values, path) -> None:
    with open(path, "w") as fh:
        for v in values:
            fh.write(f"{v!r}\n" if isinstance(v, float) else f"{v}\n")


def read_loss_matrix(path) -> np.ndarray:
    """CSV, one row per round and one column per action; returns shape ``(n, N)``."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            try:
                rows.append([float(x) for x in row])
            except ValueError:
                if rows:
                    raise
                continue  # header line
    if not rows:
        raise DomainError(f"empty loss matrix in {path}")
    arr = np.asarray(rows, dtype=float)
    return arr


def write_loss_matrix(losses, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in np.asarray(losses, dtype=float):
            w.writerow([repr(float(x)) for x in row])
