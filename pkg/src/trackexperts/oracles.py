"""Ground truth for small instances and comparators for regret measurements.

* :func:`brute_force_start_marginal` / :func:`brute_force_prediction` evaluate
  the tracking forecaster's defining quotient by enumerating every transition
  path, with learners replayed from each possible segment start.
* :func:`dense_recursion_predictions` is a second, independent route: the
  ``O(t^2)`` weight recursion over every segment start, no slot bookkeeping.
* :func:`best_meta_expert`, :func:`best_piecewise_bernoulli`,
  :func:`adaptive_regret_scan` supply the comparators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.special import logsumexp, xlogy

from .errors import DomainError, ResourceError
from .learners import LearnerFactory
from .losses import LossFn
from .paths import SwitchLaw, TransitionPath
from .pruning import PruneSchedule, alive, pruned_switch_prob

MAX_BRUTE_T = 14


def _replay_tables(learner_factory: LearnerFactory, loss: LossFn, history: Sequence, t: int):
    """Predictions ``pred[s][tau]`` and losses ``loss[s][tau]`` of a learner restarted at ``s``."""
    preds = {}
    losses = np.zeros((t + 1, t + 1))
    for s in range(1, t + 1):
        learner = learner_factory(s)
        for tau in range(s, t + 1):
            p = learner.predict(tau)
            preds[s, tau] = p
            if tau < t:
                y = history[tau - 1]
                losses[s, tau] = loss(p, y)
                learner.update(y)
    return preds, losses


def brute_force_start_marginal(law: SwitchLaw, sched: PruneSchedule, eta: float,
                               learner_factory: LearnerFactory, loss: LossFn,
                               history: Sequence, t: int):
    """Posterior probability that the current segment started at ``s``, for ``s = 1..t``.

    Returns ``(marginal, preds)`` where ``marginal[s-1]`` sums the normalized
    weights ``w_t(T) exp(-eta L_{t-1}(A, T))`` of all paths with last switch ``s``.
    """
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    if t > MAX_BRUTE_T:
        raise ResourceError(f"brute force limited to t <= {MAX_BRUTE_T}, got {t}")
    if len(history) < t - 1:
        raise DomainError(f"need {t - 1} past outcomes, got {len(history)}")
    preds, seg_loss = _replay_tables(learner_factory, loss, history, t)

    # log p_hat(s | tau) and log(1 - p_hat(s | tau)) tables
    log_sw = np.full((t + 1, t + 1), -np.inf)
    log_st = np.full((t + 1, t + 1), -np.inf)
    for s in range(2, t + 1):
        for tau in range(1, s):
            p = pruned_switch_prob(law, sched, s, tau)
            log_sw[s, tau] = math.log(p)
            log_st[s, tau] = math.log1p(-p) if p < 1.0 else -np.inf

    codes = np.arange(1 << (t - 1), dtype=np.int64)
    tau = np.ones(codes.shape, dtype=np.int64)
    log_w = np.zeros(codes.shape)
    path_loss = np.zeros(codes.shape)
    for s in range(1, t + 1):
        if s >= 2:
            sw = ((codes >> (s - 2)) & 1).astype(bool)
            log_w += np.where(sw, log_sw[s, tau], log_st[s, tau])
            tau = np.where(sw, s, tau)
        if s < t:
            path_loss += seg_loss[tau, s]
    with np.errstate(invalid="ignore"):
        score = log_w - eta * path_loss
    score = np.where(np.isneginf(log_w), -np.inf, score)
    score -= logsumexp(score)
    marginal = np.bincount(tau - 1, weights=np.exp(score), minlength=t)
    return marginal, [preds[s, t] for s in range(1, t + 1)]


def brute_force_prediction(law: SwitchLaw, sched: PruneSchedule, eta: float,
                           learner_factory: LearnerFactory, loss: LossFn,
                           history: Sequence, t: int):
    marginal, preds = brute_force_start_marginal(law, sched, eta, learner_factory, loss, history, t)
    out = sum(m * np.asarray(p, dtype=float) for m, p in zip(marginal, preds))
    return float(out) if np.ndim(out) == 0 else out


def dense_recursion_predictions(law: SwitchLaw, sched: PruneSchedule, eta: float,
                                learner_factory: LearnerFactory, loss: LossFn,
                                outcomes: Sequence, n: Optional[int] = None) -> list:
    """Predictions for rounds ``1..n`` from the full ``O(n^2)`` weight recursion.

    Keeps a weight for every start ``1..t`` (dead ones at ``-inf``) and uses the
    scalar switch-probability and liveness functions, nothing vectorized.
    """
    n = len(outcomes) if n is None else n
    logv = [0.0]
    learners = [learner_factory(1)]
    out = []
    for t in range(1, n + 1):
        finite = [lv for lv in logv if lv > -math.inf]
        top = max(finite)
        z = sum(math.exp(lv - top) for lv in finite)
        preds = [lr.predict(t) for lr in learners]
        mix = 0.0
        for lv, p in zip(logv, preds):
            if lv > -math.inf:
                mix = mix + math.exp(lv - top) / z * np.asarray(p, dtype=float)
        out.append(float(mix) if np.ndim(mix) == 0 else mix)
        if t == n:
            break
        y = outcomes[t - 1]
        ells = []
        for lr, p in zip(learners, preds):
            ells.append(loss(p, y))
            lr.update(y)
        nxt = []
        switch_terms = []
        for s in range(1, t + 1):
            lv = logv[s - 1]
            if lv == -math.inf:
                nxt.append(-math.inf)
                continue
            p = pruned_switch_prob(law, sched, t + 1, s)
            base = lv - eta * ells[s - 1]
            switch_terms.append(base + math.log(p))
            nxt.append(base + math.log1p(-p) if p < 1.0 else -math.inf)
        top = max(switch_terms)
        nxt.append(top + math.log(sum(math.exp(v - top) for v in switch_terms)))
        logv = nxt
        learners.append(learner_factory(t + 1))
    return out


@dataclass
class MetaExpertSolution:
    path: TransitionPath
    experts: list
    total_loss: float

    @property
    def n_switches(self) -> int:
        return self.path.n_switches


def meta_expert_loss(loss_matrix: np.ndarray, path: TransitionPath, experts: Sequence[int]) -> float:
    """``sum_c L_{i_c}(t_c, t_{c+1})`` for a finite expert class."""
    L = np.asarray(loss_matrix, dtype=float)
    segs = path.segments()
    if len(experts) != len(segs):
        raise DomainError("need one expert per segment")
    return float(sum(L[i, a - 1:b - 1].sum() for (a, b), i in zip(segs, experts)))


def best_meta_expert(loss_matrix, C_max: int) -> MetaExpertSolution:
    """Best switching sequence of experts with at most ``C_max`` switches.

    ``loss_matrix`` has shape ``(N, n)``.  Ties are broken deterministically:
    the lowest-index final expert, then, walking backwards, staying with the
    current expert whenever that is optimal (so each switch is placed as early
    as the tie allows), and the lowest index when entering a new expert.
    """
    L = np.asarray(loss_matrix, dtype=float)
    if L.ndim != 2 or L.size == 0:
        raise DomainError("loss_matrix must be a non-empty (N, n) array")
    N, n = L.shape
    C_max = min(max(int(C_max), 0), n - 1)
    # best[c, t, i]: min loss over rounds 0..t with <= c switches, in expert i at t
    best = np.empty((C_max + 1, n, N))
    best[:, 0, :] = L[:, 0]
    for t in range(1, n):
        best[0, t] = best[0, t - 1] + L[:, t]
        if C_max:
            enter = best[:-1, t - 1].min(axis=1)
            best[1:, t] = np.minimum(best[1:, t - 1], enter[:, None]) + L[:, t]
    c, t = C_max, n - 1
    i = int(np.argmin(best[c, t]))
    total = float(best[c, t, i])
    experts = [i]
    switches = []
    while t > 0:
        if c == 0 or best[c, t - 1, i] <= best[c - 1, t - 1].min():
            t -= 1
            continue
        switches.append(t + 1)
        c -= 1
        t -= 1
        i = int(np.argmin(best[c, t]))
        experts.append(i)
    path = TransitionPath(n, tuple(reversed(switches)))
    return MetaExpertSolution(path, list(reversed(experts)), total)


def best_segmentation(segment_costs: Callable[[int], np.ndarray], n: int, C_max: int):
    """Optimal split of rounds ``0..n-1`` into at most ``C_max + 1`` segments.

    ``segment_costs(e)`` returns the costs of ``[s, e)`` for ``s = 0..e-1``
    (0-based, half-open).  Returns ``(total_cost, starts)`` with 1-based starts.
    Ties pick the earliest split.
    """
    C_max = min(max(int(C_max), 0), n - 1)
    D = np.full((C_max + 1, n + 1), np.inf)
    arg = np.zeros((C_max + 1, n + 1), dtype=np.int64)
    for e in range(1, n + 1):
        costs = segment_costs(e)
        D[0, e] = costs[0]
        for c in range(1, C_max + 1):
            cand = D[c - 1, :e] + costs
            cand[0] = D[c - 1, e]  # s=0 would be an empty previous segment: reuse fewer switches
            s = int(np.argmin(cand))
            D[c, e] = cand[s]
            arg[c, e] = s
    c, e = C_max, n
    starts = []
    while c > 0:
        s = arg[c, e]
        if s == 0:
            c -= 1
            continue
        starts.append(s + 1)
        e = s
        c -= 1
    return float(D[C_max, n]), sorted(starts)


def bernoulli_ml_cost(n0, n1):
    """``min_theta -n0 ln(1-theta) - n1 ln(theta)``, attained at ``theta = n1/(n0+n1)``."""
    n0 = np.asarray(n0, dtype=float)
    n1 = np.asarray(n1, dtype=float)
    m = n0 + n1
    return xlogy(m, m) - xlogy(n0, n0) - xlogy(n1, n1)


def best_piecewise_bernoulli(outcomes: Sequence[int], C_max: int) -> MetaExpertSolution:
    """Best piecewise-constant Bernoulli parameter (the KT learner's comparator class)."""
    y = np.asarray(outcomes, dtype=np.int64)
    n = len(y)
    ones = np.concatenate([[0], np.cumsum(y)])
    idx = np.arange(n + 1)

    def costs(e):
        n1 = ones[e] - ones[:e]
        n0 = (e - idx[:e]) - n1
        return bernoulli_ml_cost(n0, n1)

    total, starts = best_segmentation(costs, n, C_max)
    path = TransitionPath(n, tuple(starts))
    thetas = []
    for a, b in path.segments():
        thetas.append(float(ones[b - 1] - ones[a - 1]) / (b - a))
    return MetaExpertSolution(path, thetas, total)


def best_constant_expert_interval(loss_matrix, t: int, tprime: int):
    """``(argmin_i, min_i sum_{tau=t}^{t'-1} loss[i, tau])`` for 1-based ``[t, t')``."""
    L = np.asarray(loss_matrix, dtype=float)
    n = L.shape[1]
    if not 1 <= t < tprime <= n + 1:
        raise DomainError(f"need 1 <= t < t' <= {n + 1}, got [{t}, {tprime})")
    P = np.concatenate([np.zeros((L.shape[0], 1)), np.cumsum(L, axis=1)], axis=1)
    sums = P[:, tprime - 1] - P[:, t - 1]
    i = int(np.argmin(sums))
    return i, float(sums[i])


def adaptive_regret_scan(forecaster_losses, loss_matrix) -> float:
    """Largest excess loss over any interval relative to the best constant expert there."""
    f = np.asarray(forecaster_losses, dtype=float)
    L = np.asarray(loss_matrix, dtype=float)
    if L.ndim != 2 or L.shape[1] != len(f):
        raise DomainError("forecaster losses and loss matrix are not aligned")
    n = len(f)
    F = np.concatenate([[0.0], np.cumsum(f)])
    P = np.concatenate([np.zeros((L.shape[0], 1)), np.cumsum(L, axis=1)], axis=1)
    best = -np.inf
    for t in range(n):
        excess = (F[t + 1:] - F[t]) - (P[:, t + 1:] - P[:, t:t + 1]).min(axis=0)
        best = max(best, float(excess.max()))
    return best


def adaptive_regret_scan_bernoulli(forecaster_losses, outcomes) -> float:
    """Adaptive regret against the best constant Bernoulli parameter per interval."""
    f = np.asarray(forecaster_losses, dtype=float)
    y = np.asarray(outcomes, dtype=np.int64)
    if len(f) != len(y):
        raise DomainError("forecaster losses and outcomes are not aligned")
    n = len(f)
    F = np.concatenate([[0.0], np.cumsum(f)])
    ones = np.concatenate([[0], np.cumsum(y)])
    best = -np.inf
    for t in range(n):
        ends = np.arange(t + 1, n + 1)
        n1 = ones[ends] - ones[t]
        n0 = (ends - t) - n1
        excess = (F[t + 1:] - F[t]) - bernoulli_ml_cost(n0, n1)
        best = max(best, float(excess.max()))
    return best
