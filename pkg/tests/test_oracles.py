import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ALL_LAWS, ZeroLossLearner
from trackexperts.errors import DomainError, ResourceError
from trackexperts.learners import EWAConfig, KTLearner
from trackexperts.losses import LossFn
from trackexperts.oracles import (adaptive_regret_scan, adaptive_regret_scan_bernoulli,
                                  best_constant_expert_interval, best_meta_expert,
                                  best_piecewise_bernoulli, bernoulli_ml_cost,
                                  brute_force_prediction, brute_force_start_marginal,
                                  dense_recursion_predictions, meta_expert_loss)
from trackexperts.paths import SwitchLaw, TransitionPath, enumerate_paths
from trackexperts.pruning import UNBOUNDED, PruneSchedule

LOG = LossFn("log")
SQ = LossFn("square")


# ---- brute force


def test_brute_force_t1_is_learner_prediction():
    ewa = EWAConfig(LOG, np.array([0.2, 0.3, 0.9]), eta=1.0).factory()
    assert brute_force_prediction(SwitchLaw.kt(), PruneSchedule(1), 1.0, ewa, LOG, [], 1) == pytest.approx(
        (0.2 + 0.3 + 0.9) / 3)
    assert brute_force_prediction(SwitchLaw.hs(), UNBOUNDED, 1.0, KTLearner, LOG, [], 1) == 0.5


def test_brute_force_zero_loss_chain_marginals():
    hs = SwitchLaw.hs()
    m2, _ = brute_force_start_marginal(hs, UNBOUNDED, 1.0, ZeroLossLearner, SQ, [0.5], 2)
    assert np.allclose(m2, [0.5, 0.5], atol=1e-15)
    m3, _ = brute_force_start_marginal(hs, UNBOUNDED, 1.0, ZeroLossLearner, SQ, [0.5, 0.5], 3)
    assert np.allclose(m3, [1 / 3, 1 / 3, 1 / 3], atol=1e-15)
    hw = SwitchLaw.hw(0.25)
    m3, _ = brute_force_start_marginal(hw, UNBOUNDED, 1.0, ZeroLossLearner, SQ, [0.5, 0.5], 3)
    assert np.allclose(m3, [0.75 * 0.75, 0.25 * 0.75, 0.25], atol=1e-15)
    kt = SwitchLaw.kt()
    m3, _ = brute_force_start_marginal(kt, UNBOUNDED, 1.0, ZeroLossLearner, SQ, [0.5, 0.5], 3)
    # p(2|1) = 1/4; from 1: p(3|1) = 1/6; from 2: p(3|2) = 1/4
    assert np.allclose(m3, [0.75 * 5 / 6, 0.25 * 0.75, 0.75 / 6 + 0.25 / 4], atol=1e-15)


def test_brute_force_limits():
    with pytest.raises(ResourceError):
        brute_force_prediction(SwitchLaw.kt(), UNBOUNDED, 1.0, KTLearner, LOG, [0] * 20, 15)
    with pytest.raises(DomainError):
        brute_force_prediction(SwitchLaw.kt(), UNBOUNDED, 1.0, KTLearner, LOG, [0], 5)


def literal_path_sum(law, sched, eta, factory, loss, history, t):
    """Weighted path-sum quotient written out over enumerate_paths, nothing vectorized."""
    from trackexperts.paths import last_switch
    from trackexperts.pruning import pruned_path_log_weight
    num, den = 0.0, 0.0
    for T in enumerate_paths(t):
        lw = pruned_path_log_weight(law, sched, T)
        if lw == -math.inf:
            continue
        learners = {}
        L = 0.0
        for tau in range(1, t):
            s = last_switch(T, tau)
            if s not in learners:
                learners = {s: factory(s)}
            p = learners[s].predict(tau)
            L += loss(p, history[tau - 1])
            learners[s].update(history[tau - 1])
        s = last_switch(T, t)
        if s not in learners:
            learners = {s: factory(s)}
        w = math.exp(lw - eta * L)
        num += w * learners[s].predict(t)
        den += w
    return num / den


@pytest.mark.parametrize("law", ALL_LAWS, ids=lambda l: l.label)
@pytest.mark.parametrize("g", [1, 2, None])
def test_three_routes_agree(law, g):
    sched = PruneSchedule(g)
    ewa = EWAConfig(LOG, np.array([0.25, 0.6, 0.85]), eta=1.0).factory()
    for fac in (KTLearner, ewa):
        y = np.random.default_rng(1).integers(0, 2, 9).tolist()
        dense = dense_recursion_predictions(law, sched, 0.7, fac, LOG, y)
        for t in range(1, 10):
            b = brute_force_prediction(law, sched, 0.7, fac, LOG, y, t)
            lit = literal_path_sum(law, sched, 0.7, fac, LOG, y, t)
            assert abs(b - lit) <= 1e-10
            assert abs(b - dense[t - 1]) <= 1e-10


# ---- best meta expert


def exhaustive_meta_expert(L, C_max):
    N, n = L.shape
    best = math.inf
    for T in enumerate_paths(n):
        if T.n_switches > C_max:
            continue
        for a in itertools.product(range(N), repeat=T.n_switches + 1):
            best = min(best, meta_expert_loss(L, T, a))
    return best


def test_best_meta_expert_examples():
    L = np.array([[0.3, 0.1, 0.7, 0.2]])
    sol = best_meta_expert(L, 3)
    assert sol.total_loss == pytest.approx(1.3) and sol.path == TransitionPath(4) and sol.experts == [0]
    rng = np.random.default_rng(0)
    L = rng.uniform(size=(3, 7))
    sol = best_meta_expert(L, 6)
    assert sol.total_loss == pytest.approx(L.min(axis=0).sum())
    L = np.array([[0, 1, 1, 0], [1, 0, 0, 1]], dtype=float)
    sol = best_meta_expert(L, 1)
    assert sol.total_loss == 1.0 == exhaustive_meta_expert(L, 1)
    assert sol.path.switch_times in ((2,), (4,))
    assert meta_expert_loss(L, sol.path, sol.experts) == sol.total_loss


def test_best_meta_expert_tie_break_is_deterministic():
    L = np.array([[0, 1, 1, 0], [1, 0, 0, 1]], dtype=float)
    sol = best_meta_expert(L, 1)
    assert sol.path == TransitionPath(4, (4,)) and sol.experts == [1, 0]
    sol = best_meta_expert(np.zeros((3, 5)), 2)
    assert sol.path == TransitionPath(5) and sol.experts == [0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 8), st.integers(0, 2), st.integers(0, 2 ** 32 - 1))
def test_best_meta_expert_vs_exhaustive(N, n, C, seed):
    rng = np.random.default_rng(seed)
    L = rng.integers(0, 4, size=(N, n)).astype(float) / 3
    sol = best_meta_expert(L, C)
    assert sol.total_loss == pytest.approx(exhaustive_meta_expert(L, C), abs=1e-12)
    assert sol.n_switches <= C
    assert len(sol.experts) == sol.n_switches + 1
    assert meta_expert_loss(L, sol.path, sol.experts) == pytest.approx(sol.total_loss, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=10), st.integers(0, 3))
def test_best_piecewise_bernoulli_vs_exhaustive(ys, C):
    n = len(ys)
    best = math.inf
    for T in enumerate_paths(n):
        if T.n_switches > C:
            continue
        cost = 0.0
        for a, b in T.segments():
            seg = ys[a - 1:b - 1]
            cost += float(bernoulli_ml_cost(len(seg) - sum(seg), sum(seg)))
        best = min(best, cost)
    sol = best_piecewise_bernoulli(ys, C)
    assert sol.total_loss == pytest.approx(best, abs=1e-10)
    assert sol.n_switches <= C
    direct = 0.0
    for (a, b), th in zip(sol.path.segments(), sol.experts):
        seg = ys[a - 1:b - 1]
        direct += sum(-math.log(th) if v else -math.log1p(-th) for v in seg) if 0 < th < 1 else 0.0
    assert direct == pytest.approx(sol.total_loss, abs=1e-10)


def test_bernoulli_ml_cost():
    assert bernoulli_ml_cost(0, 5) == 0.0
    assert bernoulli_ml_cost(2, 2) == pytest.approx(4 * math.log(2))
    assert bernoulli_ml_cost(1, 3) == pytest.approx(-(math.log(0.25) + 3 * math.log(0.75)))


# ---- interval comparators


def test_best_constant_expert_interval():
    rng = np.random.default_rng(2)
    L = rng.uniform(size=(4, 12))
    for t, tp in [(1, 13), (3, 4), (5, 11)]:
        i, v = best_constant_expert_interval(L, t, tp)
        sums = L[:, t - 1:tp - 1].sum(axis=1)
        assert i == int(np.argmin(sums)) and v == pytest.approx(sums.min(), rel=1e-12)
    for bad in [(0, 3), (3, 3), (5, 14)]:
        with pytest.raises(DomainError):
            best_constant_expert_interval(L, *bad)


def naive_adaptive(f, L):
    n = len(f)
    best = -math.inf
    for t in range(n):
        for tp in range(t + 1, n + 1):
            ours = sum(f[t:tp])
            theirs = min(sum(L[i, t:tp]) for i in range(L.shape[0]))
            best = max(best, ours - theirs)
    return best


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 20), st.integers(0, 2 ** 32 - 1))
def test_adaptive_regret_scan_vs_naive(N, n, seed):
    rng = np.random.default_rng(seed)
    L = rng.uniform(size=(N, n))
    f = rng.uniform(size=n)
    assert adaptive_regret_scan(f, L) == pytest.approx(naive_adaptive(f, L), abs=1e-12)


def test_adaptive_regret_scan_examples():
    L = np.array([[0.2], [0.7]])
    assert adaptive_regret_scan([0.5], L) == pytest.approx(0.3)
    rng = np.random.default_rng(4)
    L = rng.uniform(size=(3, 15))
    best_row = L[int(np.argmin(L.sum(axis=1)))]
    assert adaptive_regret_scan(L.min(axis=0), L) <= 1e-12  # prefix-sum rounding only
    # following one expert everywhere: each interval's excess is >= 0 only against itself
    assert adaptive_regret_scan(best_row, L) >= -1e-12
    with pytest.raises(DomainError):
        adaptive_regret_scan([0.1, 0.2], L)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=16), st.integers(0, 2 ** 32 - 1))
def test_adaptive_regret_bernoulli_vs_naive(ys, seed):
    f = np.random.default_rng(seed).uniform(0, 2, len(ys))
    n = len(ys)
    best = -math.inf
    for t in range(n):
        for tp in range(t + 1, n + 1):
            seg = ys[t:tp]
            best = max(best, sum(f[t:tp]) - float(bernoulli_ml_cost(len(seg) - sum(seg), sum(seg))))
    assert adaptive_regret_scan_bernoulli(f, ys) == pytest.approx(best, abs=1e-10)
