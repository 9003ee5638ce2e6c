import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ALL_LAWS
from trackexperts.errors import ConfigError, DomainError
from trackexperts.paths import SwitchLaw, TransitionPath, covers, enumerate_paths, last_switch, path_log_weight
from trackexperts.pruning import (UNBOUNDED, PruneSchedule, alive, cover_path, cover_segment,
                                  cover_segment_bound, gamma_preset_g, live_bound,
                                  pruned_path_log_weight, pruned_switch_prob, pruned_switch_probs,
                                  two_power_valuation, valid_alive_starts)


def h_scan(sched, t):
    return [s for s in range(1, t + 1) if alive(sched, t, s)]


def valuation(s):
    return (s & -s).bit_length() - 1


def window_scan_next(g, cur):
    """Literal scan of [cur+1, cur + g 2^u] for the max-valuation element; asserts uniqueness."""
    hi = cur + g * (cur & -cur)
    window = range(cur + 1, hi + 1)
    best = max(valuation(s) for s in window)
    winners = [s for s in window if valuation(s) == best]
    assert len(winners) == 1
    return winners[0]


def test_schedule_validation_and_parse():
    assert PruneSchedule(3).g == 3
    assert UNBOUNDED.unbounded and UNBOUNDED.label == "unbounded"
    for bad in (0, -1, 1.5, True):
        with pytest.raises(ConfigError):
            PruneSchedule(bad)
    assert PruneSchedule.parse(4) == PruneSchedule(4)
    assert PruneSchedule.parse("unbounded") is UNBOUNDED
    assert PruneSchedule.parse("7") == PruneSchedule(7)
    assert PruneSchedule.parse("gamma:0.5", 1024) == PruneSchedule(63)
    with pytest.raises(ConfigError):
        PruneSchedule.parse("gamma:0.5")
    with pytest.raises(ConfigError):
        PruneSchedule.parse("lots")


@pytest.mark.parametrize("gamma, n, g", [(0.5, 1024, 63), (0.5, 16, 7), (0.25, 16, 3),
                                         (0.1, 2, 1), (0.5, 10, 5), (1.0, 5, 9)])
def test_gamma_preset(gamma, n, g):
    assert gamma_preset_g(gamma, n) == g
    assert g % 2 == 1


@given(st.floats(0.05, 1.0), st.integers(2, 10 ** 6))
def test_gamma_preset_is_nearest_odd(gamma, n):
    g = gamma_preset_g(gamma, n)
    x = 2 * n ** gamma - 1
    assert g % 2 == 1 and g >= 1
    if x >= 1:
        assert abs(g - x) <= 1 + 1e-9


@pytest.mark.parametrize("s, ou", [(12, (3, 2)), (1, (1, 0)), (64, (1, 6))])
def test_two_power_valuation(s, ou):
    assert two_power_valuation(s) == ou


@given(st.integers(1, 2 ** 40))
def test_two_power_valuation_property(s):
    o, u = two_power_valuation(s)
    assert o % 2 == 1 and o * 2 ** u == s


def test_two_power_valuation_domain():
    with pytest.raises(DomainError):
        two_power_valuation(0)


def test_alive_examples():
    assert alive(PruneSchedule(1), 6, 4)
    assert not alive(PruneSchedule(1), 6, 5)
    assert alive(PruneSchedule(3), 10, 4)
    assert alive(UNBOUNDED, 100, 3)
    with pytest.raises(DomainError):
        alive(PruneSchedule(1), 3, 4)


def test_pruned_switch_prob_examples():
    kt = SwitchLaw.kt()
    assert pruned_switch_prob(kt, PruneSchedule(1), 6, 5) == 1.0
    assert pruned_switch_prob(kt, PruneSchedule(1), 6, 4) == pytest.approx(1 / 6, abs=1e-15)
    for law in ALL_LAWS:
        for t, tp in [(5, 2), (9, 8), (13, 1)]:
            assert pruned_switch_prob(law, UNBOUNDED, t, tp) == law.switch_prob(t, tp)


@pytest.mark.parametrize("g", [1, 2, 3, 5, None])
def test_pruned_switch_probs_vectorized(g):
    sched = PruneSchedule(g)
    law = SwitchLaw.l2(0.5)
    for t in range(2, 70):
        starts = np.arange(1, t)
        vec = pruned_switch_probs(law, sched, t, starts)
        assert np.allclose(vec, [pruned_switch_prob(law, sched, t, int(s)) for s in starts], rtol=1e-15, atol=0)


def test_valid_alive_starts_examples():
    assert valid_alive_starts(PruneSchedule(1), 6) == [4, 6]
    assert valid_alive_starts(PruneSchedule(1), 7) == [4, 6, 7]
    for g in range(1, 9):
        assert valid_alive_starts(PruneSchedule(g), 1) == [1]
    assert valid_alive_starts(UNBOUNDED, 5) == [1, 2, 3, 4, 5]
    with pytest.raises(DomainError):
        valid_alive_starts(PruneSchedule(1), 0)


@pytest.mark.parametrize("g", range(1, 9))
def test_valid_alive_starts_matches_h_scan(g):
    sched = PruneSchedule(g)
    for t in range(1, 1500):
        got = valid_alive_starts(sched, t)
        assert got == h_scan(sched, t)
        assert len(got) <= live_bound(g, t)
        if g == 1:
            assert len(got) == bin(t).count("1")


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_valid_alive_starts_are_reachable(g):
    """Every reported start is the current segment start of some positive-weight pruned path."""
    sched = PruneSchedule(g)
    law = SwitchLaw.kt()
    for t in range(1, 11):
        reach = {last_switch(T, t) for T in enumerate_paths(t)
                 if pruned_path_log_weight(law, sched, T) > -math.inf}
        assert sorted(reach) == valid_alive_starts(sched, t)


def test_live_bound():
    assert live_bound(1, 6) == 3
    assert live_bound(4, 2 ** 16 - 1) == 32
    assert live_bound(3, 1) == 2


# ---- covering construction


def test_cover_segment_examples():
    g1 = PruneSchedule(1)
    assert cover_segment(g1, 1, 9) == [1, 2, 4, 8]
    assert cover_segment_bound(1, 8) == 4
    assert cover_segment(g1, 4, 8) == [4]
    for g in (1, 2, 5):
        for t in (1, 6, 37):
            assert cover_segment(PruneSchedule(g), t, t + 1) == [t]
    with pytest.raises(DomainError):
        cover_segment(g1, 5, 5)
    with pytest.raises(ConfigError):
        cover_segment(UNBOUNDED, 1, 5)


@pytest.mark.parametrize("g", [1, 2, 3, 4, 7])
def test_cover_segment_matches_window_scan(g):
    sched = PruneSchedule(g)
    for t in range(1, 90):
        for tp in range(t + 1, 160):
            pts = [t]
            while True:
                nxt = window_scan_next(g, pts[-1])
                if nxt >= tp:
                    break
                pts.append(nxt)
            assert cover_segment(sched, t, tp) == pts


@pytest.mark.parametrize("g", [1, 3, 4, 7])
def test_cover_segment_properties_literal(g):
    sched = PruneSchedule(g)
    G = (g + 1).bit_length() - 1
    for t in range(1, 70):
        for tp in range(t + 1, 130):
            pts = cover_segment(sched, t, tp)
            assert len(pts) <= math.ceil(math.log2(tp - t) / G - 1e-12) + 1
            assert len(pts) <= cover_segment_bound(g, tp - t)
            for a, b in zip(pts[1:], pts[2:]):
                assert valuation(b) - valuation(a) >= G
            ends = pts[1:] + [tp]
            for a, b in zip(pts, ends):
                assert all(alive(sched, tau, a) for tau in range(a, b))


def test_cover_path_examples():
    g1 = PruneSchedule(1)
    That = cover_path(g1, TransitionPath(9))
    assert That == TransitionPath(9, (2, 4, 8))
    assert That.n_switches <= 4
    T = TransitionPath(6, (2, 3, 4, 5, 6))
    assert cover_path(g1, T) == T
    g3 = PruneSchedule(3)
    T = TransitionPath(8, (5,))
    That = cover_path(g3, T)
    assert That == TransitionPath(8, (4, 5, 8))
    assert covers(That, T)
    assert pruned_path_log_weight(SwitchLaw.kt(), g3, That) > -math.inf


@st.composite
def paths(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    times = draw(st.sets(st.integers(2, max(2, n)), max_size=n - 1)) if n > 1 else set()
    return TransitionPath(n, tuple(sorted(times)))


@settings(max_examples=200, deadline=None)
@given(paths(max_n=300), st.sampled_from([1, 2, 3, 4, 7]))
def test_cover_path_properties(T, g):
    sched = PruneSchedule(g)
    That = cover_path(sched, T)
    assert covers(That, T)
    assert pruned_path_log_weight(SwitchLaw.l1(0.5), sched, That) > -math.inf
    C, n = T.n_switches, T.horizon
    G = (g + 1).bit_length() - 1
    if C == 0:
        L = cover_segment_bound(g, n) if n > 1 else 1
    else:
        L = math.log2(n / (C + 1)) / G + 2
    assert That.n_switches <= (C + 1) * L - 1 + 1e-9


@settings(max_examples=300, deadline=None)
@given(paths(), st.sampled_from([1, 2, 3]), st.sampled_from(ALL_LAWS))
def test_pruned_weight_dichotomy(T, g, law):
    sched = PruneSchedule(g)
    for t in range(1, T.horizon + 1):
        lw_hat = pruned_path_log_weight(law, sched, T, t)
        lw = path_log_weight(law, T, t)
        assert lw_hat == -math.inf or lw_hat >= lw - 1e-12


@pytest.mark.parametrize("g", [1, 2, 4])
def test_pruned_weights_normalize(g):
    sched = PruneSchedule(g)
    for law in ALL_LAWS:
        for t in (1, 5, 11):
            tot = math.fsum(math.exp(pruned_path_log_weight(law, sched, T)) for T in enumerate_paths(t))
            assert abs(tot - 1.0) <= 1e-12
