import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trackexperts.errors import ConfigError, DomainError
from trackexperts.generators import (PiecewiseBernoulliSpec, generate_piecewise_bernoulli,
                                     generate_switching_losses, read_loss_matrix, read_outcomes,
                                     write_loss_matrix, write_outcomes)
from trackexperts.paths import TransitionPath


@pytest.mark.parametrize("theta", [[0.0, 0.5], [0.5, 1.0], [1.2], [-0.1]])
def test_invalid_theta(theta):
    with pytest.raises(DomainError):
        PiecewiseBernoulliSpec(10, theta)


def test_spec_validation():
    with pytest.raises(ConfigError):
        PiecewiseBernoulliSpec(0, [0.5])
    with pytest.raises(ConfigError):
        generate_piecewise_bernoulli(PiecewiseBernoulliSpec(10, [0.2, 0.8], switch_times=[3, 6]))
    with pytest.raises(ConfigError):
        generate_piecewise_bernoulli(PiecewiseBernoulliSpec(3, [0.2] * 5))
    with pytest.raises(ConfigError):
        PiecewiseBernoulliSpec.from_config({"theta": [0.5], "bogus": 1}, 10, 0)
    with pytest.raises(ConfigError):
        PiecewiseBernoulliSpec.from_config({"C": 2}, 10, 0)


def test_fixed_seed_is_reproducible():
    spec = PiecewiseBernoulliSpec(500, [0.1, 0.9, 0.2, 0.8], seed=42)
    a = generate_piecewise_bernoulli(spec)
    b = generate_piecewise_bernoulli(spec)
    assert a == b
    c = generate_piecewise_bernoulli(spec, seed=43)
    assert c != a
    ss = np.random.SeedSequence(42)
    assert generate_piecewise_bernoulli(spec, seed=ss) == a


def test_given_switch_times_are_used():
    ys, T = generate_piecewise_bernoulli(PiecewiseBernoulliSpec(20, [0.5, 0.5], switch_times=[11]))
    assert T == TransitionPath(20, (11,)) and len(ys) == 20 and set(ys) <= {0, 1}


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 200), st.integers(0, 2 ** 32 - 1))
def test_random_switch_times_are_valid(n, seed):
    C = min(3, n - 1)
    ys, T = generate_piecewise_bernoulli(PiecewiseBernoulliSpec(n, [0.3] * (C + 1), seed=seed))
    assert T.n_switches == C and T.horizon == n and len(ys) == n


def test_segment_means():
    n = 10_000
    theta = [0.1, 0.9, 0.2, 0.8]
    ys, T = generate_piecewise_bernoulli(PiecewiseBernoulliSpec(n, theta, switch_times=[2501, 5001, 7501], seed=1))
    y = np.asarray(ys)
    for (a, b), th in zip(T.segments(), theta):
        m = b - a
        assert abs(y[a - 1:b - 1].mean() - th) <= 3 * math.sqrt(th * (1 - th) / m)


def test_switching_losses():
    L, T, best = generate_switching_losses(4000, 5, C=3, seed=7)
    assert L.shape == (4000, 5) and set(np.unique(L)) <= {0.0, 1.0}
    assert T.n_switches == 3 and len(best) == 4
    assert all(a != b for a, b in zip(best, best[1:]))
    for (a, b), i in zip(T.segments(), best):
        seg = L[a - 1:b - 1]
        if b - a >= 200:
            assert int(np.argmin(seg.mean(axis=0))) == i
    L2, T2, best2 = generate_switching_losses(4000, 5, C=3, seed=7)
    assert np.array_equal(L, L2) and T == T2 and best == best2
    with pytest.raises(DomainError):
        generate_switching_losses(10, 2, good=1.5)
    with pytest.raises(ConfigError):
        generate_switching_losses(10, 0)


def test_file_roundtrip(tmp_path):
    ys, _ = generate_piecewise_bernoulli(PiecewiseBernoulliSpec(300, [0.3, 0.7], seed=3))
    write_outcomes(ys, tmp_path / "y.txt")
    assert read_outcomes(tmp_path / "y.txt") == ys
    vals = [0.1, 1 / 3, 0.0]
    write_outcomes(vals, tmp_path / "v.txt")
    assert read_outcomes(tmp_path / "v.txt") == vals
    L, _, _ = generate_switching_losses(50, 3, seed=2)
    L = L * np.random.default_rng(0).uniform(size=L.shape)
    write_loss_matrix(L, tmp_path / "L.csv")
    assert np.array_equal(read_loss_matrix(tmp_path / "L.csv"), L)
    (tmp_path / "h.csv").write_text("a,b\n0.5,1\n0,0.25\n")
    assert read_loss_matrix(tmp_path / "h.csv").tolist() == [[0.5, 1.0], [0.0, 0.25]]
    (tmp_path / "e.csv").write_text("a,b\n")
    with pytest.raises(DomainError):
        read_loss_matrix(tmp_path / "e.csv")
