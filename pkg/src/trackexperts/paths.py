"""Transition paths and the switch-probability laws that weight them.

A transition path splits ``[1, n]`` into contiguous segments; its weight under a
law is the probability of the corresponding realization of the segment-start
Markov chain (state = start of the current segment).  All weights live in the
natural-log domain.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy import special

from .errors import ConfigError, DomainError, ResourceError

FAMILIES = ("HW", "HS", "KT", "L1", "L2")
MAX_ENUM_HORIZON = 20


@dataclass(frozen=True)
class TransitionPath:
    """Switch times ``t_1 < ... < t_C`` inside ``[2, horizon]``."""

    horizon: int
    switch_times: tuple = ()

    def __post_init__(self):
        times = tuple(int(s) for s in self.switch_times)
        object.__setattr__(self, "switch_times", times)
        if self.horizon < 1:
            raise DomainError(f"horizon must be >= 1, got {self.horizon}")
        prev = 1
        for s in times:
            if s <= prev or s > self.horizon:
                raise DomainError(
                    f"switch times must be strictly increasing in [2, {self.horizon}], got {times}")
            prev = s

    @property
    def n_switches(self) -> int:
        return len(self.switch_times)

    def segments(self) -> List[tuple]:
        """Half-open segments ``[t_c, t_{c+1})`` covering ``[1, horizon]``."""
        bounds = (1,) + self.switch_times + (self.horizon + 1,)
        return list(zip(bounds[:-1], bounds[1:]))

    def segment_lengths(self) -> List[int]:
        return [b - a for a, b in self.segments()]

    def __str__(self):
        return "(" + ",".join(map(str, self.switch_times)) + f";{self.horizon})"


def _check_time(T: TransitionPath, t: int) -> None:
    if not 1 <= t <= T.horizon:
        raise DomainError(f"time {t} outside [1, {T.horizon}]")


def truncate(T: TransitionPath, t: int) -> TransitionPath:
    _check_time(T, t)
    k = bisect.bisect_right(T.switch_times, t)
    return TransitionPath(t, T.switch_times[:k])


def last_switch(T: TransitionPath, t: int) -> int:
    """Start of the segment containing ``t`` (1 if no switch occurred yet)."""
    _check_time(T, t)
    k = bisect.bisect_right(T.switch_times, t)
    return T.switch_times[k - 1] if k else 1


def switch_count(T: TransitionPath, t: int) -> int:
    _check_time(T, t)
    return bisect.bisect_right(T.switch_times, t)


def covers(T_hat: TransitionPath, T: TransitionPath) -> bool:
    if T_hat.horizon != T.horizon:
        raise DomainError(f"horizon mismatch: {T_hat.horizon} vs {T.horizon}")
    return set(T.switch_times) <= set(T_hat.switch_times)


def enumerate_paths(t: int, max_horizon: int = MAX_ENUM_HORIZON) -> List[TransitionPath]:
    """All ``2**(t-1)`` transition paths with horizon ``t``."""
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    if t > max_horizon:
        raise ResourceError(f"refusing to enumerate 2^{t - 1} paths (limit t <= {max_horizon})")
    candidates = range(2, t + 1)
    out = []
    for c in range(t):
        for combo in itertools.combinations(candidates, c):
            out.append(TransitionPath(t, combo))
    return out


def zeta_normalizer(epsilon: float, tol: float = 1e-12, *, strict: bool = True) -> float:
    """``Z_inf = sum_{j>=1} j**-(1+epsilon)``.

    Evaluated with the Hurwitz zeta routine, accurate to a few ulps, which
    meets any ``tol`` down to ~1e-14.  ``strict=False`` lifts the ``epsilon < 1``
    restriction (the series converges for every ``epsilon > 0``).
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if strict and not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
    if epsilon <= 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    return float(special.zeta(1.0 + epsilon, 1.0))


def zeta_tail(epsilon: float, k):
    """``Z_inf - Z_k = sum_{j>k} j**-(1+epsilon)`` for integer ``k >= 0`` (array-friendly)."""
    return special.zeta(1.0 + epsilon, np.asarray(k, dtype=float) + 1.0)


@dataclass(frozen=True)
class SwitchLaw:
    """A switch-probability family ``p(t | t')``.

    Construct through the classmethods: ``SwitchLaw.hw(alpha)``, ``hs()``,
    ``kt()``, ``l1(epsilon)``, ``l2(epsilon)``.
    """

    family: str
    alpha: Optional[float] = None
    epsilon: Optional[float] = None
    zeta_tolerance: float = 1e-12

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam not in FAMILIES:
            raise ConfigError(f"unknown switch law family {self.family!r}; expected one of {FAMILIES}")
        if fam == "HW":
            if self.alpha is None or not 0 < self.alpha < 1:
                raise ConfigError(f"HW law needs alpha in (0, 1), got {self.alpha}")
        if fam in ("L1", "L2"):
            if self.epsilon is None or not 0 < self.epsilon < 1:
                raise ConfigError(f"{fam} law needs epsilon in (0, 1), got {self.epsilon}")
            if self.zeta_tolerance <= 0:
                raise ConfigError("zeta_tolerance must be positive")
        if fam == "L2":
            # p(2|1) is the largest L2 switch probability; it leaves (0, 1) once
            # Z_inf - Z_2 drops below 1, which happens for epsilon above ~0.58.
            if self.switch_prob(2, 1) >= 1.0:
                raise ConfigError(
                    f"L2 law with epsilon={self.epsilon} gives p(2|1) >= 1; keep epsilon below about 0.58")

    @classmethod
    def hw(cls, alpha: float) -> "SwitchLaw":
        return cls("HW", alpha=alpha)

    @classmethod
    def hs(cls) -> "SwitchLaw":
        return cls("HS")

    @classmethod
    def kt(cls) -> "SwitchLaw":
        return cls("KT")

    @classmethod
    def l1(cls, epsilon: float, zeta_tolerance: float = 1e-12) -> "SwitchLaw":
        return cls("L1", epsilon=epsilon, zeta_tolerance=zeta_tolerance)

    @classmethod
    def l2(cls, epsilon: float, zeta_tolerance: float = 1e-12) -> "SwitchLaw":
        return cls("L2", epsilon=epsilon, zeta_tolerance=zeta_tolerance)

    @classmethod
    def from_config(cls, cfg) -> "SwitchLaw":
        if isinstance(cfg, str):
            cfg = {"family": cfg}
        cfg = dict(cfg)
        family = cfg.pop("family", None)
        if family is None:
            raise ConfigError("law config needs a 'family'")
        try:
            return cls(family, **cfg)
        except TypeError as exc:
            raise ConfigError(f"bad law config: {exc}") from None

    def to_config(self) -> dict:
        out = {"family": self.family}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.epsilon is not None:
            out["epsilon"] = self.epsilon
        return out

    @property
    def label(self) -> str:
        if self.family == "HW":
            return f"HW({self.alpha:g})"
        if self.family in ("L1", "L2"):
            return f"{self.family}({self.epsilon:g})"
        return self.family

    def switch_prob(self, t: int, tprime: int) -> float:
        if not 1 <= tprime < t:
            raise DomainError(f"need 1 <= t' < t, got t={t}, t'={tprime}")
        return float(self.switch_probs(t, np.array([tprime]))[0])

    def switch_probs(self, t: int, starts: np.ndarray) -> np.ndarray:
        """Vectorized ``p(t | s)`` over an array of segment starts ``s < t``."""
        starts = np.asarray(starts)
        fam = self.family
        if fam == "HW":
            return np.full(starts.shape, self.alpha, dtype=float)
        if fam == "HS":
            return np.full(starts.shape, 1.0 / t)
        if fam == "KT":
            return 0.5 / (t - starts + 1.0)
        s = 1.0 + self.epsilon
        if fam == "L1":
            p = (t - 1.0) ** -s / zeta_tail(self.epsilon, t - 2)
            return np.full(starts.shape, float(p))
        d = (t - starts).astype(float)
        return d ** -s / zeta_tail(self.epsilon, d + 1)


def switch_prob(law: SwitchLaw, t: int, tprime: int) -> float:
    return law.switch_prob(t, tprime)


SwitchFn = Callable[[int, int], float]


def _log_stay(p: float) -> float:
    return math.log1p(-p) if p < 1.0 else -math.inf


def path_log_weight(law: SwitchLaw, T: TransitionPath, t: Optional[int] = None,
                    switch_fn: Optional[SwitchFn] = None) -> float:
    """Natural log of ``w_t(T_t)``.

    ``switch_fn(s, tau)`` overrides the law's switch probability (used for
    pruned laws).  Returns ``-inf`` for zero-weight paths.
    """
    if t is None:
        t = T.horizon
    _check_time(T, t)
    p_fn = switch_fn if switch_fn is not None else law.switch_prob
    switches = set(T.switch_times)
    tau = 1
    total = 0.0
    for s in range(2, t + 1):
        p = p_fn(s, tau)
        if s in switches:
            if p <= 0.0:
                return -math.inf
            total += math.log(p)
            tau = s
        else:
            total += _log_stay(p)
            if total == -math.inf:
                return total
    return total


def paths_from_starts(horizon: int, starts: Sequence[int]) -> TransitionPath:
    """Path whose segments start at ``starts`` (the leading 1 is optional)."""
    return TransitionPath(horizon, tuple(s for s in sorted(set(starts)) if s != 1))
