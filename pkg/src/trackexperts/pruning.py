"""Reduced transition diagram.

A segment starting at ``s = o * 2**u`` (``o`` odd) may live for at most
``g * 2**u`` rounds; after that the chain is forced to switch.  This keeps the
number of live segments at any time ``t`` at ``O(g log t)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import ConfigError, DomainError
from .paths import SwitchLaw, TransitionPath, path_log_weight


@dataclass(frozen=True)
class PruneSchedule:
    """Lifetime multiplier ``g``; ``g=None`` means no pruning."""

    g: Optional[int] = None

    def __post_init__(self):
        if self.g is not None:
            if isinstance(self.g, bool) or int(self.g) != self.g or self.g < 1:
                raise ConfigError(f"g must be an integer >= 1 or unbounded, got {self.g!r}")
            object.__setattr__(self, "g", int(self.g))

    @property
    def unbounded(self) -> bool:
        return self.g is None

    @property
    def label(self) -> str:
        return "unbounded" if self.g is None else str(self.g)

    def span_end(self, s: int) -> float:
        """First time at which a segment started at ``s`` is dead."""
        if self.g is None:
            return math.inf
        return s + self.g * (s & -s)

    @classmethod
    def parse(cls, spec, n: Optional[int] = None) -> "PruneSchedule":
        """Accept an int, ``"unbounded"``, or ``"gamma:<value>"`` (needs ``n``)."""
        if isinstance(spec, PruneSchedule):
            return spec
        if spec is None:
            return UNBOUNDED
        if isinstance(spec, str):
            text = spec.strip().lower()
            if text in ("unbounded", "none", "inf"):
                return UNBOUNDED
            if text.startswith("gamma:"):
                if n is None:
                    raise ConfigError("gamma preset needs the horizon n")
                return cls(gamma_preset_g(float(text.split(":", 1)[1]), n))
            try:
                return cls(int(text))
            except ValueError:
                raise ConfigError(f"cannot parse g spec {spec!r}") from None
        return cls(spec)


UNBOUNDED = PruneSchedule(None)


def gamma_preset_g(gamma: float, n: int) -> int:
    """Nearest odd integer to ``2 n**gamma - 1``, floored at 1."""
    if not 0 < gamma <= 1:
        raise ConfigError(f"gamma must lie in (0, 1], got {gamma}")
    x = 2.0 * n ** gamma - 1.0
    g = 2 * int(math.floor((x - 1.0) / 2.0 + 0.5)) + 1
    return max(g, 1)


def two_power_valuation(s: int) -> Tuple[int, int]:
    """Return ``(o, u)`` with ``s = o * 2**u`` and ``o`` odd."""
    if s < 1:
        raise DomainError(f"need s >= 1, got {s}")
    u = (s & -s).bit_length() - 1
    return s >> u, u


def alive(sched: PruneSchedule, t: int, s: int) -> bool:
    """``h_t(s)``: is a segment started at ``s`` still allowed at time ``t``?"""
    if s < 1 or s > t:
        raise DomainError(f"need 1 <= s <= t, got s={s}, t={t}")
    if sched.g is None:
        return True
    return t < s + sched.g * (s & -s)


def pruned_switch_prob(law: SwitchLaw, sched: PruneSchedule, t: int, tprime: int) -> float:
    p = law.switch_prob(t, tprime)
    return p if alive(sched, t, tprime) else 1.0


def pruned_switch_probs(law: SwitchLaw, sched: PruneSchedule, t: int,
                        starts: np.ndarray, ends: Optional[np.ndarray] = None) -> np.ndarray:
    """Vectorized pruned switch probabilities; ``ends`` are precomputed span ends."""
    p = law.switch_probs(t, starts)
    if sched.g is None:
        return p
    if ends is None:
        starts = np.asarray(starts, dtype=np.int64)
        ends = starts + sched.g * (starts & -starts)
    return np.where(t < ends, p, 1.0)


def pruned_path_log_weight(law: SwitchLaw, sched: PruneSchedule, T: TransitionPath,
                           t: Optional[int] = None) -> float:
    return path_log_weight(law, T, t, switch_fn=lambda s, tau: pruned_switch_prob(law, sched, s, tau))


def valid_alive_starts(sched: PruneSchedule, t: int) -> List[int]:
    """Starts of the segments that are valid and alive at ``t``, ascending.

    Built from the binary expansion of ``t``: with suffix sums ``s_k`` of its
    set bits, every live start is ``s_k - j * 2**u`` for a bit level
    ``u_{k-1} < u <= u_k`` and ``0 <= j < g`` (``j`` even iff ``u == u_k``).
    """
    if t < 1:
        raise DomainError(f"need t >= 1, got {t}")
    if sched.g is None:
        return list(range(1, t + 1))
    g = sched.g
    out = []
    prev_bit = -1
    suffix = t
    # walk set bits from least to most significant; ``suffix`` is s_k
    for k_bit in _set_bits(t):
        for u in range(prev_bit + 1, k_bit + 1):
            step = 1 << u
            j = 0 if u == k_bit else 1
            while j < g:
                s = suffix - j * step
                if s < 1:
                    break
                out.append(s)
                j += 2
        suffix -= 1 << k_bit
        prev_bit = k_bit
    out.sort()
    return out


def _set_bits(t: int) -> List[int]:
    bits = []
    u = 0
    while t:
        if t & 1:
            bits.append(u)
        t >>= 1
        u += 1
    return bits


def live_bound(g: int, t: int) -> int:
    """``ceil(g/2) * (floor(log2 t) + 1)``."""
    return -(-g // 2) * t.bit_length()


def _max_valuation_in(lo: int, hi: int) -> int:
    """The unique integer in ``[lo, hi]`` with the largest 2-power divisor."""
    u = ((lo - 1) ^ hi).bit_length() - 1
    return (hi >> u) << u


def cover_segment(sched: PruneSchedule, t: int, tprime: int) -> List[int]:
    """Switch points covering ``[t, tprime)`` with segments that stay alive.

    Each next point is the element of ``[t_i + 1, t_i + g * 2**u_i]`` with the
    largest 2-power divisor; stops once a point would reach ``tprime``.
    """
    if sched.g is None:
        raise ConfigError("cover_segment needs a finite g")
    if not 1 <= t < tprime:
        raise DomainError(f"need 1 <= t < t', got t={t}, t'={tprime}")
    g = sched.g
    points = [t]
    cur = t
    while True:
        nxt = _max_valuation_in(cur + 1, cur + g * (cur & -cur))
        if nxt >= tprime:
            return points
        points.append(nxt)
        cur = nxt


def cover_segment_bound(g: int, length: int) -> int:
    """``ceil(log2(length) / floor(log2(g+1))) + 1`` computed without float log."""
    step = (g + 1).bit_length() - 1
    # smallest k with 2**(k*step) >= length
    k = 0
    while (1 << (k * step)) < length:
        k += 1
    return k + 1


def cover_path(sched: PruneSchedule, T: TransitionPath) -> TransitionPath:
    """A path covering ``T`` whose pruned weight is positive."""
    points = []
    for a, b in T.segments():
        points.extend(cover_segment(sched, a, b))
    return TransitionPath(T.horizon, tuple(p for p in points if p != 1))
