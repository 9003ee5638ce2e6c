"""Numeric evaluators for the tracking and adaptive regret bounds.

Bounds derived for the L1 switch law and those derived for the KT switch law
are not interchangeable; :class:`BoundReport` records which law a set of
values certifies and :meth:`BoundReport.require_law` refuses a mismatch.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Union

from scipy import integrate

from .errors import ConfigError, DomainError
from .paths import SwitchLaw

Rho = Callable[[float], float]


def log_step(g: Optional[int], n: Optional[int] = None) -> int:
    """``floor(log2(g + 1))``; an unbounded schedule behaves like ``g = n``."""
    if g is None:
        if n is None:
            raise ConfigError("unbounded g needs the horizon n")
        g = n
    if g < 1:
        raise ConfigError(f"g must be >= 1, got {g}")
    return (g + 1).bit_length() - 1


def bound_r_n(C: float, n: int, epsilon: float) -> float:
    return (C + epsilon) * math.log(n) + math.log1p(epsilon) - C * math.log(epsilon)


def bound_rprime_n(C: float, n: int, epsilon: float) -> float:
    return (C + 1) * (math.log(n) - math.log(epsilon))


def bound_L_Cn(C: int, n: int, g: Optional[int]) -> float:
    """Covering factor: max segments of the covering path per original segment."""
    step = log_step(g, n)
    if C == 0:
        k = 0
        while (1 << (k * step)) < n:
            k += 1
        return float(k + 1)
    return math.log2(n / (C + 1)) / step + 2.0


def bound_rbar_n(C: int, n: int, g: Optional[int]) -> float:
    """Bound on ``-ln w_hat^KT`` of the covering path.

    Grouping: ``((C+1) ln 2 / 4) * [lg^2(x)/G + (4 + 4/G) lg(x) + G + 8]`` with
    ``x = n/(C+1)``, ``G = floor(log2(g+1))``.
    """
    G = log_step(g, n)
    x = math.log2(n / (C + 1))
    return (C + 1) * math.log(2.0) / 4.0 * (x * x / G + (4.0 + 4.0 / G) * x + G + 8.0)


def bound_S(C: int, n: int, g: Optional[int], rho: Rho) -> float:
    """``(C+1) * int_0^{lg(x)/G} rho(x 2^{-cG}) dc + 2 (C+1) rho(x)``, ``x = n/(C+1)``."""
    G = log_step(g, n)
    x = n / (C + 1)
    upper = math.log2(x) / G
    if upper > 0:
        val, _ = integrate.quad(lambda c: rho(x * 2.0 ** (-c * G)), 0.0, upper,
                                epsabs=0.0, epsrel=1e-10, limit=200)
    else:
        val = 0.0
    return (C + 1) * val + 2 * (C + 1) * rho(x)


def _cover_count(C: int, n: int, g: Optional[int]) -> float:
    return bound_L_Cn(C, n, g) * (C + 1)


def bound_tracking_expconcave(C: int, n: int, g: Optional[int], eta: float, epsilon: float,
                              rho: Rho) -> float:
    """Tracking regret bound, exp-concave loss, constant eta, L1 switch law."""
    K = _cover_count(C, n, g)
    return K * rho(n / K) + bound_r_n(K - 1, n, epsilon) / eta


def _eta_sum_and_last(etas: Union[float, Sequence[float]], n: int):
    if isinstance(etas, (int, float)):
        return n * float(etas), float(etas)
    etas = list(etas)
    if len(etas) != n:
        raise DomainError(f"need {n} learning rates, got {len(etas)}")
    if any(b > a for a, b in zip(etas, etas[1:])):
        raise DomainError("learning rates must be nonincreasing")
    return float(sum(etas)), float(etas[-1])


def bound_tracking_convex(C: int, n: int, g: Optional[int], etas, epsilon: float, rho: Rho) -> float:
    """Tracking regret bound, convex loss in [0, 1], nonincreasing etas, L1 switch law."""
    K = _cover_count(C, n, g)
    total, last = _eta_sum_and_last(etas, n)
    return K * rho(n / K) + total / 8.0 + bound_r_n(K - 1, n, epsilon) / last


def _check_adaptive(n: int, epsilon: float) -> None:
    if n < 5 or epsilon > 0.5:
        raise DomainError("adaptive regret bounds need n >= 5 and epsilon <= 1/2")


def bound_adaptive_expconcave(n: int, g: Optional[int], eta: float, epsilon: float, rho: Rho) -> float:
    _check_adaptive(n, epsilon)
    L0 = bound_L_Cn(0, n, g)
    return L0 * rho(n / L0) + bound_rprime_n(L0 - 1, n, epsilon) / eta


def bound_adaptive_convex(n: int, g: Optional[int], etas, epsilon: float, rho: Rho) -> float:
    _check_adaptive(n, epsilon)
    L0 = bound_L_Cn(0, n, g)
    total, last = _eta_sum_and_last(etas, n)
    return L0 * rho(n / L0) + total / 8.0 + bound_rprime_n(L0 - 1, n, epsilon) / last


def bound_kt_expconcave(C: int, n: int, g: Optional[int], eta: float, rho: Rho) -> float:
    """Tracking regret bound with the KT switch law, exp-concave loss."""
    return bound_S(C, n, g, rho) + bound_rbar_n(C, n, g) / eta


def bound_kt_convex(C: int, n: int, g: Optional[int], etas, rho: Rho) -> float:
    total, last = _eta_sum_and_last(etas, n)
    return bound_S(C, n, g, rho) + total / 8.0 + bound_rbar_n(C, n, g) / last


def bound_kt_logloss(C: int, n: int, g: Optional[int]) -> float:
    """KT learner under log loss with the KT switch law: ``2 * rbar_n(C)``."""
    return 2.0 * bound_rbar_n(C, n, g)


def kt_path_weight_bound(segment_lengths: Sequence[int]) -> float:
    """The textbook ``½ Σ ln s_c + (C+1) ln 2`` estimate of ``-ln w^KT(T)``.

    With ``p(t|t') = ½/(t-t'+1)`` restarted at every switch this only holds for
    single-segment paths: a closed segment of length s costs about ``1.5 ln s``,
    not ``0.5 ln s``.  ``kt_path_weight_bound_strict`` is valid for every path.
    """
    if any(s < 1 for s in segment_lengths):
        raise DomainError("segment lengths must be >= 1")
    return 0.5 * sum(math.log(s) for s in segment_lengths) + len(segment_lengths) * math.log(2.0)


def kt_path_weight_bound_strict(segment_lengths: Sequence[int]) -> float:
    """Pathwise upper bound on ``-ln w^KT(T)``.

    Staying for s-1 rounds has probability Γ(s+½)/(Γ(3/2)Γ(s+1)) ≥ (s+1)^(-½)
    (Gautschi), and each switch closing a segment of length s costs ln(2(s+1)).
    """
    if any(s < 1 for s in segment_lengths):
        raise DomainError("segment lengths must be >= 1")
    out = 0.5 * sum(math.log1p(s) for s in segment_lengths)
    return out + sum(math.log(2.0 * (s + 1)) for s in segment_lengths[:-1])


def hoeffding_radius(n: int, delta: float) -> float:
    """``sqrt((n/2) ln(1/delta))``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 < delta <= 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    return math.sqrt(n / 2.0 * math.log(1.0 / delta))


def bound_randomized(C: int, n: int, g: Optional[int], etas, epsilon: float, rho: Rho,
                     delta: float) -> float:
    """High-probability regret bound for the randomized tracker (L1 switch law)."""
    return bound_tracking_convex(C, n, g, etas, epsilon, rho) + hoeffding_radius(n, delta)


@dataclass
class BoundReport:
    """Named bound values plus their inputs, tagged with the certifying law family."""

    law_family: str
    inputs: Dict[str, object] = field(default_factory=dict)
    values: Dict[str, float] = field(default_factory=dict)

    def require_law(self, law: SwitchLaw) -> None:
        if law.family != self.law_family:
            raise ConfigError(f"bounds certify the {self.law_family} law, "
                              f"but the run used {law.family}")

    def __getitem__(self, key: str) -> float:
        return self.values[key]

    def to_json(self) -> str:
        return json.dumps({"law_family": self.law_family, "inputs": self.inputs,
                           "values": self.values}, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BoundReport":
        d = json.loads(text)
        return cls(d["law_family"], d["inputs"], d["values"])


def l1_report(C: int, n: int, g: Optional[int], epsilon: float, rho: Rho,
              eta: Optional[float] = None, etas=None, delta: Optional[float] = None) -> BoundReport:
    """Bounds certified by the (pruned) L1 law.  ``eta`` -> exp-concave, ``etas`` -> convex."""
    K = _cover_count(C, n, g)
    vals = {
        "r_n": bound_r_n(C, n, epsilon),
        "rprime_n": bound_rprime_n(C, n, epsilon),
        "L_Cn": bound_L_Cn(C, n, g),
        "cover_r_n": bound_r_n(K - 1, n, epsilon),
    }
    adaptive_ok = n >= 5 and epsilon <= 0.5
    if eta is not None:
        vals["tracking_expconcave"] = bound_tracking_expconcave(C, n, g, eta, epsilon, rho)
        if adaptive_ok:
            vals["adaptive_expconcave"] = bound_adaptive_expconcave(n, g, eta, epsilon, rho)
    if etas is not None:
        vals["tracking_convex"] = bound_tracking_convex(C, n, g, etas, epsilon, rho)
        if adaptive_ok:
            vals["adaptive_convex"] = bound_adaptive_convex(n, g, etas, epsilon, rho)
        if delta is not None:
            vals["randomized"] = bound_randomized(C, n, g, etas, epsilon, rho, delta)
            vals["hoeffding"] = hoeffding_radius(n, delta)
    inputs = {"C": C, "n": n, "g": g, "epsilon": epsilon, "eta": eta,
              "etas": etas if isinstance(etas, (int, float)) or etas is None else "sequence",
              "delta": delta, "rho": getattr(rho, "to_dict", lambda: repr(rho))()}
    return BoundReport("L1", inputs, vals)


def kt_report(C: int, n: int, g: Optional[int], rho: Rho, eta: Optional[float] = None,
              etas=None, log_loss_kt: bool = False) -> BoundReport:
    """Bounds certified by the (pruned) KT law."""
    vals = {"rbar_n": bound_rbar_n(C, n, g), "S": bound_S(C, n, g, rho)}
    if eta is not None:
        vals["tracking_expconcave"] = bound_kt_expconcave(C, n, g, eta, rho)
    if etas is not None:
        vals["tracking_convex"] = bound_kt_convex(C, n, g, etas, rho)
    if log_loss_kt:
        vals["tracking_kt_logloss"] = bound_kt_logloss(C, n, g)
    inputs = {"C": C, "n": n, "g": g, "eta": eta,
              "etas": etas if isinstance(etas, (int, float)) or etas is None else "sequence",
              "rho": getattr(rho, "to_dict", lambda: repr(rho))()}
    return BoundReport("KT", inputs, vals)
