"""Experiment harness.

``python -m trackexperts <mode> [--config cfg.json] [--set a.b=value ...] [--out dir] [--seed s]``

Modes: ``run`` (forecast a sequence), ``regret`` (compare against the best
switching comparator and the matching bound), ``verify`` (tracker vs brute
force on a small grid), ``bench`` (live-segment counts and wall time across
``g``), ``randomized`` (the sampling tracker on a loss matrix).

Exit codes: 0 ok, 1 config error, 2 verification failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import copy
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import bounds as B
from .errors import ConfigError, DomainError, ResourceError
from .generators import (PiecewiseBernoulliSpec, generate_piecewise_bernoulli,
                         generate_switching_losses, read_loss_matrix, read_outcomes)
from .learners import (KT_REGRET, EWAConfig, KTLearner, RegretBound, declared_regret_bound)
from .losses import LossFn
from .oracles import (adaptive_regret_scan, adaptive_regret_scan_bernoulli, best_meta_expert,
                      best_piecewise_bernoulli, brute_force_prediction)
from .paths import SwitchLaw
from .pruning import PruneSchedule
from .randomized import RandomizedTracker, run_randomized, write_action_log
from .tracker import TrackerConfig, eta_preset, run_sequence

MODES = ("run", "regret", "verify", "bench", "randomized")
EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3
VERIFY_TOL = 1e-9

DEFAULTS: Dict[str, Any] = {
    "mode": "regret",
    "n": None,
    "seed": 0,
    "seeds": 1,
    "law": {"family": "L1", "epsilon": 0.5},
    "g": 1,
    "eta": 1.0,
    "base": {"kind": "kt"},
    "loss": "log",
    "C": 3,
    "data": {"generator": "piecewise_bernoulli", "theta": [0.1, 0.9, 0.2, 0.8]},
    "delta": 0.05,
    "n_actions": 5,
    "bench": {"g": [1, 4, "unbounded"]},
    "verify": {
        "n": 12,
        "seeds": 5,
        "laws": [{"family": "HW", "alpha": 0.3}, "HS", "KT",
                 {"family": "L1", "epsilon": 0.5}, {"family": "L2", "epsilon": 0.5}],
        "g": [1, 2, 3, 4, "unbounded"],
        "bases": ["kt", "ewa3"],
        "eta": [0.5, 1.0],
    },
    "workers": 1,
    "out": "out",
}
DEFAULT_N = 1024


class VerificationFailure(Exception):
    pass


# ---------------------------------------------------------------- config

def _merge(base: dict, over: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if k not in base:
            raise ConfigError(f"unknown config key {path + k!r}")
        if isinstance(base[k], dict) and isinstance(v, dict) and k not in ("law", "base", "data", "eta"):
            out[k] = _merge(base[k], v, path + k + ".")
        else:
            out[k] = copy.deepcopy(v)
    return out


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_override(cfg: dict, item: str) -> None:
    """Apply one ``dotted.key=value`` override in place (value parsed as JSON when possible)."""
    if "=" not in item:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    key, raw = item.split("=", 1)
    parts = key.strip().split(".")
    if parts[0] not in DEFAULTS:
        raise ConfigError(f"unknown config key {parts[0]!r}")
    node = cfg
    for p in parts[:-1]:
        nxt = node.get(p)
        if not isinstance(nxt, dict):
            nxt = {"family": nxt} if isinstance(nxt, str) else {}
            node[p] = nxt
        node = nxt
    node[parts[-1]] = _parse_value(raw)


@dataclass
class ExperimentConfig:
    mode: str
    n: Optional[int]
    seed: int
    seeds: int
    law: Any
    g: Any
    eta: Any
    base: dict
    loss: str
    C: int
    data: dict
    delta: float
    n_actions: int
    bench: dict
    verify: dict
    workers: int
    out: str
    base_dir: str = "."

    @classmethod
    def from_dict(cls, d: dict, base_dir: str = ".") -> "ExperimentConfig":
        merged = _merge(DEFAULTS, d)
        cfg = cls(**merged, base_dir=base_dir)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return {k: copy.deepcopy(getattr(self, k)) for k in DEFAULTS}

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n is not None and (not isinstance(self.n, int) or self.n < 1):
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.seeds, int) or self.seeds < 1:
            raise ConfigError(f"seeds must be a positive integer, got {self.seeds!r}")
        if not isinstance(self.C, int) or self.C < 0:
            raise ConfigError(f"C must be a nonnegative integer, got {self.C!r}")
        if not 0 < self.delta <= 1:
            raise ConfigError(f"delta must lie in (0, 1], got {self.delta}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("workers must be a positive integer")
        self.law_obj  # constructs and validates
        LossFn(self.loss)
        for key in ("outcomes", "loss_matrix"):
            if key in self.data and not os.path.exists(self.resolve(self.data[key])):
                raise OSError(f"data.{key} file not found: {self.data[key]}")
        if isinstance(self.base.get("advice"), str) and not os.path.exists(self.resolve(self.base["advice"])):
            raise OSError(f"base.advice file not found: {self.base['advice']}")

    def resolve(self, p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(self.base_dir, p)

    @property
    def law_obj(self) -> SwitchLaw:
        return SwitchLaw.from_config(self.law)

    @property
    def loss_obj(self) -> LossFn:
        return LossFn(self.loss)

    def sched(self, n: int) -> PruneSchedule:
        return PruneSchedule.parse(self.g, n)


def load_config(path: Optional[str], overrides: Sequence[str] = (), mode: Optional[str] = None,
                seed: Optional[int] = None, out: Optional[str] = None) -> ExperimentConfig:
    raw: dict = {}
    base_dir = "."
    if path is not None:
        with open(path) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
        base_dir = os.path.dirname(os.path.abspath(path))
    full = _merge(DEFAULTS, raw)
    for item in overrides:
        apply_override(full, item)
    if mode is not None:
        full["mode"] = mode
    if seed is not None:
        full["seed"] = seed
    if out is not None:
        full["out"] = out
    return ExperimentConfig.from_dict(full, base_dir)


# ---------------------------------------------------------------- builders

def seed_streams(seed: int, k: int):
    """Per-repetition ``(data_seq, algo_seq)`` split from the experiment seed."""
    child = np.random.SeedSequence(seed).spawn(k + 1)[k]
    data_ss, algo_ss = child.spawn(2)
    return data_ss, algo_ss


def build_base(cfg: ExperimentConfig, loss: LossFn):
    """Return ``(factory, rho, ewa_config_or_None)``."""
    spec = dict(cfg.base)
    kind = spec.pop("kind", None)
    if kind == "kt":
        if loss.kind != "log":
            raise ConfigError("the KT base learner needs loss='log'")
        return KTLearner, KT_REGRET, None
    if kind == "ewa":
        advice = spec.pop("advice", None)
        if advice is None:
            raise ConfigError("base.advice is required for the EWA learner")
        if isinstance(advice, str):
            advice = read_loss_matrix(cfg.resolve(advice))
        try:
            ewa = EWAConfig(loss, np.asarray(advice, dtype=float), **spec)
        except TypeError as exc:
            raise ConfigError(f"bad base config: {exc}") from None
        return ewa.factory(), declared_regret_bound(ewa), ewa
    raise ConfigError(f"base.kind must be 'kt' or 'ewa', got {kind!r}")


def resolve_eta(cfg: ExperimentConfig, n: int, loss: LossFn, n_experts: Optional[int] = None) -> float:
    e = cfg.eta
    if isinstance(e, (int, float)) and not isinstance(e, bool):
        return float(e)
    if isinstance(e, str):
        e = {"preset": e}
    if not isinstance(e, dict) or "preset" not in e:
        raise ConfigError(f"eta must be a number or a preset, got {cfg.eta!r}")
    kw = {k: v for k, v in e.items() if k != "preset"}
    g = cfg.sched(n).g
    kw.setdefault("C", cfg.C)
    return eta_preset(e["preset"], n, n_experts=n_experts, g=g, loss=loss, **kw)


def load_outcomes(cfg: ExperimentConfig, data_seed):
    """Return ``(outcomes, true_path or None)``."""
    d = cfg.data
    if "outcomes" in d:
        y = read_outcomes(cfg.resolve(d["outcomes"]))
        if cfg.n is not None:
            if cfg.n > len(y):
                raise ConfigError(f"n={cfg.n} but {d['outcomes']} has only {len(y)} outcomes")
            y = y[:cfg.n]
        return y, None
    gen = d.get("generator")
    if gen != "piecewise_bernoulli":
        raise ConfigError(f"outcome data needs data.outcomes or generator 'piecewise_bernoulli', got {gen!r}")
    n = cfg.n or DEFAULT_N
    spec = PiecewiseBernoulliSpec.from_config(d, n, data_seed)
    return generate_piecewise_bernoulli(spec)


def load_losses(cfg: ExperimentConfig, data_seed):
    """Loss matrix ``(n, N)`` for the randomized mode."""
    d = cfg.data
    if "loss_matrix" in d:
        L = read_loss_matrix(cfg.resolve(d["loss_matrix"]))
        if cfg.n is not None:
            L = L[:cfg.n]
        return L, None
    if d == DEFAULTS["data"]:
        d = {"generator": "switching_losses"}
    gen = d.get("generator")
    if gen != "switching_losses":
        raise ConfigError("randomized mode needs data.loss_matrix or generator 'switching_losses'")
    kw = {k: v for k, v in d.items() if k != "generator"}
    kw.setdefault("C", cfg.C)
    L, path, _ = generate_switching_losses(cfg.n or DEFAULT_N, cfg.n_actions, seed=data_seed, **kw)
    return L, path


def bound_report(cfg: ExperimentConfig, law: SwitchLaw, n: int, eta: float, rho: RegretBound,
                 loss: LossFn, kt_base: bool, delta: Optional[float] = None):
    """Bounds certified by the configured law, or ``None`` if the law has none."""
    g = cfg.sched(n).g
    ec = loss.exp_concavity_eta
    use_ec = ec is not None and eta <= ec and rho.kind != "ewa_convex"
    etas = eta if loss.bounded else None
    if law.family == "L1":
        return B.l1_report(cfg.C, n, g, law.epsilon, rho, eta=eta if use_ec else None,
                           etas=etas, delta=delta)
    if law.family == "KT":
        return B.kt_report(cfg.C, n, g, rho, eta=eta if use_ec else None, etas=etas,
                           log_loss_kt=kt_base and loss.kind == "log")
    return None


def headline_bound(rep) -> Optional[float]:
    if rep is None:
        return None
    for key in ("tracking_kt_logloss", "tracking_expconcave", "tracking_convex"):
        if key in rep.values:
            return rep.values[key]
    return None


def expert_loss_matrix(ewa: EWAConfig, loss: LossFn, outcomes) -> np.ndarray:
    """``(N, n)`` per-round expert losses."""
    return np.stack([loss.batch(ewa.advice_at(t), y) for t, y in enumerate(outcomes, start=1)], axis=1)


# ---------------------------------------------------------------- output helpers

def write_summary(path: str, items: Dict[str, Any]) -> None:
    with open(path, "w") as fh:
        for k, v in items.items():
            fh.write(f"{k}: {v}\n")


def write_rows(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in r])


def _fmt(x):
    return "n/a" if x is None else x


# ---------------------------------------------------------------- modes

def mode_run(cfg: ExperimentConfig, regret: bool = False) -> int:
    law, loss = cfg.law_obj, cfg.loss_obj
    factory, rho, ewa = build_base(cfg, loss)
    out = cfg.out
    rows = []
    rep_bounds = None
    for k in range(cfg.seeds):
        data_ss, _ = seed_streams(cfg.seed, k)
        y, true_path = load_outcomes(cfg, data_ss)
        n = len(y)
        if n == 0:
            raise DomainError("outcome sequence is empty")
        eta = resolve_eta(cfg, n, loss, ewa.n_experts if ewa else None)
        tc = TrackerConfig(law, factory, loss, eta, cfg.sched(n), horizon_hint=n)
        report = run_sequence(tc, y)
        name = "report.csv" if cfg.seeds == 1 else f"report_seed{k}.csv"
        report.to_csv(os.path.join(out, name))
        bounds = bound_report(cfg, law, n, eta, rho, loss, ewa is None)
        if k == 0:
            rep_bounds = bounds
        row = {"seed": k, "n": n, "eta": eta, "cum_loss": report.total_loss,
               "max_live": max(report.live_segments), "update_count": report.update_count}
        if regret:
            if ewa is None:
                comp = best_piecewise_bernoulli(y, cfg.C)
                adaptive = adaptive_regret_scan_bernoulli(report.losses, y)
            else:
                L = expert_loss_matrix(ewa, loss, y)
                comp = best_meta_expert(L, cfg.C)
                adaptive = adaptive_regret_scan(report.losses, L)
            bound = headline_bound(bounds)
            reg = report.total_loss - comp.total_loss
            row.update(comparator_loss=comp.total_loss, comparator_path=str(comp.path),
                       true_path=str(true_path) if true_path else "",
                       regret=reg, bound=bound,
                       within_bound=None if bound is None else bool(reg <= bound),
                       adaptive_regret=adaptive)
        rows.append(row)
    if rep_bounds is not None:
        with open(os.path.join(out, "bounds.json"), "w") as fh:
            fh.write(rep_bounds.to_json())
    header = list(rows[0])
    write_rows(os.path.join(out, "regret.csv" if regret else "runs.csv"), header,
               ([r[h] for h in header] for r in rows))
    summary = {"mode": cfg.mode, "law": law.label, "g": cfg.sched(rows[0]["n"]).label,
               "loss": loss.kind, "base": cfg.base.get("kind"), "seeds": cfg.seeds,
               "n": rows[0]["n"], "eta": rows[0]["eta"],
               "mean_cum_loss": float(np.mean([r["cum_loss"] for r in rows])),
               "max_live_segments": max(r["max_live"] for r in rows)}
    if regret:
        summary.update(
            C=cfg.C,
            mean_comparator_loss=float(np.mean([r["comparator_loss"] for r in rows])),
            max_regret=max(r["regret"] for r in rows),
            bound=_fmt(rows[0]["bound"]),
            seeds_within_bound=_fmt(None if rows[0]["bound"] is None
                                    else sum(bool(r["within_bound"]) for r in rows)),
            max_adaptive_regret=max(r["adaptive_regret"] for r in rows))
    write_summary(os.path.join(out, "summary.txt"), summary)
    return EXIT_OK


def _ewa3_factory(loss: LossFn):
    return EWAConfig(loss, np.array([0.2, 0.5, 0.8]), eta=1.0).factory()


def verify_cell(cell) -> tuple:
    """One grid cell; returns the cell plus the worst per-round deviation."""
    law_cfg, g, base, eta, rep, n, seed = cell
    law = SwitchLaw.from_config(law_cfg)
    sched = PruneSchedule.parse(g, n)
    loss = LossFn("log")
    factory = KTLearner if base == "kt" else _ewa3_factory(loss)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))
    y = rng.integers(0, 2, n).tolist()
    report = run_sequence(TrackerConfig(law, factory, loss, eta, sched), y)
    worst = 0.0
    for t in range(1, n + 1):
        b = brute_force_prediction(law, sched, eta, factory, loss, y, t)
        worst = max(worst, abs(b - report.predictions[t - 1]))
    return law.label, sched.label, base, eta, rep, worst


def verify_grid(vcfg: dict, seed: int = 0) -> List[tuple]:
    n = int(vcfg["n"])
    cells = []
    for law_cfg in vcfg["laws"]:
        for g in vcfg["g"]:
            for base in vcfg["bases"]:
                if base not in ("kt", "ewa3"):
                    raise ConfigError(f"verify bases are 'kt' and 'ewa3', got {base!r}")
                for eta in vcfg["eta"]:
                    for rep in range(int(vcfg["seeds"])):
                        cells.append((law_cfg, g, base, float(eta), rep, n, seed))
    return cells


def mode_verify(cfg: ExperimentConfig) -> int:
    cells = verify_grid(cfg.verify, cfg.seed)
    for law_cfg in cfg.verify["laws"]:
        SwitchLaw.from_config(law_cfg)
    t0 = time.perf_counter()
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(verify_cell, cells, chunksize=8))
    else:
        results = [verify_cell(c) for c in cells]
    wall = time.perf_counter() - t0
    results.sort(key=lambda r: tuple(str(x) for x in r[:5]))
    write_rows(os.path.join(cfg.out, "verify.csv"),
               ["law", "g", "base", "eta", "rep", "max_abs_diff"], results)
    bad = [r for r in results if not r[5] <= VERIFY_TOL]
    write_summary(os.path.join(cfg.out, "summary.txt"), {
        "mode": "verify", "cells": len(results), "n": cfg.verify["n"], "tolerance": VERIFY_TOL,
        "max_abs_diff": max(r[5] for r in results), "violations": len(bad),
        "wall_time_s": round(wall, 3)})
    if bad:
        raise VerificationFailure(f"{len(bad)} of {len(results)} cells exceed {VERIFY_TOL}")
    return EXIT_OK


def mode_bench(cfg: ExperimentConfig) -> int:
    law, loss = cfg.law_obj, cfg.loss_obj
    factory, _, ewa = build_base(cfg, loss)
    data_ss, _ = seed_streams(cfg.seed, 0)
    y, _ = load_outcomes(cfg, data_ss)
    n = len(y)
    eta = resolve_eta(cfg, n, loss, ewa.n_experts if ewa else None)
    rows, traces = [], {}
    for g in cfg.bench["g"]:
        sched = PruneSchedule.parse(g, n)
        t0 = time.perf_counter()
        report = run_sequence(TrackerConfig(law, factory, loss, eta, sched), y)
        wall = time.perf_counter() - t0
        traces[sched.label] = report.live_segments
        rows.append((sched.label, n, max(report.live_segments), int(sum(report.live_segments)),
                     report.update_count, round(wall, 4)))
    write_rows(os.path.join(cfg.out, "bench.csv"),
               ["g", "n", "max_live", "sum_live", "update_count", "wall_time_s"], rows)
    labels = list(traces)
    write_rows(os.path.join(cfg.out, "live_trace.csv"), ["t"] + [f"live_{lab}" for lab in labels],
               ([t] + [traces[lab][t - 1] for lab in labels] for t in range(1, n + 1)))
    summary = {"mode": "bench", "law": law.label, "n": n}
    for r in rows:
        summary[f"g={r[0]}"] = f"max_live={r[2]} sum_live={r[3]} updates={r[4]} wall={r[5]}s"
    unb = [r for r in rows if r[0] == "unbounded"]
    if unb:
        for r in rows:
            if r[0] != "unbounded":
                summary[f"sum_live_ratio g={r[0]}/unbounded"] = r[3] / unb[0][3]
    write_summary(os.path.join(cfg.out, "summary.txt"), summary)
    return EXIT_OK


def mode_randomized(cfg: ExperimentConfig) -> int:
    law = cfg.law_obj
    out = cfg.out
    rows = []
    bounds = None
    for k in range(cfg.seeds):
        data_ss, algo_ss = seed_streams(cfg.seed, k)
        L, true_path = load_losses(cfg, data_ss)
        n, N = L.shape
        if N < 2:
            raise ConfigError("randomized mode needs at least 2 actions")
        eta = resolve_eta(cfg, n, LossFn("linear_bounded"), N) if not isinstance(cfg.eta, (int, float)) \
            else float(cfg.eta)
        algo_seed = int(algo_ss.generate_state(1, np.uint64)[0])
        rt = RandomizedTracker(law, N, eta, seed=algo_seed, sched=cfg.sched(n))
        records = run_randomized(rt, L)
        name = "actions.csv" if cfg.seeds == 1 else f"actions_seed{k}.csv"
        write_action_log(records, os.path.join(out, name))
        comp = best_meta_expert(L.T, cfg.C)
        rho = RegretBound("ewa_convex", n_experts=N)
        b = None
        if law.family == "L1":
            rep = B.l1_report(cfg.C, n, cfg.sched(n).g, law.epsilon, rho, etas=eta, delta=cfg.delta)
            b = rep["randomized"]
            if bounds is None:
                bounds = rep
        reg = rt.realized_loss - comp.total_loss
        rows.append((k, n, N, eta, rt.realized_loss, rt.expected_cum_loss, comp.total_loss,
                     str(comp.path), reg, b, None if b is None else bool(reg <= b)))
    if bounds is not None:
        with open(os.path.join(out, "bounds.json"), "w") as fh:
            fh.write(bounds.to_json())
    write_rows(os.path.join(out, "randomized.csv"),
               ["seed", "n", "n_actions", "eta", "realized_loss", "expected_loss",
                "comparator_loss", "comparator_path", "regret", "bound", "within_bound"], rows)
    held = None if rows[0][9] is None else sum(bool(r[10]) for r in rows)
    write_summary(os.path.join(out, "summary.txt"), {
        "mode": "randomized", "law": law.label, "g": cfg.sched(rows[0][1]).label,
        "seeds": cfg.seeds, "n": rows[0][1], "n_actions": rows[0][2], "eta": rows[0][3],
        "delta": cfg.delta, "bound": _fmt(rows[0][9]), "max_regret": max(r[8] for r in rows),
        "seeds_within_bound": _fmt(held),
        "fraction_within_bound": _fmt(None if held is None else held / cfg.seeds)})
    return EXIT_OK


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run the configured mode and write its artifacts under ``cfg.out``."""
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, "config.json"), "w") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
    if cfg.mode == "run":
        return mode_run(cfg)
    if cfg.mode == "regret":
        return mode_run(cfg, regret=True)
    if cfg.mode == "verify":
        return mode_verify(cfg)
    if cfg.mode == "bench":
        return mode_bench(cfg)
    return mode_randomized(cfg)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trackexperts", description="Tracking forecaster experiments.")
    ap.add_argument("mode", choices=MODES)
    ap.add_argument("--config", help="experiment config (JSON)")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override a config field by dotted path; repeatable")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--seed", type=int, help="experiment seed (unsigned 64-bit)")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.set, args.mode, args.seed, args.out)
        return run_experiment(cfg)
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ConfigError, DomainError, ResourceError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
