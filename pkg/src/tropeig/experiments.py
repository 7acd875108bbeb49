"""Random-pencil experiment harness: per-eigenvalue backward errors under each scaling.

Trial ``t`` of a run seeded with ``seed`` draws its pencil from
``np.random.SeedSequence(seed, spawn_key=(t,))``, i.e. the ``t``-th child
of the run's seed sequence.  Any single trial can therefore be
regenerated on its own, and trials can run in any order.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .analysis import verify_splitting
from .errors import NotApplicableError, SolverFailure, TropeigError
from .matpoly import MatrixPolynomial, random_conditioned, random_pencil, seed_child
from .scaled_solver import solve, sort_order

__all__ = [
    "CSV_HEADER",
    "PRESETS",
    "ExperimentConfig",
    "ExperimentRow",
    "ExperimentResult",
    "trial_seed",
    "trial_pencil",
    "run_experiment",
    "summarize",
    "write_csv",
    "read_csv",
    "random_quadratic",
    "run_verify_bound",
]

STRATEGIES = ("none", "fanlin", "tropical")
# CSV column tag per strategy
_TAG = {"none": "none", "fanlin": "fanlin", "tropical": "trop"}
CSV_HEADER = ["trial", "eig_rank", "modulus"] + [
    f"eta_{_TAG[s]}_z{k}" for s in STRATEGIES for k in (0, 1)
]
NA = "NA"
FAIL = "FAIL"
DEFAULT_MAX_EIGENPAIRS = 10**6

PRESETS = {
    # quadratic tables (10x10 and 40x40)
    "quad1": dict(n=10, d=2, target_norms=(6.01e-3, 4.73e3, 5.54e-5), trials=100),
    "quad2": dict(n=40, d=2, target_norms=(1e5, 1e3, 1e-6), trials=100),
    # degree-5 and degree-10 norm profiles, orders of magnitude only
    "deg5": dict(n=20, d=5, target_norms=(1e-3, 1e2, 1e2, 1e-1, 1e-4, 1e5), trials=20),
    "deg10": dict(n=8, d=10, target_norms=(1e-5, 1e-2, 1e-3, 1e-4, 1e2, 1.0, 1e3, 1e-3, 1e4, 1e2, 1e5),
                  trials=20),
}


def max_eigenpairs() -> int:
    raw = os.environ.get("TROPEIG_MAX_EIGENPAIRS")
    if raw is None:
        return DEFAULT_MAX_EIGENPAIRS
    try:
        return int(float(raw))
    except ValueError:
        raise ValueError(f"TROPEIG_MAX_EIGENPAIRS must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    d: int
    target_norms: tuple[float, ...]
    trials: int = 1
    seed: int = 0
    strategies: tuple[str, ...] = ("none", "fanlin", "tropical")
    eigenvector_blocks: tuple[int, ...] = (0, 1)
    max_eigenpairs: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "target_norms", tuple(float(g) for g in self.target_norms))
        object.__setattr__(self, "strategies", tuple(self.strategies))
        object.__setattr__(self, "eigenvector_blocks", tuple(self.eigenvector_blocks))
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be >= 1")
        if len(self.target_norms) != self.d + 1:
            raise ValueError(f"need d+1 = {self.d + 1} norms, got {len(self.target_norms)}")
        if any(g < 0 or not math.isfinite(g) for g in self.target_norms):
            raise ValueError("norms must be finite and >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.strategies or any(s not in STRATEGIES for s in self.strategies):
            raise ValueError(f"strategies must be a non-empty subset of {STRATEGIES}")
        if "fanlin" in self.strategies and self.d != 2:
            raise ValueError("the fanlin scaling is only defined for d = 2")
        if not self.eigenvector_blocks or any(k not in (0, 1) for k in self.eigenvector_blocks):
            raise ValueError("eigenvector blocks must be a non-empty subset of {0, 1}")
        cap = self.max_eigenpairs if self.max_eigenpairs is not None else max_eigenpairs()
        if self.trials * self.n * self.d > cap:
            raise ValueError(f"trials*n*d = {self.trials * self.n * self.d} exceeds the cap of {cap} eigenpairs")

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "ExperimentConfig":
        if name not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        kw = dict(PRESETS[name])
        if kw["d"] != 2:
            kw.update(strategies=("none", "tropical"), eigenvector_blocks=(0,))
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


@dataclass
class ExperimentRow:
    trial: int
    eig_rank: int
    modulus: float | None
    # (strategy, block) -> eta, None (not available) or FAIL
    etas: dict[tuple[str, int], float | str | None] = field(default_factory=dict)

    def eta(self, strategy: str, block: int = 0):
        return self.etas.get((strategy, block))


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ExperimentRow]
    failures: dict[int, list[str]]  # trial -> strategies that failed


def trial_seed(seed: int, t: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(t,))


def trial_pencil(config: ExperimentConfig, t: int) -> MatrixPolynomial:
    return random_pencil(config.n, config.d, config.target_norms, trial_seed(config.seed, t))


def _run_trial(config: ExperimentConfig, t: int) -> tuple[list[ExperimentRow], list[str]]:
    P = trial_pencil(config, t)
    m = config.n * config.d
    blocks = config.eigenvector_blocks
    ranked: dict[str, list] = {}
    failed = []
    for s in config.strategies:
        try:
            pairs = solve(P, s, blocks=blocks)
        except SolverFailure:
            failed.append(s)
            continue
        vals = np.array([p.value for p in pairs])
        order = sort_order(vals, np.array([p.is_finite for p in pairs]))
        ranked[s] = [pairs[j] for j in order]

    ref = "tropical" if "tropical" in ranked else next(iter(ranked), None)
    rows = []
    for r in range(m):
        modulus = None
        if ref is not None and ranked[ref][r].is_finite:
            modulus = ranked[ref][r].modulus
        row = ExperimentRow(t, r, modulus)
        for s in config.strategies:
            for k in blocks:
                row.etas[(s, k)] = FAIL if s in failed else ranked[s][r].block_etas.get(k)
        rows.append(row)
    return rows, failed


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """Run all trials; results are assembled in trial order whatever ``jobs`` is."""
    trials = range(config.trials)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(lambda t: _run_trial(config, t), trials))
    else:
        outs = [_run_trial(config, t) for t in trials]
    rows, failures = [], {}
    for t, (trows, failed) in zip(trials, outs):
        rows.extend(trows)
        if failed:
            failures[t] = failed
    return ExperimentResult(config, rows, failures)


def _mean(values: Iterable) -> float | None:
    v = [x for x in values if isinstance(x, float)]
    return float(np.mean(v)) if v else None


def summarize(result: ExperimentResult) -> dict:
    """Per-rank means over trials (failed trials excluded) and per-trial series
    for the minimum-, median- and maximum-modulus eigenvalues."""
    cfg = result.config
    m = cfg.n * cfg.d
    ok_rows = [r for r in result.rows if r.trial not in result.failures]
    by_rank: dict[int, list[ExperimentRow]] = {r: [] for r in range(m)}
    for row in ok_rows:
        by_rank[row.eig_rank].append(row)
    columns = [(s, k) for s in cfg.strategies for k in cfg.eigenvector_blocks]
    col_name = {c: f"eta_{_TAG[c[0]]}_z{c[1]}" for c in columns}
    means = []
    for r in range(m):
        rows = by_rank[r]
        entry = {"eig_rank": r, "modulus": _mean(x.modulus for x in rows)}
        for c in columns:
            entry[col_name[c]] = _mean(x.etas[c] for x in rows)
        means.append(entry)

    series = {}
    for label, rank in (("min", 0), ("median", m // 2), ("max", m - 1)):
        rows = [x for x in result.rows if x.eig_rank == rank]
        series[label] = {
            "eig_rank": rank,
            "trials": [x.trial for x in rows],
            **{col_name[c]: [x.etas[c] if isinstance(x.etas[c], float) else None for x in rows]
               for c in columns},
        }
    return {
        "n": cfg.n,
        "d": cfg.d,
        "target_norms": list(cfg.target_norms),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "failed_trials": len(result.failures),
        "failures": {str(t): s for t, s in sorted(result.failures.items())},
        "rank_means": means,
        "series": series,
    }


def _fmt(x) -> str:
    if x is None:
        return NA
    if isinstance(x, str):
        return x
    return f"{x:.16e}"


def write_csv(result: ExperimentResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in result.rows:
            out = [str(row.trial), str(row.eig_rank), _fmt(row.modulus)]
            for s in STRATEGIES:
                for k in (0, 1):
                    out.append(_fmt(row.etas.get((s, k))))
            w.writerow(out)


def _parse(tok: str):
    if tok == NA:
        return None
    if tok == FAIL:
        return FAIL
    return float(tok)


def read_csv(path) -> list[ExperimentRow]:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        rows = []
        for rec in r:
            row = ExperimentRow(int(rec[0]), int(rec[1]), _parse(rec[2]))
            i = 3
            for s in STRATEGIES:
                for k in (0, 1):
                    v = _parse(rec[i])
                    if v is not None:
                        row.etas[(s, k)] = v
                    i += 1
            rows.append(row)
    return rows


# --- splitting-bound trials ------------------------------------------------

def random_quadratic(n: int, target_norms: Sequence[float], seed, a2: str = "unitary",
                     a2_cond: float | None = None) -> MatrixPolynomial:
    """Random quadratic with given norms; ``A_2`` is Gaussian, unitary, or has condition ``a2_cond``."""
    P = random_pencil(n, 2, target_norms, seed)
    if a2 == "gaussian" and a2_cond is None:
        return P
    if a2 not in ("unitary", "gaussian"):
        raise ValueError(f"unknown A_2 model {a2!r}")
    cond = 1.0 if a2_cond is None else a2_cond
    # children 0..2 are used by random_pencil
    A2 = random_conditioned(n, cond, seed_child(seed, 3)) * float(target_norms[2])
    return MatrixPolynomial([P.coeffs[0], P.coeffs[1], A2])


def run_verify_bound(n: int, target_norms: Sequence[float], trials: int, seed: int,
                     a2: str = "unitary", a2_cond: float | None = None) -> dict:
    out = []
    for t in range(trials):
        P = random_quadratic(n, target_norms, trial_seed(seed, t), a2, a2_cond)
        out.append(verify_one(P, t))
    return aggregate_reports(out)


def verify_one(P: MatrixPolynomial, trial: int = 0) -> dict:
    try:
        rep = verify_splitting(P)
    except NotApplicableError as exc:
        return {"trial": trial, "status": "not-applicable", "reason": exc.hypothesis}
    except TropeigError as exc:
        return {"trial": trial, "status": "failed", "reason": str(exc)}
    return {"trial": trial, "status": "ok", "report": rep.to_dict()}


def aggregate_reports(items: list[dict]) -> dict:
    ok = [x for x in items if x["status"] == "ok"]
    return {
        "trials": items,
        "applicable": len(ok),
        "not_applicable": sum(x["status"] == "not-applicable" for x in items),
        "failed": sum(x["status"] == "failed" for x in items),
        "bound_holds": sum(x["report"]["bound_holds"] for x in ok),
        "box_holds": sum(x["report"]["box_holds"] for x in ok),
    }
