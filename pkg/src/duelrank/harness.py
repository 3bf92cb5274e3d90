"""Seeded simulation loop, sweeps, and CSV/JSON emission.

A run is fully determined by its configuration plus base seed: matrix
generation, match outcomes, and scheduler randomness each get an
independent stream derived from the seed (numpy PCG64 throughout, never
OS entropy), so repeated runs are byte-identical.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import games
from .errors import ConfigError, NotReadyError
from .games import TrueRatings, WinMatrix
from .metrics import hit_ratio_at_k, instant_regret, ndcg_at_k, reciprocal_rank
from .ratings import RatingState
from .schedulers import MatchEnv, SchedulerConfig, make_scheduler

PRNG_NAME = "numpy-pcg64"


@dataclass
class RunConfig:
    """Flat configuration of one simulation (or a replicate set)."""

    algo: str = "maxin_elo"
    game: str = "elo"            # elo | noisy_elo | triangular | cyclic
    n: int = 20
    rating_scale: float = 1.0
    noise: float = 0.0
    matrix: str | None = None    # CSV path; overrides the generator
    T: int = 5000
    tau: int | None = None
    gamma: float = 1.0
    gamma_mode: str = "fixed"
    alpha: float | None = None
    eta0: float = 1.0
    k: int = 4
    melo: bool = False
    delta: float = 0.2
    lambda_ridge: float = 1.0
    ridge: float = 1e-4
    c1: float = 0.25
    clip_eps: float = 1e-3
    seed: int = 0
    matrix_seed: int | None = None    # defaults to seed
    replicates: int = 1
    ks: tuple[int, ...] = ()          # HR@k / NDCG@k cutoffs
    out: str | None = None
    workers: int = 1

    def scheduler_config(self) -> SchedulerConfig:
        return SchedulerConfig(
            algo=self.algo, T=self.T, tau=self.tau, gamma=self.gamma,
            gamma_mode=self.gamma_mode, alpha=self.alpha, eta0=self.eta0,
            k=self.k, melo=self.melo, delta=self.delta,
            lambda_ridge=self.lambda_ridge, ridge=self.ridge,
            clip_eps=self.clip_eps, c1=self.c1, seed=self.seed)

    def digest(self) -> str:
        items = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            items.append(f"{f.name}={v}")
        return ";".join(items) + f";prng={PRNG_NAME}"


_BOOL_VALUES = {"true": True, "1": True, "yes": True,
                "false": False, "0": False, "no": False}


def _convert(key: str, raw: str, target_type):
    try:
        if target_type is bool:
            return _BOOL_VALUES[raw.strip().lower()]
        if target_type is tuple:
            return tuple(int(x) for x in raw.split(",") if x.strip())
        return target_type(raw)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}", key=key) from exc


def _field_types() -> dict:
    types = {}
    for f in dataclasses.fields(RunConfig):
        t = f.type
        if "tuple" in str(t):
            types[f.name] = tuple
        elif "bool" in str(t):
            types[f.name] = bool
        elif "int" in str(t):
            types[f.name] = int
        elif "float" in str(t):
            types[f.name] = float
        else:
            types[f.name] = str
    return types


def parse_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from a key=value file plus flag overrides.

    Unknown keys are rejected; overrides win over file values.
    """
    types = _field_types()
    values: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
                key, raw = (s.strip() for s in line.split("=", 1))
                if key not in types:
                    raise ConfigError(f"unknown config key: {key}", key=key)
                values[key] = _convert(key, raw, types[key])
    for key, v in (overrides or {}).items():
        if key not in types:
            raise ConfigError(f"unknown config key: {key}", key=key)
        if v is None:
            continue
        values[key] = _convert(key, str(v), types[key]) if isinstance(v, str) else v
    cfg = RunConfig(**values)
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    if cfg.replicates < 1:
        raise ConfigError("replicates must be at least 1", key="replicates")
    if cfg.n < 2:
        raise ConfigError("n must be at least 2", key="n")
    if cfg.T < 2:
        raise ConfigError("T must be at least 2", key="T")
    for k in cfg.ks:
        if not 1 <= k <= cfg.n:
            raise ConfigError(f"metric cutoff k={k} outside [1, n]", key="ks")
    cfg.scheduler_config().resolve(cfg.n)  # raises on scheduler-side issues


def build_matrix(cfg: RunConfig) -> WinMatrix:
    if cfg.matrix is not None:
        return games.load_matrix(cfg.matrix, clip_eps=cfg.clip_eps)
    seed = cfg.matrix_seed if cfg.matrix_seed is not None else cfg.seed
    if cfg.game == "elo":
        return games.gen_elo_game(cfg.n, cfg.rating_scale, seed)
    if cfg.game == "noisy_elo":
        return games.gen_noisy_elo_game(cfg.n, cfg.rating_scale, cfg.noise,
                                        seed, clip_eps=cfg.clip_eps)
    if cfg.game == "triangular":
        return games.gen_triangular(cfg.n)
    if cfg.game == "cyclic":
        return games.gen_cyclic(cfg.n)
    raise ConfigError(f"unknown game generator: {cfg.game}", key="game")


@dataclass
class TraceRow:
    t: int
    x: int
    y: int
    outcome: int
    instant_regret: float
    cum_regret: float
    rr: float
    hr: tuple[float, ...] = ()
    ndcg: tuple[float, ...] = ()
    warmup: bool = False


@dataclass
class Trace:
    rows: list[TraceRow]
    ks: tuple[int, ...]
    config_digest: str
    seed: int


@dataclass
class RunSummary:
    config_digest: str
    replicates: int
    ks: tuple[int, ...]
    final_cum_regret: list[float] = field(default_factory=list)
    final_rr: list[float] = field(default_factory=list)
    final_hr: list[list[float]] = field(default_factory=list)
    final_ndcg: list[list[float]] = field(default_factory=list)
    wall_time: float = 0.0

    def stats(self) -> dict:
        def ms(vals):
            a = np.asarray(vals, dtype=float)
            axis = 0
            return {"mean": np.mean(a, axis=axis).tolist(),
                    "std": np.std(a, axis=axis).tolist()}

        return {
            "config": self.config_digest,
            "replicates": self.replicates,
            "ks": list(self.ks),
            "final_cum_regret": self.final_cum_regret,
            "final_rr": self.final_rr,
            "final_hr": self.final_hr,
            "final_ndcg": self.final_ndcg,
            "cum_regret": ms(self.final_cum_regret),
            "rr": ms(self.final_rr),
            "hr": ms(self.final_hr) if self.final_hr and self.ks else None,
            "ndcg": ms(self.final_ndcg) if self.final_ndcg and self.ks else None,
            "wall_time": self.wall_time,
        }


def _metric_snapshot(truth: TrueRatings, est: RatingState, ks):
    rr = reciprocal_rank(truth, est)
    hr = tuple(hit_ratio_at_k(truth, est, k) for k in ks)
    ndcg = tuple(ndcg_at_k(truth, est, k) for k in ks)
    return rr, hr, ndcg


def run_replicate(cfg: RunConfig, matrix: WinMatrix, truth: TrueRatings,
                  rep: int) -> Trace:
    """Play T rounds of one seeded replicate and record the trace."""
    outcome_rng = np.random.default_rng(
        np.random.SeedSequence([cfg.seed, rep, 1]))
    sched_rng = np.random.default_rng(
        np.random.SeedSequence([cfg.seed, rep, 2]))
    env = MatchEnv(matrix, outcome_rng)
    scheduler = make_scheduler(cfg.n, cfg.scheduler_config(), sched_rng)
    tau = scheduler.config.tau
    zero_est = RatingState(r=np.zeros(cfg.n))
    rows = []
    cum = 0.0
    for t in range(1, cfg.T + 1):
        x, y, o = scheduler.step(env)
        reg = instant_regret(truth, x, y)
        cum += reg
        try:
            est = scheduler.estimate()
        except NotReadyError:
            est = zero_est
        rr, hr, ndcg = _metric_snapshot(truth, est, cfg.ks)
        rows.append(TraceRow(t=t, x=x, y=y, outcome=o, instant_regret=reg,
                             cum_regret=cum, rr=rr, hr=hr, ndcg=ndcg,
                             warmup=t <= tau))
    return Trace(rows=rows, ks=cfg.ks, config_digest=cfg.digest(),
                 seed=cfg.seed)


def simulate(cfg: RunConfig) -> tuple[list[Trace], RunSummary]:
    """Run every replicate of a config; deterministic given (config, seed)."""
    validate_config(cfg)
    start = time.perf_counter()
    matrix = build_matrix(cfg)
    truth = games.true_ratings(matrix, clip_eps=cfg.clip_eps)
    traces = [run_replicate(cfg, matrix, truth, rep)
              for rep in range(cfg.replicates)]
    summary = RunSummary(config_digest=cfg.digest(),
                         replicates=cfg.replicates, ks=cfg.ks)
    for tr in traces:
        last = tr.rows[-1]
        summary.final_cum_regret.append(last.cum_regret)
        summary.final_rr.append(last.rr)
        summary.final_hr.append(list(last.hr))
        summary.final_ndcg.append(list(last.ndcg))
    summary.wall_time = time.perf_counter() - start
    return traces, summary


def _sweep_point(cfg: RunConfig) -> dict:
    try:
        _, summary = simulate(cfg)
        return {"ok": True, "summary": summary.stats()}
    except Exception as exc:  # record, don't abort the sweep
        return {"ok": False, "error": type(exc).__name__, "message": str(exc),
                "config": cfg.digest()}


def sweep(template: RunConfig, grid: dict[str, list]) -> list[dict]:
    """Run the cartesian grid over the template; order is deterministic.

    Keys with empty value lists fall back to the template's value.
    Point failures are recorded in place without stopping the sweep.
    """
    keys = sorted(k for k, vals in grid.items() if vals)
    for k in grid:
        if k not in _field_types():
            raise ConfigError(f"unknown sweep key: {k}", key=k)
    value_lists = [grid[k] for k in keys]
    combos = [dict(zip(keys, combo))
              for combo in itertools.product(*value_lists)]
    points = [dataclasses.replace(template, **combo) for combo in combos]
    if template.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=template.workers) as pool:
            results = list(pool.map(_sweep_point, points))
    else:
        results = [_sweep_point(p) for p in points]
    for res, combo in zip(results, combos):
        res["point"] = combo
    return results


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def trace_header(ks) -> str:
    cols = ["t", "x", "y", "outcome", "instant_regret", "cum_regret", "rr"]
    cols += [f"hr@{k}" for k in ks]
    cols += [f"ndcg@{k}" for k in ks]
    return ",".join(cols)


def write_trace_csv(trace: Trace, path) -> None:
    lines = [trace_header(trace.ks)]
    for row in trace.rows:
        vals = [row.t, row.x, row.y, row.outcome,
                row.instant_regret, row.cum_regret, row.rr]
        vals += list(row.hr) + list(row.ndcg)
        lines.append(",".join(_fmt(v) for v in vals))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_csv(path) -> Trace:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    header = lines[0].split(",")
    ks = tuple(int(c.split("@")[1]) for c in header if c.startswith("hr@"))
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        base = 7
        hr = tuple(float(v) for v in parts[base:base + len(ks)])
        ndcg = tuple(float(v) for v in parts[base + len(ks):base + 2 * len(ks)])
        rows.append(TraceRow(t=int(parts[0]), x=int(parts[1]), y=int(parts[2]),
                             outcome=int(parts[3]),
                             instant_regret=float(parts[4]),
                             cum_regret=float(parts[5]), rr=float(parts[6]),
                             hr=hr, ndcg=ndcg))
    return Trace(rows=rows, ks=ks, config_digest="", seed=-1)


def write_summary_json(summary: RunSummary, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary.stats(), fh, indent=2)
        fh.write("\n")


def report(traces: list[Trace], summary: RunSummary | None,
           out_prefix: str) -> list[str]:
    """Emit trace CSVs (one per replicate) and the summary JSON."""
    written = []
    for i, tr in enumerate(traces):
        path = f"{out_prefix}.trace{i}.csv"
        write_trace_csv(tr, path)
        written.append(path)
    if summary is not None:
        path = f"{out_prefix}.summary.json"
        write_summary_json(summary, path)
        written.append(path)
    return written
