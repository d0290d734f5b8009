"""Trial batteries, aggregates, parameter sweeps, polymer scaling and fits.

Trial k of a battery always draws from ``SeededSource(seed, k)``; the
circuit engines advance many trials in lock-step, but a trial's result does
not depend on which other trials share its batch or worker, so output is the
same for any ``jobs``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import __version__
from .cnf import CnfFormula, evaluate, polymer
from .engine_v1 import V1Kernel, V1Params
from .engine_v2 import ATTEMPT_MODES, V2Kernel, V2Params
from .probsat import ProbSatParams, run_probsat
from ._sim import run_lanes
from .stochastic import RNG_ID, BatchSource, SeededSource
from .wiring import synthesize

ALGOS = ("cl1", "cl2", "probsat")
CSV_COLUMNS = ("algo", "instance", "n_vars", "n_clauses", "seed", "trial", "iterations", "solved", "wall_ms")
SWEEP_PARAMS = {"cl1": ("p1p2", "p3"), "cl2": ("p3", "p4", "p5"), "probsat": ()}
_ALGO_KEYS = {"cl1": {"p1", "p2", "p3"}, "cl2": {"p3", "p4", "p5"}, "probsat": {"cb", "eps"}}
# lanes simulated together per batch; bounds memory for large polymers
LANE_CHUNK = 128


@dataclass(frozen=True)
class AlgoConfig:
    algo: str
    p1: float | None = None
    p2: float | None = None
    p3: float | None = None
    p4: float | None = None
    p5: float | None = None
    cb: float | None = None
    eps: float | None = None
    max_iters: int | None = None
    init: str | None = None
    include_self: bool = False
    attempt_on: str | None = None

    def __post_init__(self):
        if self.algo not in ALGOS:
            raise ValueError(f"unknown algo {self.algo!r}; expected one of {', '.join(ALGOS)}")
        bad = [k for k in ("p1", "p2", "p3", "p4", "p5", "cb", "eps")
               if getattr(self, k) is not None and k not in _ALGO_KEYS[self.algo]]
        if bad:
            raise ValueError(f"{', '.join(bad)} not applicable to {self.algo}")
        if self.init not in (None, "zeros", "random"):
            raise ValueError(f"unknown init {self.init!r}")
        if self.attempt_on is not None:
            if self.algo != "cl2":
                raise ValueError(f"attempt_on not applicable to {self.algo}")
            if self.attempt_on not in ATTEMPT_MODES:
                raise ValueError(f"unknown attempt_on {self.attempt_on!r}")

    @property
    def init_mode(self) -> str:
        return self.init or ("random" if self.algo == "probsat" else "zeros")

    @property
    def attempt_mode(self) -> str:
        return self.attempt_on or "open"

    def params(self, f: CnfFormula):
        if self.algo == "cl1":
            return V1Params.defaults(f.num_vars, p1=self.p1, p2=self.p2, p3=self.p3, max_iters=self.max_iters)
        if self.algo == "cl2":
            return V2Params.defaults(p3=self.p3, p4=self.p4, p5=self.p5, max_iters=self.max_iters)
        kw = {k: getattr(self, k) for k in ("cb", "eps") if getattr(self, k) is not None}
        if self.max_iters is not None:
            kw["max_flips"] = self.max_iters
        return ProbSatParams(**kw)

    def with_param(self, name: str, value: float) -> "AlgoConfig":
        if name not in SWEEP_PARAMS[self.algo]:
            raise ValueError(f"cannot sweep {name!r} for {self.algo}; valid: {', '.join(SWEEP_PARAMS[self.algo]) or 'none'}")
        if name == "p1p2":
            return replace(self, p1=value, p2=value)
        return replace(self, **{name: value})


@dataclass(frozen=True)
class TrialRecord:
    algo: str
    instance: str
    n_vars: int
    n_clauses: int
    seed: int
    trial: int
    iterations: int
    solved: bool
    wall_ms: float | None = None


@dataclass(frozen=True)
class Aggregate:
    n: int
    n_solved: int
    success_rate: float
    mean: float | None
    median: float | None
    p95: float | None

    @property
    def defined(self) -> bool:
        return self.n_solved > 0


@dataclass(frozen=True)
class FitResult:
    model: str
    a: float
    b: float
    r2: float
    rss: float

    def predict(self, n):
        n = np.asarray(n, dtype=float)
        return self.a + self.b * (np.log(n) if self.model == "log" else n)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=False) + "\n"


def _run_chunk(config: AlgoConfig, f: CnfFormula, seed: int, trials: Sequence[int],
               timing: bool) -> list[TrialRecord]:
    params = config.params(f)
    start = time.perf_counter()
    if config.algo == "probsat":
        results = []
        walls = []
        for k in trials:
            t0 = time.perf_counter()
            results.append(run_probsat(f, params, SeededSource(seed, k), init=config.init_mode))
            walls.append((time.perf_counter() - t0) * 1e3)
    else:
        kernel = V1Kernel(params) if config.algo == "cl1" else V2Kernel(params, config.attempt_mode)
        w = synthesize(f, include_self=config.include_self)
        results = run_lanes(kernel, w, BatchSource.seeded(seed, trials), config.init_mode, params.max_iters)
        walls = [(time.perf_counter() - start) * 1e3 / max(len(trials), 1)] * len(trials)
    out = []
    for k, res, wall in zip(trials, results, walls):
        if res.solved and not evaluate(f, res.solution).satisfied:
            raise AssertionError(f"{config.algo} trial {k}: reported solution does not satisfy {f.name}")
        out.append(TrialRecord(
            config.algo, f.name, f.num_vars, f.num_clauses, seed, k,
            res.iterations, res.solved, round(wall, 3) if timing else None,
        ))
    return out


def default_jobs() -> int:
    return max(1, int(os.environ.get("CLAMBSAT_JOBS", "1")))


def run_trials(config: AlgoConfig, f: CnfFormula, n_trials: int, seed: int, jobs: int | None = None,
               timing: bool = False) -> list[TrialRecord]:
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    jobs = default_jobs() if jobs is None else max(1, jobs)
    size = LANE_CHUNK if config.algo != "probsat" else max(1, math.ceil(n_trials / jobs))
    size = min(size, max(1, math.ceil(n_trials / jobs)))
    chunks = [list(range(i, min(i + size, n_trials))) for i in range(0, n_trials, size)]
    if jobs == 1 or len(chunks) == 1:
        parts = [_run_chunk(config, f, seed, c, timing) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, [config] * len(chunks), [f] * len(chunks),
                                  [seed] * len(chunks), chunks, [timing] * len(chunks)))
    return [r for part in parts for r in part]


def aggregate(records: Sequence[TrialRecord]) -> Aggregate:
    """Statistics over solved trials; unsolved ones only lower the success rate."""
    if not records:
        raise ValueError("no records to aggregate")
    solved = np.array([r.iterations for r in records if r.solved], dtype=float)
    n = len(records)
    if solved.size == 0:
        return Aggregate(n, 0, 0.0, None, None, None)
    return Aggregate(
        n, int(solved.size), solved.size / n,
        float(solved.mean()), float(np.median(solved)), float(np.percentile(solved, 95)),
    )


def sweep(param: str, values: Iterable[float], config: AlgoConfig, f: CnfFormula, n_trials: int,
          seed: int, jobs: int | None = None) -> list[tuple[float, Aggregate, list[TrialRecord]]]:
    """One battery per value, all with the same master seed (paired trials)."""
    out = []
    for v in values:
        records = run_trials(config.with_param(param, v), f, n_trials, seed, jobs)
        out.append((v, aggregate(records), records))
    return out


def scaling_experiment(base: CnfFormula, hs: Sequence[int], configs: Sequence[AlgoConfig], n_trials: int,
                       seed: int, jobs: int | None = None, timing: bool = False
                       ) -> dict[tuple[str, int], list[TrialRecord]]:
    groups = {}
    for h in hs:
        g = polymer(base, h)
        for cfg in configs:
            groups[(cfg.algo, h)] = run_trials(cfg, g, n_trials, seed, jobs, timing)
    return groups


def fit(points: Sequence[tuple[float, float]], model: str) -> FitResult:
    """Ordinary least squares of y on ln N ("log") or N ("linear").

    r2 is 1 - rss/tss; with zero variance in y (tss = 0) the fit is exact
    and r2 is reported as 1.
    """
    if model not in ("log", "linear"):
        raise ValueError(f"unknown model {model!r}")
    n = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.unique(n).size < 2:
        raise ValueError("need at least 2 distinct N values to fit")
    if model == "log" and (n <= 0).any():
        raise ValueError("log model needs N > 0")
    xs = np.log(n) if model == "log" else n
    design = np.column_stack([np.ones_like(xs), xs])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (a + b * xs)
    rss = float(resid @ resid)
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if tss == 0 else 1.0 - rss / tss
    return FitResult(model, float(a), float(b), r2, rss)


def mean_points(records: Iterable[TrialRecord], algo: str | None = None) -> list[tuple[int, float]]:
    """(N, mean iterations over solved trials) per instance size."""
    by_n: dict[int, list[int]] = {}
    for r in records:
        if (algo is None or r.algo == algo) and r.solved:
            by_n.setdefault(r.n_vars, []).append(r.iterations)
    return [(n, float(np.mean(v))) for n, v in sorted(by_n.items())]


def csv_preamble(extra: str = "") -> str:
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return f"# clambsat {__version__} rng={RNG_ID} generated={stamp}{(' ' + extra) if extra else ''}\n"


def write_csv(records: Iterable[TrialRecord], out: TextIO, preamble: bool = True) -> None:
    """Write records; the first line is a ``#`` comment holding version, RNG and timestamp."""
    if preamble:
        out.write(csv_preamble())
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.algo, r.instance, r.n_vars, r.n_clauses, r.seed, r.trial, r.iterations,
            int(r.solved), "" if r.wall_ms is None else f"{r.wall_ms:.3f}",
        ])


def read_csv(source: TextIO | str) -> list[TrialRecord]:
    stream = io.StringIO(source) if isinstance(source, str) else source
    rows = csv.DictReader(line for line in stream if not line.startswith("#"))
    if tuple(rows.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {rows.fieldnames}")
    out = []
    for row in rows:
        out.append(TrialRecord(
            row["algo"], row["instance"], int(row["n_vars"]), int(row["n_clauses"]),
            int(row["seed"]), int(row["trial"]), int(row["iterations"]), row["solved"] == "1",
            float(row["wall_ms"]) if row["wall_ms"] else None,
        ))
    return out


def format_table(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    cells = [[str(c) for c in header]] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(wd) for c, wd in zip(r, widths)) for r in cells)


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.4g}" if abs(v) < 1e4 else f"{v:.1f}"
    return str(v)


