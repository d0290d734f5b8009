"""Command-line interface: solve, bench, polymer, scaling, sweep, fit.

Exit codes: 0 solved / success, 1 not solved (or no solved trials), 2 bad
input or usage.
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict
from pathlib import Path

from . import __version__, bench
from ._sim import write_trace_tsv
from .cnf import CnfFormula, CnfParseError, polymer, write_dimacs
from .engine_v1 import run as run_v1
from .engine_v2 import run_v2
from .probsat import run_probsat
from .fixtures import resolve
from .stochastic import RNG_ID, ScriptedSource, SeededSource
from .wiring import synthesize

EXIT_OK, EXIT_UNSOLVED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _add_algo_flags(p: argparse.ArgumentParser, multi: bool = False) -> None:
    if multi:
        p.add_argument("--algos", default="cl1,cl2,probsat",
                       help="comma-separated algorithms among cl1, cl2, probsat (default: all three)")
    else:
        p.add_argument("--algo", choices=bench.ALGOS, default="cl1", help="solver (default: cl1)")
    g = p.add_argument_group("solver parameters")
    g.add_argument("--p1", type=float, help="cl1: SG1 force-1 probability (default 1/(2N))")
    g.add_argument("--p2", type=float, help="cl1: SG2 force-0 probability (default 1/(2N))")
    g.add_argument("--p3", type=float, help="cl1: SG3 probability (default 0.9); cl2: contradiction-attempt SG3 (default 0.95)")
    g.add_argument("--p4", type=float, help="cl2: free-attempt SG4 probability (default 0.95)")
    g.add_argument("--p5", type=float, help="cl2: restore SG5 probability (default 0.2)")
    g.add_argument("--cb", type=float, help="probsat: break exponent (default 2.38)")
    g.add_argument("--eps", type=float, help="probsat: break offset (default 0.9)")
    g.add_argument("--max-iters", type=int, help="iteration (flip) cutoff (default 1000000)")
    g.add_argument("--init", choices=("zeros", "random"),
                   help="initial assignment (default: zeros for cl1/cl2, random for probsat)")
    g.add_argument("--include-self", action="store_true",
                   help="cl1/cl2: feed a cell's own contradiction into its merge (default off)")
    g.add_argument("--attempt-on", choices=("open", "free"),
                   help="cl2: cells allowed to attempt a flip, free or in contradiction (open, default) "
                        "or free only")


def _config(args, algo: str) -> bench.AlgoConfig:
    kw = {k: getattr(args, k) for k in ("p1", "p2", "p3", "p4", "p5", "cb", "eps")}
    # with several algos, silently drop flags that belong to another algo
    if hasattr(args, "algos"):
        kw = {k: v for k, v in kw.items() if k in bench._ALGO_KEYS[algo]}
    try:
        attempt = args.attempt_on if algo == "cl2" or not hasattr(args, "algos") else None
        return bench.AlgoConfig(algo, max_iters=args.max_iters, init=args.init,
                                include_self=args.include_self, attempt_on=attempt, **kw)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _load(path) -> CnfFormula:
    try:
        return resolve(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None
    except CnfParseError as e:
        raise UsageError(f"{path}: {e}") from None


def _write_records(records, path) -> None:
    with open(path, "w", newline="") as fh:
        bench.write_csv(records, fh)


def cmd_solve(args) -> int:
    f = _load(args.cnf)
    cfg = _config(args, args.algo)
    params = cfg.params(f)
    if args.script is not None:
        if cfg.algo == "probsat":
            raise UsageError("--script applies to cl1/cl2 only")
        try:
            src = ScriptedSource.from_file(args.script)
        except (OSError, ValueError) as e:
            raise UsageError(f"{args.script}: {e}") from None
    else:
        src = SeededSource(args.seed, args.stream)
    if cfg.algo == "probsat":
        res = run_probsat(f, params, src, init=cfg.init_mode)
    else:
        kw = {"attempt_on": cfg.attempt_mode} if cfg.algo == "cl2" else {}
        runner = run_v1 if cfg.algo == "cl1" else run_v2
        try:
            res = runner(f, params, src, cfg.init_mode, wiring=synthesize(f, cfg.include_self),
                         stop_at_first=not args.keep_going, trace=args.trace is not None, **kw)
        except IndexError:
            raise UsageError(f"{args.script}: script ran out of gate outcomes") from None
        if args.trace is not None:
            write_trace_tsv(res.trace, args.trace)
    print(f"instance: {f.name} (N={f.num_vars}, M={f.num_clauses})")
    if args.script is not None:
        print(f"algo: {cfg.algo}  script: {args.script}")
    else:
        print(f"algo: {cfg.algo}  seed: {args.seed}  stream: {args.stream}  rng: {RNG_ID}")
    for t, bits in (res.solutions if args.keep_going else []):
        print(f"satisfied at t={t}: " + "".join(map(str, bits)))
    if res.solved:
        print("status: solved")
        print(f"first_solution_iter: {res.first_solution_iter}")
        print("solution: " + "".join(map(str, res.solution)))
        return EXIT_OK
    print("status: timeout")
    print(f"iterations: {res.iterations}")
    return EXIT_UNSOLVED


def _summary(groups) -> str:
    rows = []
    for key, recs in groups:
        agg = bench.aggregate(recs)
        rows.append([*key, agg.n, agg.success_rate, agg.mean, agg.median, agg.p95])
    return rows


def cmd_bench(args) -> int:
    f = _load(args.cnf)
    cfg = _config(args, args.algo)
    records = bench.run_trials(cfg, f, args.trials, args.seed, args.jobs, args.timing)
    _write_records(records, args.out)
    agg = bench.aggregate(records)
    print(bench.format_table(_summary([((cfg.algo, f.name), records)]),
                             ["algo", "instance", "trials", "success", "mean", "median", "p95"]))
    return EXIT_OK if agg.defined else EXIT_UNSOLVED


def cmd_polymer(args) -> int:
    f = _load(args.base)
    if args.h < 1:
        raise UsageError("--h must be >= 1")
    Path(args.out).write_text(write_dimacs(polymer(f, args.h)))
    print(f"wrote {args.out}: N={f.num_vars * args.h}, M={f.num_clauses * args.h}")
    return EXIT_OK


def cmd_scaling(args) -> int:
    base = _load(args.base)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    configs = [_config(args, a) for a in algos]
    if any(h < 1 for h in args.h):
        raise UsageError("h values must be >= 1")
    groups = bench.scaling_experiment(base, args.h, configs, args.trials, args.seed, args.jobs, args.timing)
    records = [r for recs in groups.values() for r in recs]
    _write_records(records, args.out)
    rows = [[a, h * base.num_vars] for a, h in groups]
    table = _summary(list(zip([tuple(r) for r in rows], groups.values())))
    print(bench.format_table(table, ["algo", "N", "trials", "success", "mean", "median", "p95"]))
    return EXIT_OK if all(bench.aggregate(r).defined for r in groups.values()) else EXIT_UNSOLVED


def cmd_sweep(args) -> int:
    f = _load(args.cnf)
    cfg = _config(args, args.algo)
    try:
        results = bench.sweep(args.param, args.values, cfg, f, args.trials, args.seed, args.jobs)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.out:
        _write_records([r for _, _, recs in results for r in recs], args.out)
    rows = [[v, agg.n, agg.success_rate, agg.mean, agg.median, agg.p95] for v, agg, _ in results]
    print(bench.format_table(rows, [args.param, "trials", "success", "mean", "median", "p95"]))
    return EXIT_OK if all(agg.defined for _, agg, _ in results) else EXIT_UNSOLVED


def cmd_fit(args) -> int:
    try:
        with open(args.input) as fh:
            records = bench.read_csv(fh)
    except OSError as e:
        raise UsageError(f"cannot read {args.input}: {e.strerror or e}") from None
    except ValueError as e:
        raise UsageError(f"{args.input}: {e}") from None
    by_algo = defaultdict(list)
    for r in records:
        by_algo[r.algo].append(r)
    algo = args.algo
    if algo is None:
        if len(by_algo) != 1:
            raise UsageError(f"CSV holds several algos ({', '.join(sorted(by_algo))}); pick one with --algo")
        algo = next(iter(by_algo))
    points = bench.mean_points(by_algo.get(algo, []))
    try:
        result = bench.fit(points, args.model)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSOLVED
    doc = result.to_json()
    if args.out:
        Path(args.out).write_text(doc)
    print(doc, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clambsat",
        description="Synchronous-circuit stochastic SAT solver workbench.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=True):
        p.add_argument("--seed", type=int, default=0, help="master seed, unsigned 64-bit (default 0)")
        if jobs:
            p.add_argument("--trials", type=int, default=500, help="trials per battery (default 500)")
            p.add_argument("--jobs", type=int, default=None,
                           help="worker processes (default $CLAMBSAT_JOBS or 1); output does not depend on it")
            p.add_argument("--timing", action="store_true",
                           help="fill the wall_ms column (off by default so reruns are byte-identical)")

    p = sub.add_parser("solve", help="solve one instance once")
    p.add_argument("--cnf", required=True, help="DIMACS CNF file, or builtin:NAME (e.g. builtin:f2)")
    common(p, jobs=False)
    p.add_argument("--stream", type=int, default=0, help="stream id, i.e. trial index (default 0)")
    p.add_argument("--trace", help="write a per-iteration TSV trace (cl1/cl2 only)")
    p.add_argument("--keep-going", action="store_true",
                   help="cl1/cl2: run to --max-iters and list every time the state becomes satisfying")
    p.add_argument("--script", help="replay gate outcomes from a 0/1-per-line file instead of the seeded RNG")
    _add_algo_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a trial battery and write a CSV")
    p.add_argument("--cnf", required=True)
    p.add_argument("--out", required=True, help="output CSV")
    common(p)
    _add_algo_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("polymer", help="write h renamed copies of a base instance as one CNF")
    p.add_argument("--base", required=True)
    p.add_argument("--h", type=int, required=True, help="number of copies")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_polymer)

    p = sub.add_parser("scaling", help="batteries over polymers of a base instance")
    p.add_argument("--base", required=True)
    p.add_argument("--h", type=_int_list, default=[1, 2, 4, 8], help="copy counts, e.g. 1,2,4,8 (default)")
    p.add_argument("--out", required=True, help="combined output CSV")
    common(p)
    _add_algo_flags(p, multi=True)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("sweep", help="batteries over values of one probability")
    p.add_argument("--cnf", required=True)
    p.add_argument("--param", required=True, help="cl1: p1p2 (p1=p2) or p3; cl2: p3, p4 or p5")
    p.add_argument("--values", type=_float_list, required=True, help="e.g. 0.5,0.8,0.9")
    p.add_argument("--out", help="optional CSV of every trial")
    common(p)
    _add_algo_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit mean iterations vs N from a scaling CSV")
    p.add_argument("--in", dest="input", required=True, help="scaling CSV")
    p.add_argument("--model", choices=("log", "linear"), required=True)
    p.add_argument("--algo", choices=bench.ALGOS, help="rows to fit (required if the CSV mixes algos)")
    p.add_argument("--out", help="also write the JSON document here")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if not 0 <= getattr(args, "seed", 0) < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
