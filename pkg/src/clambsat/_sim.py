"""Lock-step simulation of independent circuit runs.

All engine arrays carry a leading lane axis: ``x`` is ``(B, N)`` bool, one
row per independent run. Lane k draws only from its own source, so a lane's
trajectory is identical whether it runs alone or next to 499 others.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from .stochastic import BatchSource, BernoulliSource
from .wiring import WiringTable


@dataclass
class RunResult:
    solved: bool
    first_solution_iter: int | None
    solution: tuple[int, ...] | None
    iterations: int
    solutions: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)
    trace: list[dict] | None = None


def bits_str(bits: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in bits)


def maj(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return (a & b) | (b & c) | (c & a)


def compute_inter(w: WiringTable, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.atleast_2d(np.asarray(x, dtype=bool))
    lanes, n = x.shape
    xe = np.concatenate([x, np.zeros((lanes, 1), dtype=bool)], axis=1)
    inter = np.zeros((lanes, n), dtype=bool)
    inter_not = np.ones((lanes, n), dtype=bool)
    if w.pos.cells.size:
        lit = xe[:, w.pos.lit_var] ^ w.pos.lit_neg
        nor = ~lit.any(axis=2)
        inter[:, w.pos.cells] = np.logical_or.reduceat(nor, w.pos.starts, axis=1)
    if w.neg.cells.size:
        lit = xe[:, w.neg.lit_var] ^ w.neg.lit_neg
        inter_not[:, w.neg.cells] = np.logical_and.reduceat(lit.any(axis=2), w.neg.starts, axis=1)
    return inter, inter_not


def contra_next(inter: np.ndarray, inter_not: np.ndarray) -> np.ndarray:
    return inter & ~inter_not


def merge_contra(w: WiringTable, contra: np.ndarray) -> np.ndarray:
    contra = np.atleast_2d(np.asarray(contra, dtype=bool))
    mrg = np.zeros_like(contra)
    if w.nb_cells.size:
        mrg[:, w.nb_cells] = np.logical_or.reduceat(contra[:, w.nb_idx], w.nb_starts, axis=1)
    return mrg


def satisfied_from_inter(x: np.ndarray, inter: np.ndarray, inter_not: np.ndarray) -> np.ndarray:
    """Per-lane satisfaction, read off the demand signals.

    A clause is violated iff each of its literals is false; any cell of such
    a clause then sees an all-false remainder, i.e. a demand its current
    value does not meet. So x satisfies the formula iff no cell has
    (x=0, inter=1) or (x=1, inter_not=0).
    """
    return ~((~x & inter) | (x & ~inter_not)).any(axis=1)


class Kernel(Protocol):
    """One engine variant: register layout, gate probabilities and the update."""

    reg_names: tuple[str, ...]

    def gate_probs(self, n: int) -> np.ndarray:
        """``(N, 3)`` probabilities, one row per cell in gate draw order."""

    def advance(
        self, x: np.ndarray, regs: dict[str, np.ndarray], inter: np.ndarray,
        inter_not: np.ndarray, mrg: np.ndarray, fires: np.ndarray,
    ) -> tuple[np.ndarray, dict[str, np.ndarray], np.ndarray]:
        """Return ``(x', regs', flip)``."""


def initial_assignment(n: int, init, src: BernoulliSource) -> np.ndarray:
    """``init`` is "zeros", "random" (N fair draws from ``src``) or explicit bits."""
    if isinstance(init, str):
        if init == "zeros":
            return np.zeros(n, dtype=bool)
        if init == "random":
            return src.draw(np.full(n, 0.5))
        raise ValueError(f"unknown init {init!r}")
    bits = np.asarray(init, dtype=bool).ravel()
    if bits.size != n:
        raise ValueError(f"init has length {bits.size}, formula has {n} variables")
    return bits


def run_lanes(
    kernel: Kernel,
    w: WiringTable,
    sources: BatchSource,
    init,
    max_iters: int,
    stop_at_first: bool = True,
    trace: bool = False,
    validate: Callable[[np.ndarray], bool] | None = None,
) -> list[RunResult]:
    """Run every lane of ``sources`` until it first satisfies the formula or hits ``max_iters``.

    Satisfaction of x(t) is checked at every t = 0..max_iters before the
    step to t+1. With ``stop_at_first=False`` lanes keep running to
    ``max_iters`` and record each t where x(t) is satisfying and differs
    from x(t-1).
    """
    n = w.num_vars
    nl = len(sources)
    x = np.stack([initial_assignment(n, init, s) for s in sources.sources]) if nl else np.zeros((0, n), bool)
    regs = {name: np.zeros((nl, n), dtype=bool) for name in kernel.reg_names}
    probs = kernel.gate_probs(n)
    active = np.arange(nl)
    first: list[int | None] = [None] * nl
    sols: list[tuple[int, ...] | None] = [None] * nl
    hits: list[list] = [[] for _ in range(nl)]
    rows: list[list[dict]] = [[] for _ in range(nl)]
    prev_x = None
    t = 0
    while active.size:
        inter, inter_not = compute_inter(w, x)
        sat = satisfied_from_inter(x, inter, inter_not)
        changed = np.ones(active.size, dtype=bool) if prev_x is None else (x != prev_x).any(axis=1)
        for pos in np.flatnonzero(sat):
            lane = active[pos]
            bits = tuple(int(b) for b in x[pos])
            if validate is not None and not validate(x[pos]):
                raise AssertionError(f"lane {lane}: claimed solution at t={t} fails evaluation")
            if first[lane] is None:
                first[lane] = t
                sols[lane] = bits
            if changed[pos]:
                hits[lane].append((t, bits))
        done = t >= max_iters
        keep = np.ones(active.size, dtype=bool)
        if stop_at_first:
            keep &= ~sat
        if trace:
            snap = {k: v.copy() for k, v in regs.items()}
        if not done and keep.any():
            mrg = merge_contra(w, regs["contra"])
            fires = sources.draw(probs, active)
            new_x, new_regs, flip = kernel.advance(x, regs, inter, inter_not, mrg, fires)
        else:
            flip = None
        if trace:
            for pos, lane in enumerate(active):
                row = {"t": t, "x": bits_str(x[pos])}
                for k in kernel.reg_names:
                    row[k] = bits_str(snap[k][pos])
                if len(kernel.reg_names) > 1:
                    row["flip"] = bits_str(flip[pos]) if flip is not None else ""
                rows[lane].append(row)
        if done or flip is None:
            break
        prev_x = x
        x, regs = new_x, new_regs
        if not keep.all():
            x, prev_x = x[keep], prev_x[keep]
            regs = {k: v[keep] for k, v in regs.items()}
            active = active[keep]
        t += 1

    out = []
    for lane in range(nl):
        solved = first[lane] is not None
        out.append(RunResult(
            solved=solved,
            first_solution_iter=first[lane],
            solution=sols[lane],
            iterations=first[lane] if solved and stop_at_first else max_iters,
            solutions=hits[lane],
            trace=rows[lane] if trace else None,
        ))
    return out


def run_single(kernel: Kernel, w: WiringTable, src: BernoulliSource, init, max_iters: int,
               stop_at_first: bool = True, trace: bool = False,
               validate: Callable[[np.ndarray], bool] | None = None) -> RunResult:
    return run_lanes(kernel, w, BatchSource([src]), init, max_iters, stop_at_first, trace, validate)[0]


def write_trace_tsv(rows: Sequence[dict], path) -> None:
    if not rows:
        cols = ["t", "x", "contra"]
    else:
        cols = list(rows[0].keys())
    with open(path, "w") as fh:
        fh.write("\t".join(cols) + "\n")
        for r in rows:
            fh.write("\t".join(str(r[c]) for c in cols) + "\n")
