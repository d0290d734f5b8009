"""ProbSAT baseline: break-only polynomial variant.

Each step picks a uniformly random unsatisfied clause and flips one of its
variables, chosen with probability proportional to (eps + break(v))^-cb.
Defaults cb=2.38, eps=0.9 are the usual 3-SAT setting of this solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ._sim import RunResult
from .cnf import CnfFormula, evaluate
from .stochastic import SeededSource

DEFAULT_CB = 2.38
DEFAULT_EPS = 0.9
DEFAULT_MAX_FLIPS = 1_000_000


@dataclass(frozen=True)
class ProbSatParams:
    cb: float = DEFAULT_CB
    eps: float = DEFAULT_EPS
    max_flips: int = DEFAULT_MAX_FLIPS

    def __post_init__(self):
        if self.cb <= 0:
            raise ValueError("cb must be > 0")
        if self.eps < 0:
            raise ValueError("eps must be >= 0")
        if self.max_flips < 0:
            raise ValueError("max_flips must be >= 0")

    @property
    def max_iters(self) -> int:
        return self.max_flips


class OccIndex:
    """Literal occurrence lists plus per-clause true-literal counts.

    Literals are keyed ``2*(v-1) + negated``. ``unsat`` holds the currently
    violated clauses; ``unsat_pos`` maps each of them to its slot so removal
    is O(1).
    """

    def __init__(self, f: CnfFormula, bits: Sequence[int]):
        if len(bits) != f.num_vars:
            raise ValueError("assignment length does not match the formula")
        self.formula = f
        self.x = [bool(b) for b in bits]
        self.clauses = [[2 * (lit.var - 1) + lit.negated for lit in c.literals] for c in f.clauses]
        self.occ: list[list[int]] = [[] for _ in range(2 * f.num_vars)]
        for j, c in enumerate(self.clauses):
            for key in c:
                self.occ[key].append(j)
        self.num_true = [0] * len(self.clauses)
        self.unsat: list[int] = []
        self.unsat_pos: dict[int, int] = {}
        self.recount()

    def lit_true(self, key: int) -> bool:
        return self.x[key >> 1] != bool(key & 1)

    def recount(self) -> None:
        self.unsat.clear()
        self.unsat_pos.clear()
        for j, c in enumerate(self.clauses):
            n = sum(self.lit_true(k) for k in c)
            self.num_true[j] = n
            if n == 0:
                self._add_unsat(j)

    def full_recount(self) -> list[int]:
        return [sum(self.lit_true(k) for k in c) for c in self.clauses]

    def consistent(self) -> bool:
        return (self.num_true == self.full_recount()
                and sorted(self.unsat) == [j for j, n in enumerate(self.num_true) if n == 0])

    def _add_unsat(self, j: int) -> None:
        self.unsat_pos[j] = len(self.unsat)
        self.unsat.append(j)

    def _remove_unsat(self, j: int) -> None:
        pos = self.unsat_pos.pop(j)
        last = self.unsat.pop()
        if last != j:
            self.unsat[pos] = last
            self.unsat_pos[last] = pos

    def true_key(self, v: int) -> int:
        """Key of the literal of variable index ``v`` (0-based) that is currently true."""
        return 2 * v + (not self.x[v])

    def break_count(self, v: int) -> int:
        nt = self.num_true
        return sum(1 for j in self.occ[self.true_key(v)] if nt[j] == 1)

    def flip(self, v: int) -> None:
        made = self.true_key(v) ^ 1
        lost = made ^ 1
        self.x[v] = not self.x[v]
        nt = self.num_true
        for j in self.occ[lost]:
            nt[j] -= 1
            if nt[j] == 0:
                self._add_unsat(j)
        for j in self.occ[made]:
            if nt[j] == 0:
                self._remove_unsat(j)
            nt[j] += 1


def break_count(f: CnfFormula, occ: OccIndex, a: Sequence[int], v: int) -> int:
    """Clauses satisfied under ``a`` that flipping variable ``v`` (1-based) would falsify."""
    if [int(b) for b in a] != [int(b) for b in occ.x]:
        raise ValueError("assignment is not the one indexed by occ")
    return occ.break_count(v - 1)


def pick_weighted(weights: Sequence[float], u: float) -> int:
    """Index i with probability weights[i]/sum, driven by one uniform ``u`` in [0, 1)."""
    target = u * sum(weights)
    acc = 0.0
    for i, wt in enumerate(weights):
        acc += wt
        if target < acc:
            return i
    return len(weights) - 1


def probsat_step(occ: OccIndex, params: ProbSatParams, src: SeededSource) -> int:
    """Flip one variable of a random unsatisfied clause; returns its 0-based index."""
    if not occ.unsat:
        raise ValueError("probsat_step called on a satisfying assignment")
    j = occ.unsat[min(int(src.random() * len(occ.unsat)), len(occ.unsat) - 1)]
    vs = [key >> 1 for key in occ.clauses[j]]
    weights = [(params.eps + occ.break_count(v)) ** -params.cb for v in vs]
    v = vs[pick_weighted(weights, src.random())]
    occ.flip(v)
    return v


def run_probsat(f: CnfFormula, params: ProbSatParams | None = None, src: SeededSource | None = None,
                init="random", debug: bool = False) -> RunResult:
    """Flip until satisfied. ``init`` is "random" (N fair draws), "zeros" or explicit bits."""
    params = params or ProbSatParams()
    src = src if src is not None else SeededSource(0, 0)
    n = f.num_vars
    if isinstance(init, str):
        if init == "random":
            bits = [int(u < 0.5) for u in src.uniform(n)]
        elif init == "zeros":
            bits = [0] * n
        else:
            raise ValueError(f"unknown init {init!r}")
    else:
        bits = [int(b) for b in init]
    occ = OccIndex(f, bits)
    flips = 0
    while occ.unsat and flips < params.max_flips:
        probsat_step(occ, params, src)
        flips += 1
        if debug and not occ.consistent():
            raise AssertionError(f"incremental bookkeeping diverged after {flips} flips")
    if occ.unsat:
        return RunResult(False, None, None, params.max_flips)
    sol = tuple(int(b) for b in occ.x)
    if not evaluate(f, sol).satisfied:
        raise AssertionError("ProbSAT reported an assignment that does not satisfy the formula")
    return RunResult(True, flips, sol, flips, solutions=[(flips, sol)])
