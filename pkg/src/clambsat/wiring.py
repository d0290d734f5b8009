"""Compile a CNF formula into per-variable cell interconnect.

Each cell i sees, for every clause it appears in, the remaining literals of
that clause (its "remainder"). Remainders of clauses holding x_i feed the
NOR/OR-merge producing inter_i; those holding ~x_i feed the OR/AND-merge
producing inter_not_i. The neighbour set carries contradiction signals.

Besides the readable ``CellWiring`` records, :class:`WiringTable` keeps flat
index arrays so the engines can evaluate all cells of many independent runs
in a handful of numpy operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cnf import CnfFormula, Literal


@dataclass(frozen=True)
class ClauseRemainder:
    clause: int
    others: tuple[Literal, ...]


@dataclass(frozen=True)
class CellWiring:
    var: int
    pos_occ: tuple[ClauseRemainder, ...]
    neg_occ: tuple[ClauseRemainder, ...]
    neighbors: tuple[int, ...]


@dataclass(frozen=True)
class _OccArrays:
    # one row per occurrence, grouped by cell in ascending order
    lit_var: np.ndarray  # (O, W) 0-based variable index; pad index = num_vars (constant 0)
    lit_neg: np.ndarray  # (O, W) bool
    starts: np.ndarray  # group start offsets of the non-empty cells
    cells: np.ndarray  # 0-based indices of the non-empty cells


def _occ_arrays(groups: Sequence[Sequence[ClauseRemainder]], num_vars: int, width: int) -> _OccArrays:
    lit_var, lit_neg, starts, cells = [], [], [], []
    for i, occs in enumerate(groups):
        if not occs:
            continue
        starts.append(len(lit_var))
        cells.append(i)
        for occ in occs:
            row_v = [lit.var - 1 for lit in occ.others] + [num_vars] * (width - len(occ.others))
            row_n = [lit.negated for lit in occ.others] + [False] * (width - len(occ.others))
            lit_var.append(row_v)
            lit_neg.append(row_n)
    return _OccArrays(
        np.array(lit_var, dtype=np.intp).reshape(-1, width),
        np.array(lit_neg, dtype=bool).reshape(-1, width),
        np.array(starts, dtype=np.intp),
        np.array(cells, dtype=np.intp),
    )


class WiringTable(Sequence[CellWiring]):
    """Sequence of CellWiring (index 0 is variable 1) plus flat arrays."""

    def __init__(self, formula: CnfFormula, cells: Sequence[CellWiring], include_self: bool = False):
        self.formula = formula
        self.num_vars = formula.num_vars
        self.include_self = include_self
        self._cells = tuple(cells)
        n = self.num_vars
        width = max(1, max((len(c) - 1 for c in formula.clauses), default=1))
        self.pos = _occ_arrays([c.pos_occ for c in self._cells], n, width)
        self.neg = _occ_arrays([c.neg_occ for c in self._cells], n, width)

        nb_idx, nb_starts, nb_cells = [], [], []
        for i, c in enumerate(self._cells):
            members = [j - 1 for j in c.neighbors]
            if include_self:
                members = sorted(set(members) | {i})
            if members:
                nb_starts.append(len(nb_idx))
                nb_cells.append(i)
                nb_idx.extend(members)
        self.nb_idx = np.array(nb_idx, dtype=np.intp)
        self.nb_starts = np.array(nb_starts, dtype=np.intp)
        self.nb_cells = np.array(nb_cells, dtype=np.intp)

    def __len__(self) -> int:
        return len(self._cells)

    def __getitem__(self, i):
        return self._cells[i]

    def neighbor_sets(self) -> list[set[int]]:
        return [set(c.neighbors) for c in self._cells]

    def dump(self) -> str:
        """Human-readable listing of every cell, for debugging."""

        def rem(r: ClauseRemainder) -> str:
            return "[" + ",".join(str(lit) for lit in r.others) + "]"

        lines = []
        for c in self._cells:
            lines.append(
                f"x{c.var}: pos={' '.join(rem(r) for r in c.pos_occ) or '-'}"
                f" neg={' '.join(rem(r) for r in c.neg_occ) or '-'}"
                f" nbrs={','.join(map(str, c.neighbors)) or '-'}"
            )
        return "\n".join(lines)


def synthesize(f: CnfFormula, include_self: bool = False) -> WiringTable:
    """Build the wiring table of ``f``.

    Occurrences are listed in clause order, neighbours in ascending order.
    ``include_self`` adds each cell to its own contradiction merge; it is
    off by default and only affects the flat arrays, not ``neighbors``.
    """
    n = f.num_vars
    pos: list[list[ClauseRemainder]] = [[] for _ in range(n)]
    neg: list[list[ClauseRemainder]] = [[] for _ in range(n)]
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for j, clause in enumerate(f.clauses):
        vs = clause.vars()
        for lit in clause.literals:
            others = tuple(o for o in clause.literals if o != lit)
            (neg if lit.negated else pos)[lit.var - 1].append(ClauseRemainder(j, others))
            nbrs[lit.var - 1].update(v for v in vs if v != lit.var)
    cells = [
        CellWiring(i + 1, tuple(pos[i]), tuple(neg[i]), tuple(sorted(nbrs[i])))
        for i in range(n)
    ]
    return WiringTable(f, cells, include_self=include_self)
