"""CNF formulas: data model, DIMACS reading/writing, evaluation and polymers."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO


class CnfParseError(ValueError):
    """Malformed DIMACS input. ``line`` is the 1-based line number, if known."""

    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def value(self, bits: Sequence[int]) -> bool:
        """Truth value under ``bits`` (``bits[v-1]`` holds x_v)."""
        return bool(bits[self.var - 1]) != self.negated

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.negated)

    def __str__(self) -> str:
        return ("~x" if self.negated else "x") + str(self.var)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("empty clause")
        if len(set(self.literals)) != len(self.literals):
            raise ValueError(f"duplicate literal in clause {self}")
        if self.is_tautology(self.literals):
            raise ValueError(f"tautological clause {self}")

    @staticmethod
    def is_tautology(literals: Iterable[Literal]) -> bool:
        seen = set(literals)
        return any(-lit in seen for lit in seen)

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause":
        return cls(tuple(Literal.from_int(v) for v in lits))

    def to_ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]

    def vars(self) -> list[int]:
        return [lit.var for lit in self.literals]

    def satisfied_by(self, bits: Sequence[int]) -> bool:
        return any(lit.value(bits) for lit in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __str__(self) -> str:
        return "(" + " | ".join(str(lit) for lit in self.literals) + ")"


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()
    name: str = field(default="", compare=False)
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for c in self.clauses:
            for lit in c.literals:
                if lit.var > self.num_vars:
                    raise ValueError(f"literal {lit} exceeds num_vars={self.num_vars}")

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Iterable[int]], name: str = "") -> "CnfFormula":
        return cls(num_vars, tuple(Clause.from_ints(c) for c in clauses), name=name)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_ints(self) -> list[list[int]]:
        return [c.to_ints() for c in self.clauses]

    def num_literals(self) -> int:
        return sum(len(c) for c in self.clauses)


@dataclass(frozen=True)
class Evaluation:
    satisfied: bool
    unsat_clause_indices: tuple[int, ...]


def _normalize(lits: list[int]) -> list[int] | None:
    """Drop repeated literals, keeping first occurrence order. None for a tautology."""
    out: list[int] = []
    for v in lits:
        if -v in out:
            return None
        if v not in out:
            out.append(v)
    return out


def parse_dimacs(source: str | TextIO, name: str = "") -> CnfFormula:
    """Parse DIMACS CNF text.

    Clauses may span lines; each ends with ``0``. A line starting with ``%``
    (the SATLIB trailer) ends the clause section. Duplicate literals inside a
    clause are merged and tautological clauses are dropped; each tautology is
    reported in ``formula.warnings`` and the header count is adjusted.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    num_vars = num_clauses = None
    header_line = 0
    raw: list[tuple[list[int], int]] = []
    current: list[int] = []
    current_start = 0
    lineno = 0
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if not text or text.startswith("c"):
            continue
        if text.startswith("%"):
            break
        if text.startswith("p"):
            if num_vars is not None:
                raise CnfParseError("duplicate header", lineno)
            parts = text.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise CnfParseError(f"malformed header {text!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise CnfParseError(f"malformed header {text!r}", lineno) from None
            if num_vars < 0 or num_clauses < 0:
                raise CnfParseError(f"negative count in header {text!r}", lineno)
            header_line = lineno
            continue
        if num_vars is None:
            raise CnfParseError("clause before 'p cnf' header", lineno)
        for tok in text.split():
            try:
                v = int(tok)
            except ValueError:
                raise CnfParseError(f"bad token {tok!r}", lineno) from None
            if v == 0:
                if not current:
                    raise CnfParseError("empty clause", lineno)
                raw.append((current, current_start))
                current = []
                continue
            if abs(v) > num_vars:
                raise CnfParseError(f"literal {v} out of range 1..{num_vars}", lineno)
            if not current:
                current_start = lineno
            current.append(v)
    if num_vars is None:
        raise CnfParseError("missing 'p cnf' header", lineno or None)
    if current:
        raise CnfParseError("clause missing terminating 0", current_start)
    if len(raw) != num_clauses:
        raise CnfParseError(
            f"header declares {num_clauses} clauses, found {len(raw)}", header_line
        )

    clauses = []
    warnings = []
    for lits, start in raw:
        norm = _normalize(lits)
        if norm is None:
            warnings.append(f"line {start}: dropped tautological clause {lits}")
            continue
        clauses.append(Clause.from_ints(norm))
    return CnfFormula(num_vars, tuple(clauses), name=name, warnings=tuple(warnings))


def read_dimacs(path: str | Path) -> CnfFormula:
    path = Path(path)
    with path.open() as fh:
        return parse_dimacs(fh, name=path.stem)


def write_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    lines.extend(" ".join(map(str, c.to_ints())) + " 0" for c in f.clauses)
    return "\n".join(lines) + "\n"


def evaluate(f: CnfFormula, bits: Sequence[int]) -> Evaluation:
    if len(bits) != f.num_vars:
        raise ValueError(f"assignment has length {len(bits)}, formula has {f.num_vars} variables")
    unsat = tuple(j for j, c in enumerate(f.clauses) if not c.satisfied_by(bits))
    return Evaluation(not unsat, unsat)


def polymer(base: CnfFormula, h: int) -> CnfFormula:
    """Join ``h`` disjoint copies of ``base``; copy k renames x_v to x_{v + k*N}."""
    if h < 1:
        raise ValueError(f"polymer count must be >= 1, got {h}")
    n = base.num_vars
    clauses = tuple(
        Clause(tuple(Literal(lit.var + k * n, lit.negated) for lit in c.literals))
        for k in range(h)
        for c in base.clauses
    )
    name = base.name if h == 1 else f"{base.name or 'cnf'}x{h}"
    return CnfFormula(n * h, clauses, name=name)
