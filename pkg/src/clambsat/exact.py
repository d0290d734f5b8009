"""Complete checks for small instances: exhaustive enumeration and a DPLL model counter.

These are reference tools for tests and fixture generation, independent of
the circuit engines.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator

from .cnf import CnfFormula


def all_assignments(n: int) -> Iterator[tuple[int, ...]]:
    return product((0, 1), repeat=n)


def brute_force_models(f: CnfFormula) -> list[tuple[int, ...]]:
    """Every satisfying assignment, by direct clause-wise evaluation of all 2^N."""
    clauses = f.to_ints()
    out = []
    for bits in all_assignments(f.num_vars):
        if all(any((bits[abs(v) - 1] == 1) == (v > 0) for v in c) for c in clauses):
            out.append(bits)
    return out


def count_models(f: CnfFormula, limit: int = 2) -> tuple[int, tuple[int, ...] | None]:
    """Count models up to ``limit`` with DPLL and unit propagation.

    Returns ``(min(count, limit), first model or None)``; a count of
    ``limit`` means "at least limit".
    """
    n = f.num_vars
    found: list[tuple[int, ...]] = []
    count = 0

    def assign(clauses, lit):
        out = []
        for c in clauses:
            if lit in c:
                continue
            if -lit in c:
                c = [v for v in c if v != -lit]
                if not c:
                    return None
            out.append(c)
        return out

    def rec(clauses, fixed):
        nonlocal count
        if count >= limit:
            return
        while True:
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            fixed = fixed | {unit}
            clauses = assign(clauses, unit)
            if clauses is None:
                return
        if not clauses:
            free = n - len(fixed)
            if not found:
                vals = {abs(v): int(v > 0) for v in fixed}
                found.append(tuple(vals.get(v, 0) for v in range(1, n + 1)))
            count += 1 << free
            return
        tally: dict[int, int] = {}
        for c in clauses:
            for v in c:
                tally[abs(v)] = tally.get(abs(v), 0) + 1
        var = max(tally, key=lambda v: (tally[v], -v))
        for lit in (var, -var):
            sub = assign(clauses, lit)
            if sub is not None:
                rec(sub, fixed | {lit})

    rec(f.to_ints(), frozenset())
    return min(count, limit), (found[0] if found else None)
