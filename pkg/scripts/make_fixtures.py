"""Regenerate the bundled CNF fixtures under src/clambsat/data.

The two N=50 instances stand in for SATLIB's uf50-01 and uf50-0100 when those
files are not available locally: uniform random 3-SAT with M=218, checked
satisfiable (and, for the 0100 stand-in, uniquely satisfiable) by the DPLL
model counter in clambsat.exact.
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

from clambsat.cnf import CnfFormula, write_dimacs
from clambsat.exact import count_models

DATA = Path(__file__).resolve().parents[1] / "src" / "clambsat" / "data"

F1 = [[1, 2, -3], [-2, 3, -4], [2, 3, -4], [-3, 4, -1], [3, 4, -1],
      [-4, 1, -2], [4, 1, -2], [-1, 2, -3], [1, 2, 3]]
F2 = [[1, 2, 3], [1, -2, 4], [-1, 2, 4], [-3, 4, 5]]


def random_3sat(rng: random.Random, n: int, m: int) -> list[list[int]]:
    return [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)] for _ in range(m)]


def find_instance(seed: int, want: str, n: int = 50, m: int = 218) -> tuple[CnfFormula, tuple, int]:
    """First draw from Random(seed) that is satisfiable ("sat") or has exactly one model ("unique")."""
    rng = random.Random(seed)
    tries = 0
    while True:
        tries += 1
        clauses = random_3sat(rng, n, m)
        count, model = count_models(CnfFormula.from_ints(n, clauses), limit=2)
        if (want == "sat" and count >= 1) or (want == "unique" and count == 1):
            return CnfFormula.from_ints(n, clauses), model, tries


def fig3_schedule(n: int = 5, steps: int = 10) -> str:
    """Gate outcomes for the f2 trace: 1 = the gate forces its output this draw."""
    lines = ["# f2 trace schedule: per t, per cell ascending, gates SG1 SG2 SG3",
             "# SG3 lets cell 4's flip through at t=1; SG2 forces cell 1 to 0 at t=6"]
    for t in range(steps):
        for i in range(1, n + 1):
            lines += [f"0  # t={t} cell={i} SG1", f"{int(t == 6 and i == 1)}", f"{int(not (t == 1 and i == 4))}"]
    return "\n".join(lines) + "\n"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed-sat", type=int, default=1)
    ap.add_argument("--seed-unique", type=int, default=1)
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)

    def save(name: str, f: CnfFormula, comments: list[str]) -> None:
        text = "".join(f"c {c}\n" for c in comments) + write_dimacs(f)
        (DATA / name).write_text(text)

    save("f1.cnf", CnfFormula.from_ints(4, F1), ["four-variable example with the single model 1 1 1 1"])
    save("f2.cnf", CnfFormula.from_ints(5, F2), ["five-variable example used for the trace replay"])
    (DATA / "f2_trace.sched").write_text(fig3_schedule())

    f, model, tries = find_instance(args.seed_sat, "sat")
    save("uf50-01-surrogate.cnf", f, [
        "stand-in for SATLIB uf50-01: uniform random 3-SAT, N=50 M=218, satisfiable",
        f"random.Random({args.seed_sat}), accepted draw {tries}",
    ])
    f, model, tries = find_instance(args.seed_unique, "unique")
    save("uf50-0100-surrogate.cnf", f, [
        "stand-in for SATLIB uf50-0100: uniform random 3-SAT, N=50 M=218, exactly one model",
        f"random.Random({args.seed_unique}), accepted draw {tries}",
        "model " + "".join(map(str, model)),
    ])


if __name__ == "__main__":
    main()
