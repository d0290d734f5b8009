"""Bundled CNF instances and the stand-ins used when SATLIB files are absent.

``load("f2")`` reads a packaged instance. ``satlib("uf50-0100")`` prefers
``$CLAMBSAT_SATLIB_DIR/uf50-0100.cnf`` and falls back to the bundled random
instance of the same size (see scripts/make_fixtures.py for how they were
drawn).
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .cnf import CnfFormula, parse_dimacs, read_dimacs
from .stochastic import ScriptedSource

SATLIB_ENV = "CLAMBSAT_SATLIB_DIR"
BUILTIN_PREFIX = "builtin:"


def _data(name: str):
    return resources.files(__package__).joinpath("data", name)


def names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files(__package__).joinpath("data").iterdir()
                  if p.name.endswith(".cnf"))


def load(name: str) -> CnfFormula:
    res = _data(name if name.endswith(".cnf") else name + ".cnf")
    if not res.is_file():
        raise FileNotFoundError(f"no bundled instance {name!r}; available: {', '.join(names())}")
    return parse_dimacs(res.read_text(), name=name.removesuffix(".cnf"))


def satlib(name: str) -> CnfFormula:
    """The real SATLIB file if ``$CLAMBSAT_SATLIB_DIR`` holds it, else the bundled stand-in."""
    root = os.environ.get(SATLIB_ENV)
    if root and (Path(root) / f"{name}.cnf").is_file():
        return read_dimacs(Path(root) / f"{name}.cnf")
    return load(f"{name}-surrogate")


def is_surrogate(f: CnfFormula) -> bool:
    return f.name.endswith("-surrogate")


def trace_schedule() -> ScriptedSource:
    """Gate outcomes reproducing the f2 trace (1 = the gate forces its output)."""
    return ScriptedSource.from_text(_data("f2_trace.sched").read_text())


def resolve(source: str | os.PathLike) -> CnfFormula:
    """A file path, or ``builtin:NAME`` for a packaged instance."""
    s = str(source)
    if s.startswith(BUILTIN_PREFIX):
        return load(s[len(BUILTIN_PREFIX):])
    return read_dimacs(s)
