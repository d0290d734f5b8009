import random

import pytest
from hypothesis import strategies as st

from clambsat import fixtures
from clambsat.cnf import CnfFormula

F2_CLAUSES = [[1, 2, 3], [1, -2, 4], [-1, 2, 4], [-3, 4, 5]]


@pytest.fixture
def f1():
    return fixtures.load("f1")


@pytest.fixture
def f2():
    return fixtures.load("f2")


@st.composite
def formulas(draw, max_vars=12, max_clauses=40, max_width=3):
    n = draw(st.integers(1, max_vars))
    m = draw(st.integers(0, max_clauses))
    clauses = []
    for _ in range(m):
        k = draw(st.integers(1, min(max_width, n)))
        vs = draw(st.lists(st.integers(1, n), min_size=k, max_size=k, unique=True))
        clauses.append([v if draw(st.booleans()) else -v for v in vs])
    return CnfFormula.from_ints(n, clauses)


@st.composite
def formula_and_bits(draw, **kw):
    f = draw(formulas(**kw))
    bits = draw(st.lists(st.integers(0, 1), min_size=f.num_vars, max_size=f.num_vars))
    return f, bits


def random_3sat(rng: random.Random, n: int, m: int) -> CnfFormula:
    clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), min(3, n))]
               for _ in range(m)]
    return CnfFormula.from_ints(n, clauses)


# criterion number -> (passed, detail), filled by test_acceptance and echoed in the summary
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
