import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clambsat.cnf import CnfFormula, evaluate
from clambsat.probsat import OccIndex, ProbSatParams, break_count, pick_weighted, probsat_step, run_probsat
from clambsat.stochastic import SeededSource

from conftest import formula_and_bits, random_3sat


def _oracle_break(f, a, v):
    flipped = list(a)
    flipped[v - 1] ^= 1
    return sum(1 for c in f.clauses if c.satisfied_by(a) and not c.satisfied_by(flipped))


def test_break_examples(f2):
    a = [1, 1, 1, 1, 0]
    assert break_count(f2, OccIndex(f2, a), a, 4) == 1
    z = [0] * 5
    occ = OccIndex(f2, z)
    assert [break_count(f2, occ, z, v) for v in (1, 2, 3)] == [1, 1, 1]
    empty = CnfFormula(3)
    assert break_count(empty, OccIndex(empty, [0, 1, 0]), [0, 1, 0], 2) == 0


def test_break_requires_indexed_assignment(f2):
    with pytest.raises(ValueError):
        break_count(f2, OccIndex(f2, [0] * 5), [1] * 5, 1)


@settings(max_examples=300)
@given(formula_and_bits())
def test_break_matches_oracle(fb):
    f, a = fb
    occ = OccIndex(f, a)
    for v in range(1, f.num_vars + 1):
        assert occ.break_count(v - 1) == _oracle_break(f, a, v)


def test_f2_zeros_choice_is_uniform(f2):
    occ = OccIndex(f2, [0] * 5)
    assert occ.unsat == [0]
    counts = np.zeros(5, int)
    src = SeededSource(12)
    for _ in range(3000):
        o = OccIndex(f2, [0] * 5)
        counts[probsat_step(o, ProbSatParams(), src)] += 1
    assert counts[3:].sum() == 0
    assert all(abs(c / 3000 - 1 / 3) < 0.03 for c in counts[:3])


def test_pick_weighted_uniform_frequencies():
    w = [(0.9 + 1) ** -2.38] * 3
    src = SeededSource(99)
    picks = np.bincount([pick_weighted(w, src.random()) for _ in range(100_000)], minlength=3)
    assert np.all(np.abs(picks / 100_000 - 1 / 3) <= 0.02)


def test_break_zero_is_most_likely():
    p = ProbSatParams()
    w = [(p.eps + b) ** -p.cb for b in (0, 1, 3)]
    assert w[0] > w[1] > w[2]


def test_step_on_satisfied_state_rejected(f2):
    with pytest.raises(ValueError):
        probsat_step(OccIndex(f2, [1, 1, 1, 1, 0]), ProbSatParams(), SeededSource(0))


def test_bookkeeping_over_many_steps():
    # 1e4 flips, recounting after each; restart from a fresh random point whenever solved
    f = random_3sat(random.Random(3), 30, 140)
    src = SeededSource(21)
    occ = OccIndex(f, [int(u < 0.5) for u in src.uniform(30)])
    params = ProbSatParams()
    for _ in range(10_000):
        if not occ.unsat:
            occ = OccIndex(f, [int(u < 0.5) for u in src.uniform(30)])
            continue
        j_before = list(occ.unsat)
        x_before = list(occ.x)
        v = probsat_step(occ, params, src)
        assert sum(a != b for a, b in zip(x_before, occ.x)) == 1 and occ.x[v] != x_before[v]
        assert any(v in [k >> 1 for k in occ.clauses[j]] for j in j_before)
        assert occ.consistent()
        assert sorted(occ.unsat) == list(evaluate(f, [int(b) for b in occ.x]).unsat_clause_indices)


@settings(max_examples=100, deadline=None)
@given(formula_and_bits(), st.integers(0, 10_000))
def test_debug_run_keeps_bookkeeping(fb, seed):
    f, a = fb
    r = run_probsat(f, ProbSatParams(max_flips=200), SeededSource(seed), init=a, debug=True)
    if r.solved:
        assert evaluate(f, r.solution).satisfied


def test_satisfying_init_zero_flips(f2):
    r = run_probsat(f2, init=[1, 1, 1, 1, 0])
    assert r.solved and r.first_solution_iter == 0 and r.iterations == 0


def test_f2_solves_quickly(f2):
    ok = sum(run_probsat(f2, ProbSatParams(max_flips=1000), SeededSource(5, k), init="zeros").solved
             for k in range(500))
    assert ok >= 499


def test_unsat_times_out():
    r = run_probsat(CnfFormula.from_ints(1, [[1], [-1]]), ProbSatParams(max_flips=50), SeededSource(0))
    assert not r.solved and r.iterations == 50


def test_param_validation():
    with pytest.raises(ValueError):
        ProbSatParams(cb=0)
    with pytest.raises(ValueError):
        ProbSatParams(eps=-1)
