from hypothesis import given, settings

from clambsat import fixtures
from clambsat.cnf import CnfFormula, Literal, polymer
from clambsat.wiring import synthesize

from conftest import formulas


def _rems(occs):
    return [[lit.to_int() for lit in r.others] for r in occs]


def test_f2_cell1(f2):
    c = synthesize(f2)[0]
    assert c.var == 1
    assert _rems(c.pos_occ) == [[2, 3], [-2, 4]]
    assert _rems(c.neg_occ) == [[2, 4]]
    assert c.neighbors == (2, 3, 4)


def test_f2_cell5(f2):
    c = synthesize(f2)[4]
    assert _rems(c.pos_occ) == [[-3, 4]]
    assert c.neg_occ == ()
    assert c.neighbors == (3, 4)


def test_f2_neighbor_sets(f2):
    assert synthesize(f2).neighbor_sets() == [{2, 3, 4}, {1, 3, 4}, {1, 2, 4, 5}, {1, 2, 3, 5}, {3, 4}]


def test_no_clauses():
    w = synthesize(CnfFormula(2))
    assert all(c.pos_occ == () and c.neg_occ == () and c.neighbors == () for c in w)


def test_unit_clause_empty_remainder():
    w = synthesize(CnfFormula.from_ints(2, [[-1], [1, 2]]))
    assert _rems(w[0].neg_occ) == [[]]
    assert w[0].neighbors == (2,)


def test_include_self_flag_only_touches_merge(f2):
    w = synthesize(f2, include_self=True)
    assert w[0].neighbors == (2, 3, 4)
    assert 0 in set(w.nb_idx[w.nb_starts[0]:w.nb_starts[1]])


def test_occurrence_conservation_on_bundled_instance():
    f = fixtures.satlib("uf50-0100")
    w = synthesize(f)
    assert sum(len(c.pos_occ) + len(c.neg_occ) for c in w) == 218 * 3 == f.num_literals()


@settings(max_examples=300)
@given(formulas(max_vars=20, max_clauses=60))
def test_wiring_invariants(f):
    w = synthesize(f)
    assert len(w) == f.num_vars
    total = 0
    for i, c in enumerate(w, start=1):
        assert c.var == i and i not in c.neighbors
        assert list(c.neighbors) == sorted(set(c.neighbors))
        for j in c.neighbors:
            assert i in w[j - 1].neighbors
        for occs, neg in ((c.pos_occ, False), (c.neg_occ, True)):
            for r in occs:
                clause = f.clauses[r.clause]
                assert Literal(i, neg) in clause.literals
                assert len(r.others) == len(clause) - 1
                assert set(r.others) == set(clause.literals) - {Literal(i, neg)}
            assert [r.clause for r in occs] == sorted(r.clause for r in occs)
        total += len(c.pos_occ) + len(c.neg_occ)
    assert total == f.num_literals()


@settings(max_examples=100)
@given(formulas(max_vars=8, max_clauses=20))
def test_polymer_wiring_is_shifted_copies(f):
    n, m, h = f.num_vars, f.num_clauses, 3
    base = synthesize(f)
    w = synthesize(polymer(f, h))

    def shift(lits, k):
        return [[lit.to_int() + (k * n if lit.to_int() > 0 else -k * n) for lit in r.others] for r in lits]

    for k in range(h):
        for i, c in enumerate(base):
            d = w[k * n + i]
            assert d.neighbors == tuple(j + k * n for j in c.neighbors)
            assert _rems(d.pos_occ) == shift(c.pos_occ, k)
            assert _rems(d.neg_occ) == shift(c.neg_occ, k)
            assert [r.clause for r in d.pos_occ] == [r.clause + k * m for r in c.pos_occ]


def test_dump_mentions_every_cell(f2):
    text = synthesize(f2).dump()
    assert text.splitlines()[0] == "x1: pos=[x2,x3] [~x2,x4] neg=[x2,x4] nbrs=2,3,4"
    assert len(text.splitlines()) == 5
