import random

from hypothesis import given, settings

from clambsat.cnf import CnfFormula
from clambsat.exact import brute_force_models, count_models

from conftest import formulas, random_3sat


def test_count_models_f1(f1):
    assert count_models(f1) == (1, (1, 1, 1, 1))


def test_count_models_unsat():
    f = CnfFormula.from_ints(1, [[1], [-1]])
    assert count_models(f) == (0, None)


def test_count_models_free_vars():
    # x3 unconstrained: the single model of x1 & x2 doubles
    f = CnfFormula.from_ints(3, [[1], [2]])
    assert count_models(f, limit=10)[0] == 2


@settings(max_examples=200)
@given(formulas(max_vars=8))
def test_count_matches_enumeration(f):
    models = brute_force_models(f)
    count, first = count_models(f, limit=1 << f.num_vars)
    assert count == len(models)
    if models:
        assert first in models


def test_bundled_unique_instance():
    from clambsat import fixtures
    count, model = count_models(fixtures.load("uf50-0100-surrogate"))
    assert count == 1
    assert "".join(map(str, model)) in fixtures._data("uf50-0100-surrogate.cnf").read_text()


def test_random_generator_shape():
    f = random_3sat(random.Random(0), 10, 42)
    assert f.num_clauses == 42 and all(len(c) == 3 for c in f.clauses)
