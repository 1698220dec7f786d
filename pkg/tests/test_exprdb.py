from fractions import Fraction
import itertools
import random

import pytest
from hypothesis import given, strategies as st

from discforge import exprdb, invariants, roots
from discforge.exterior import HypercubeTensor, embed_hypercube


@pytest.mark.parametrize("name, terms, degree", [
    ("gr39_discriminant", 28, 120),
    ("hd2222", 16, 24),
    ("f10_relation", 4, 10),
    ("f14_relation", 7, 14),
    ("f18_relation", 10, 18),
    ("delta222", 12, 4),
    ("gr36_dual", 85, 4),
    ("binary_cubic_disc", 5, 4),
])
def test_builtins_are_homogeneous(name, terms, degree):
    expr = exprdb.builtin(name)
    assert len(expr) == terms
    assert expr.degree == degree


def test_unknown_builtin():
    with pytest.raises(exprdb.ExpressionError, match="known"):
        exprdb.builtin("e9")


def test_save_load_round_trip(tmp_path):
    for name in exprdb.builtin_names():
        expr = exprdb.builtin(name)
        path = exprdb.save(expr, tmp_path / f"{name}.txt")
        loader = exprdb.load if isinstance(expr, exprdb.InvariantExpression) else exprdb.load_coordinate_polynomial
        assert loader(path) == expr
        assert path.read_text() == expr.format()


@pytest.mark.parametrize("body, message", [
    ("generators: f2:2 f6:6\ndegree: 6\n3 0 1.5\n", "malformed rational literal"),
    ("generators: f2:2 f6:6\ndegree: 6\n3 0 1e3\n", "malformed rational literal"),
    ("generators: f2:2 f6:6\ndegree: 6\n3 0 1\n1 0 2\n", "weighted degree"),
    ("generators: f2:2 f6:6\ndegree: 6\n3 1\n", "exponents"),
    ("degree: 6\n3 0 1\n", "generators"),
])
def test_parse_errors_carry_line_numbers(tmp_path, body, message):
    path = tmp_path / "bad.txt"
    path.write_text(body)
    with pytest.raises(exprdb.ExpressionError, match=message) as info:
        exprdb.load(path)
    assert "bad.txt" in str(info.value)


def test_evaluation_accepts_names_degrees_and_sequences():
    hd = exprdb.builtin("hd2222")
    vals = roots.family_invariants("cube2222", [1, 2, 3, 5])
    by_name = {f"f{d}": v for d, v in vals.items()}
    assert hd.evaluate(vals) == hd.evaluate(by_name) == hd.evaluate([vals[d] for d in (2, 6, 8, 12)])
    p = 1009
    from discforge.exactnum import reduce_mod
    assert hd.evaluate_mod([reduce_mod(vals[d], p) for d in (2, 6, 8, 12)], p) == reduce_mod(hd.evaluate(vals), p)
    with pytest.raises(exprdb.ExpressionError):
        hd.evaluate({2: 1})


def test_coefficient_lookup():
    g = exprdb.builtin("gr39_discriminant")
    assert g.coefficient({"f12": 10}) == 1
    assert g.coefficient((10, 0, 0, 0)) == 1
    assert g.coefficient({"f18": 1}) == 0


def _rank_one(rng):
    a, b, c = ([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(2)] for _ in range(3))
    return HypercubeTensor((2, 2, 2), {(i, j, k): a[i] * b[j] * c[k]
                                       for i, j, k in itertools.product(range(2), repeat=3)})


def test_delta222_vanishes_on_rank_one_tensors():
    rng = random.Random(8)
    delta = exprdb.builtin("delta222")
    for _ in range(10):
        assert delta.evaluate_tensor(_rank_one(rng)) == 0
    dense = HypercubeTensor((2, 2, 2), {k: rng.randint(1, 9) for k in itertools.product(range(2), repeat=3)})
    assert delta.evaluate_tensor(dense) != 0


def test_delta222_of_the_diagonal_tensor():
    # x000 + x111 has hyperdeterminant 1
    assert exprdb.builtin("delta222").evaluate_tensor(HypercubeTensor((2, 2, 2), {(0, 0, 0): 1, (1, 1, 1): 1})) == 1


@pytest.mark.parametrize("name", ["f10_relation", "f14_relation", "f18_relation"])
def test_relations_on_hypercube_tensors(name):
    rng = random.Random(hash(name) % 1000)
    rel = exprdb.builtin(name)
    for _ in range(20):
        x = HypercubeTensor((2,) * 4, {k: rng.randint(-4, 4) for k in itertools.product(range(2), repeat=4)})
        vals = invariants.trace_invariants("gr48", embed_hypercube(x, roots.GR48_PAIRS))
        assert rel.evaluate(vals) == 0


def test_substitute_validation():
    delta = exprdb.builtin("delta222")
    with pytest.raises(exprdb.ExpressionError, match="misses"):
        exprdb.substitute(delta, {"x000": "y"})


@given(st.lists(st.integers(-6, 6), min_size=8, max_size=8), st.sampled_from([-2, -1, 2, 3]))
def test_substitute_is_multiplicative(values, scale):
    delta = exprdb.builtin("delta222")
    names = delta.names
    scaled = exprdb.substitute(delta, {n: (scale, n) for n in names})
    point = dict(zip(names, values))
    assert scaled.evaluate(point) == scale ** 4 * delta.evaluate(point)
    # renaming every variable to one symbol collapses to the coefficient sum
    collapsed = exprdb.substitute(delta, {n: "u" for n in names})
    assert collapsed.evaluate({"u": 1}) == sum(delta.terms.values())


def test_projection_map_shape():
    m = exprdb.projection_gr36_to_222()
    assert len(m) == 20
    assert sum(v is not None for v in m.values()) == 8
    assert m["p123"] == (1, "x000") and m["p456"] == (1, "x111")
    assert m["p126"] == (1, "x001") and m["p124"] is None


def test_gr48_anchor_constants():
    from discforge.interp import GR48_ANCHOR_VALUE
    assert exprdb.GR48_ANCHORS[(0, 0, 0, 0, 0, 0, 7)] == GR48_ANCHOR_VALUE
