from fractions import Fraction
import itertools
import random

import pytest
from hypothesis import given, strategies as st

from discforge.exactnum import matmul
from discforge.exterior import (
    HypercubeTensor,
    Multivector,
    apply_group_element,
    basis_keys,
    contract,
    embed_hypercube,
    format_tensor,
    load_tensor,
    merge_sign,
    parse_tensor,
    permutation_sign,
    project_to_hypercube,
    save_tensor,
    symmetrize,
    volume_dual,
    wedge,
)


def basis(n, key):
    return Multivector(n, len(key), {key: 1})


def test_unsorted_keys_pick_up_signs():
    assert Multivector(5, 3, {(2, 1, 3): 4}).entries == {(1, 2, 3): -4}
    assert not Multivector(5, 3, {(1, 1, 3): 4})
    assert permutation_sign((3, 1, 2)) == 1 and permutation_sign((2, 1)) == -1
    assert merge_sign((1, 3), (2,)) == -1 and merge_sign((1,), (1,)) == 0


@pytest.mark.parametrize("n", range(2, 9))
def test_wedge_graded_commutativity(n):
    for j, k in itertools.product(range(n + 1), repeat=2):
        if j + k > n:
            continue
        for a in basis_keys(n, j):
            for b in basis_keys(n, k):
                lhs = wedge(basis(n, a), basis(n, b))
                rhs = wedge(basis(n, b), basis(n, a)).scale((-1) ** (j * k))
                assert lhs == rhs


@pytest.mark.parametrize("n", [6, 8, 9])
def test_volume_dual_involution(n):
    for k in range(n + 1):
        for key in basis_keys(n, k):
            e = basis(n, key)
            assert volume_dual(volume_dual(e)) == e.scale((-1) ** (k * (n - k)))
            assert wedge(e, volume_dual(e)) == basis(n, tuple(range(1, n + 1)))


def test_contract_adjoint_to_wedge():
    n, j, k = 8, 6, 4
    top = basis_keys(n, j)
    for t in basis_keys(n, k - 2):
        tv = basis(n, t)
        for b in basis_keys(n, j - (k - 2)):
            bv = basis(n, b)
            lhs = wedge(tv, bv)
            for a in top:
                av = basis(n, a)
                assert contract(av, tv).pairing(bv) == av.pairing(lhs)


def test_contract_degree_and_errors():
    a = basis(5, (1, 2, 3))
    assert contract(a, basis(5, (2,))).entries == {(1, 3): -1}
    with pytest.raises(ValueError):
        contract(basis(5, (1,)), a)
    with pytest.raises(ValueError):
        wedge(basis(3, (1, 2)), basis(3, (1, 3)))


def _random_matrix(rng, n):
    return [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]


def test_group_action_is_functorial():
    rng = random.Random(11)
    keys = basis_keys(5, 2)
    for _ in range(50):
        g, h = _random_matrix(rng, 5), _random_matrix(rng, 5)
        t = Multivector(5, 2, {key: rng.randint(-3, 3) for key in keys})
        assert apply_group_element(t, matmul(g, h)) == apply_group_element(apply_group_element(t, h), g)


def test_group_action_on_vectors_is_matrix_product():
    g = [[1, 2, 0], [0, 1, 0], [3, 0, 1]]
    v = Multivector(3, 1, {(1,): 1})
    assert apply_group_element(v, g).to_vector() == [1, 0, 3]


PAIRS = ((1, 5), (2, 6), (3, 7), (4, 8))


def test_projection_kills_repeated_blocks():
    for key in basis_keys(8, 4):
        blocks = {next(j for j, b in enumerate(PAIRS) if i in b) for i in key}
        image = project_to_hypercube(basis(8, key), PAIRS)
        assert bool(image) == (len(blocks) == 4)


@given(st.lists(st.integers(-5, 5), min_size=70, max_size=70),
       st.lists(st.integers(-5, 5), min_size=70, max_size=70), st.integers(-4, 4))
def test_projection_is_linear(xs, ys, c):
    keys = basis_keys(8, 4)
    a = Multivector(8, 4, dict(zip(keys, xs)))
    b = Multivector(8, 4, dict(zip(keys, ys)))
    lhs = project_to_hypercube(a + b.scale(c), PAIRS)
    assert lhs == project_to_hypercube(a, PAIRS) + project_to_hypercube(b, PAIRS).scale(c)


def test_embed_is_right_inverse_of_project():
    rng = random.Random(3)
    x = HypercubeTensor((2, 2, 2, 2), {k: rng.randint(-5, 5) for k in itertools.product(range(2), repeat=4)})
    assert project_to_hypercube(embed_hypercube(x, PAIRS), PAIRS) == x


def test_projection_sign_follows_block_order():
    # e2 ^ e1 ^ e3 read in block order is -(e1 ^ e2 ^ e3)
    grouping = ((2, 4), (1, 5), (3, 6))
    img = project_to_hypercube(basis(6, (1, 2, 3)), grouping)
    assert img.entries == {(0, 0, 0): -1}


def test_bad_grouping():
    with pytest.raises(ValueError):
        project_to_hypercube(basis(8, (1, 2, 3, 4)), ((1, 2), (3, 4), (5, 6), (7, 7)))
    with pytest.raises(ValueError):
        project_to_hypercube(basis(6, (1, 2, 3)), ((1, 2, 3), (4, 5), (6,)))


def test_symmetrize_averages():
    x = HypercubeTensor((2, 2, 2), {(0, 0, 1): 3, (1, 0, 0): 0, (0, 1, 0): 0})
    s = symmetrize(x)
    assert s[(0, 0, 1)] == 1 and s[(0, 0, 0)] == 0 and len(s) == 4


def test_text_round_trip(tmp_path):
    t = Multivector(9, 3, {(1, 2, 3): Fraction(-2, 3), (4, 5, 6): 7})
    save_tensor(t, tmp_path / "t.txt")
    assert load_tensor(tmp_path / "t.txt") == t
    x = HypercubeTensor((2, 2, 2), {(0, 1, 1): 5})
    assert parse_tensor(format_tensor(x)) == x


@pytest.mark.parametrize("text, where", [
    ("wedge 6 3\n1 2 3 1.5\n", ":2:"),
    ("wedge 6\n", ":1:"),
    ("cube 2 2\n0 1\n", ":2:"),
    ("wedge 6 3\n1 2 9 1\n", "out of range"),
])
def test_parse_errors_name_the_line(text, where):
    with pytest.raises(ValueError, match=where):
        parse_tensor(text, "t.txt")
