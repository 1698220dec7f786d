import itertools
import random

import pytest
from hypothesis import given, strategies as st

from discforge import exprdb, interp, roots
from discforge.exactnum import reduce_mod


@given(st.lists(st.integers(1, 7), min_size=1, max_size=4, unique=True), st.integers(0, 30))
def test_enumerate_monomials_against_brute_force(degrees, total):
    basis = interp.enumerate_monomials(degrees, total)
    brute = {e for e in itertools.product(*(range(total // d + 1) for d in degrees))
             if sum(a * d for a, d in zip(e, degrees)) == total}
    assert set(basis.exponents) == brute and len(basis) == len(brute)
    assert list(basis.exponents) == sorted(basis.exponents, reverse=True)


def test_enumerate_rejects_bad_degrees():
    with pytest.raises(ValueError):
        interp.enumerate_monomials([2, 0], 4)


def test_row_count_leaves_extra_rows():
    assert interp.row_count(28) >= 28 + interp.MIN_EXTRA_ROWS
    assert interp.row_count(15976) > 15976 * 1.09


@pytest.mark.parametrize("name", ["gr39", "cube2222", "gr48"])
def test_dual_points_are_dual(name):
    system = roots.root_system(name)
    rng = random.Random(3)
    per = interp._roots_per_hyperplane(name)
    for _ in range(10):
        assert interp._vanishing_roots(system, interp.sample_dual_point(name, rng)) == per
        assert interp._vanishing_roots(system, interp.sample_generic_point(name, rng)) == 0


def test_sampling_is_deterministic():
    a = [interp.sample_dual_point("gr39", random.Random(11)) for _ in range(3)]
    b = [interp.sample_dual_point("gr39", random.Random(11)) for _ in range(3)]
    assert a == b


def test_cube2222_rational_and_modular_agree():
    hd = exprdb.builtin("hd2222")
    rat = interp.interpolate("cube2222", seed=5)
    assert rat.as_expression() == hd
    for p in (1009, 1013):
        res = interp.interpolate("cube2222", "prime", p, seed=5)
        assert res.residues == [reduce_mod(hd.terms.get(e, 0), p) for e in res.basis.exponents]
        with pytest.raises(ValueError):
            res.as_expression()


def test_gr39_modular_matches_reduction():
    g = exprdb.builtin("gr39_discriminant")
    p = 10007
    res = interp.interpolate("gr39", "prime", p, seed=2)
    assert res.residues == [reduce_mod(g.terms.get(e, 0), p) for e in res.basis.exponents]


def test_gr39_discriminant_vanishes_exactly_on_the_dual():
    g = exprdb.builtin("gr39_discriminant")
    rng = random.Random(99)
    dual = [interp.sample_dual_point("gr39", rng) for _ in range(50)]
    generic = [interp.sample_generic_point("gr39", rng) for _ in range(10)]
    assert all(g.evaluate(v) == 0 for v in interp.invariant_rows("gr39", dual))
    assert all(g.evaluate(v) != 0 for v in interp.invariant_rows("gr39", generic))


def test_prime_mode_arguments():
    with pytest.raises(ValueError):
        interp.interpolate("cube2222", "prime", 1000)
    with pytest.raises(ValueError):
        interp.interpolate("cube2222", "symbolic")
    with pytest.raises(interp.InterpolationError, match="only interpolated modulo primes"):
        interp.interpolate("gr48")
    with pytest.raises(ValueError):
        interp.interpolation_family("e6")


def test_shards_resume_and_lift(tmp_path):
    primes = interp.primes_for(10)
    first = interp.run_primes("cube2222", primes[:2], tmp_path)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["1009.txt", "1013.txt"]
    stamp = (tmp_path / "1009.txt").stat().st_mtime_ns
    again = interp.run_primes("cube2222", primes, tmp_path)
    assert (tmp_path / "1009.txt").stat().st_mtime_ns == stamp
    assert [r.residues for r in again[:2]] == [r.residues for r in first]
    shards = interp.load_shards(tmp_path)
    assert [p for p, _ in shards] == primes
    with pytest.raises(interp.InterpolationError, match="need more primes"):
        interp.lift_and_certify("cube2222", shards[:4])
    # eight primes already reconstruct, but the certificate bound has 29 digits
    early = interp.lift_and_certify("cube2222", shards[:8])
    assert early.as_expression() == exprdb.builtin("hd2222") and not early.certified
    lifted = interp.lift_and_certify("cube2222", shards)
    assert lifted.certified and lifted.details["modulus"] > lifted.details["bound"]
    assert lifted.as_expression() == exprdb.builtin("hd2222")


def test_lift_rejects_inconsistent_shards():
    shards = [(1009, [0] * 16), (1013, [0] * 16)]
    with pytest.raises(interp.InterpolationError, match="duplicate"):
        interp.lift_and_certify("cube2222", [shards[0], shards[0]])
    with pytest.raises(interp.InterpolationError, match="length"):
        interp.lift_and_certify("cube2222", [(1009, [0] * 15)])
    with pytest.raises(interp.InterpolationError, match="no shards"):
        interp.lift_and_certify("cube2222", [])


def test_shard_file_errors(tmp_path):
    res = interp.interpolate("cube2222", "prime", 1009)
    path = interp.write_shard(tmp_path, res)
    assert interp.read_shard(path) == (1009, (0, 0, 0, 2), res.anchor_value, res.residues)
    path.rename(tmp_path / "1013.txt")
    with pytest.raises(ValueError, match="file name"):
        interp.load_shards(tmp_path)
    bad = tmp_path / "1013.txt"
    bad.write_text("1013\nnot an anchor\n1\n")
    with pytest.raises(ValueError, match="anchor"):
        interp.read_shard(bad)
