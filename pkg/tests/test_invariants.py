from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from discforge import exprdb, invariants, roots
from discforge.exterior import Multivector, basis_keys


def random_tensor(rng, n, k, size=3):
    keys = basis_keys(n, k)
    return Multivector(n, k, dict(zip(keys, (rng.randint(-size, size) for _ in keys))))


@pytest.mark.parametrize("family", ["gr36", "gr39", "gr48"])
def test_stored_calibration_matches_fresh_fit(family):
    stored = invariants.load_calibration(family)
    assert invariants.calibrate(family, seed=3) == stored
    assert invariants.parse_calibration(stored.format()) == stored


def test_calibration_shapes():
    gr36 = invariants.load_calibration("gr36")
    assert gr36.scalars() == {4: 6} and gr36.is_scalar
    gr39 = invariants.load_calibration("gr39")
    assert gr39.relabel == (0, 2, 1, 3)
    assert gr39.scalars() == {12: 1512, 18: -39312, 24: 9576, 30: -49140}
    gr48 = invariants.load_calibration("gr48")
    assert not gr48.is_scalar
    assert gr48.scalars() == {2: 12, 6: -24, 8: Fraction(16, 5), 10: -24, 12: Fraction(-8, 5),
                              14: Fraction(116, 271), 18: Fraction(-29496, 55829)}
    assert gr48.entries[6].correction == {(3,): 60}
    assert [len(gr48.entries[d].correction) for d in gr48.degrees] == [0, 1, 2, 3, 5, 7, 13]


def test_scalar_mode_refuses_gr48():
    with pytest.raises(invariants.CalibrationError, match="degree 6"):
        invariants.calibrate("gr48", mode="scalar")


def test_gr36_trace_squared_is_six_times_dual():
    rng = random.Random(2)
    dual = exprdb.builtin("gr36_dual")
    for _ in range(10):
        t = random_tensor(rng, 6, 3)
        assert invariants.raw_traces("gr36", t, [2])[2] == 6 * dual.evaluate_tensor(t)


@settings(max_examples=10)
@given(st.sampled_from(["gr36", "gr39", "gr48"]), st.fractions(min_value=-5, max_value=5, max_denominator=4),
       st.integers(0, 10**6))
def test_scaling_covariance(family, c, seed):
    n, k = invariants.FAMILY_FORMATS[family]
    t = random_tensor(random.Random(seed), n, k, size=2)
    base = invariants.trace_invariants(family, t).values
    scaled = invariants.trace_invariants(family, t.scale(c)).values
    assert scaled == {d: c ** d * v for d, v in base.items()}


def test_gr39_values_are_rational_on_semisimple_points():
    rng = random.Random(4)
    z = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)]
    vals = invariants.trace_invariants("gr39", roots.semisimple_tensor("gr39", z)).values
    assert all(isinstance(v, Fraction) for v in vals.values())
    assert vals == roots.invariant_values(roots.e8_restricted_roots(), [z[0], z[2], z[1], z[3]])


def test_matrix_dimensions():
    t = roots.semisimple_tensor("gr39", [1, 2, 3, 4])
    m = invariants.invariant_matrix("gr39", t)
    assert m.dimension == 84
    m48 = invariants.invariant_matrix("gr48", roots.semisimple_tensor("gr48", [1] * 7))
    assert m48.dimension == 28   # acts on 2-forms


def test_format_checks():
    with pytest.raises(ValueError):
        invariants.trace_invariants("gr48", Multivector(8, 3))
    with pytest.raises(ValueError):
        invariants.trace_invariants("e8", Multivector(8, 4))


def test_values_format():
    vals = invariants.trace_invariants("gr36", Multivector(6, 3, {(1, 2, 3): 1, (4, 5, 6): 1}))
    assert vals.format().strip() == "f_4 = 1"


def test_calibration_parse_errors():
    with pytest.raises(ValueError, match="cal.txt:2:"):
        invariants.parse_calibration("family: gr36\ndegree four\n", "cal.txt")


def test_missing_calibration(monkeypatch, tmp_path):
    monkeypatch.setenv("DISCFORGE_DATA", str(tmp_path))
    monkeypatch.setattr(invariants, "_loaded", {})
    monkeypatch.setattr(invariants, "_PACKAGE_DATA", tmp_path / "nothing")
    with pytest.raises(invariants.CalibrationError, match="not calibrated"):
        invariants.load_calibration("gr36")
