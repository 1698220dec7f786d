"""Fundamental invariants as traces of powers of tensor-dependent matrices.

Three constructions are provided.  ``dual`` turns a k-vector into an
(n-k)-form through the volume form; contracting that form into ``T`` keeps
every construction SL-equivariant:

* ``gr36_matrix``: ``v -> contract(T, dual(T ^ v))`` on vectors of a 6-space,
* ``gr48_matrix``: ``v -> contract(T, dual(v ^ T))`` on 2-vectors of an 8-space,
* ``gr39_matrix``: an 84 x 84 matrix cubic in ``T``, whose rows are indexed
  by 3-subsets ``I`` of {1..9}; row ``I`` is the 3-vector
  ``sum eps(L, I, j, K) T_L * (u_K ^ T_j)``, where ``L`` is a 3-subset,
  ``j`` a single index and ``K`` a 2-subset partitioning the complement of
  ``I``, ``u_K = T(., k1, k2)`` and ``T_j = T(j, ., .)``.

Raw traces are turned into the normalized power-sum invariants by a
calibration, fitted once per family against the root power sums on
semi-simple elements.  In general the trace of a power is a multiple of
the power sum of the same degree plus a polynomial in lower-degree
invariants, so the calibration is triangular: a scale plus a correction.
"""

from __future__ import annotations

import itertools
import logging
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import roots
from .exactnum import as_fraction, format_rational, parse_rational
from .exterior import Multivector, basis_keys, contract, permutation_sign, volume_dual, wedge
from .interp import enumerate_monomials
from .linalg import nullspace_rational

log = logging.getLogger(__name__)

FAMILY_FORMATS = {"gr36": (6, 3), "gr39": (9, 3), "gr48": (8, 4)}
FAMILY_DEGREES = {"gr36": (4,), "gr39": roots.GR39_DEGREES, "gr48": roots.GR48_DEGREES}
# trace power for each degree: deg(f_d) = d = (matrix entry degree) * n
ENTRY_DEGREE = {"gr36": 2, "gr39": 3, "gr48": 2}


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class InvariantMatrix:
    family: str
    entries: np.ndarray      # integer object array
    denominator: int = 1     # true matrix = entries / denominator

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def as_fractions(self) -> list[list[Fraction]]:
        d = self.denominator
        return [[Fraction(int(x), d) for x in row] for row in self.entries]

    def trace_powers(self, powers: Sequence[int]) -> dict[int, Fraction]:
        raw = trace_powers(self.entries, powers)
        return {n: Fraction(v, self.denominator ** n) for n, v in raw.items()}


@dataclass(frozen=True)
class FundamentalInvariantValues:
    family: str
    values: dict[int, Fraction]

    def __post_init__(self):
        expected = set(FAMILY_DEGREES.get(self.family, self.values))
        if set(self.values) != expected:
            raise ValueError(f"{self.family} invariants need degrees {sorted(expected)}")

    def __getitem__(self, d: int) -> Fraction:
        return self.values[d]

    def by_name(self) -> dict[str, Fraction]:
        return {f"f{d}": v for d, v in self.values.items()}

    def format(self) -> str:
        return "\n".join(f"f_{d} = {format_rational(v)}" for d, v in sorted(self.values.items()))


# ---------------------------------------------------------------------------
# matrices


def _check_format(family: str, t: Multivector):
    n, k = FAMILY_FORMATS[family]
    if not isinstance(t, Multivector) or (t.n, t.k) != (n, k):
        raise ValueError(f"{family} needs a tensor in wedge {n} {k}")


def _integral(t: Multivector) -> tuple[dict[tuple[int, ...], int], int]:
    den = lcm(*(v.denominator for _, v in t.items())) if len(t) else 1
    return {key: int(v * den) for key, v in t.items()}, den


def _dense(t: dict[tuple[int, ...], int], n: int, k: int) -> np.ndarray:
    arr = np.zeros((n,) * k, dtype=object)
    arr.fill(0)
    for key, v in t.items():
        for perm in itertools.permutations(range(k)):
            idx = tuple(key[i] - 1 for i in perm)
            arr[idx] = permutation_sign(perm) * v
    return arr


def _matrix_of(family: str, t: Multivector, maps: Callable[[Multivector], Multivector],
               n: int, k: int) -> InvariantMatrix:
    ints, den = _integral(t)
    ti = Multivector(t.n, t.k, ints)
    keys = basis_keys(n, k)
    index = {key: i for i, key in enumerate(keys)}
    m = np.zeros((len(keys), len(keys)), dtype=object)
    m.fill(0)
    for j, key in enumerate(keys):
        image = maps(ti, Multivector(n, k, {key: 1}))
        for out_key, v in image.items():
            m[index[out_key], j] = int(v)
    return InvariantMatrix(family, m, den ** ENTRY_DEGREE[family])


def gr36_matrix(t: Multivector) -> InvariantMatrix:
    """Matrix of ``v -> contract(T, dual(T ^ v))`` on the 6-space."""
    _check_format("gr36", t)
    return _matrix_of("gr36", t, lambda T, v: contract(T, volume_dual(wedge(T, v))), 6, 1)


def gr48_matrix(t: Multivector) -> InvariantMatrix:
    """Matrix of ``v -> contract(T, dual(v ^ T))`` on 2-vectors of the 8-space."""
    _check_format("gr48", t)
    return _matrix_of("gr48", t, lambda T, v: contract(T, volume_dual(wedge(v, T))), 8, 2)


@lru_cache(maxsize=None)
def _gr39_pattern():
    """For each row I: list of (sign, L, j, K) with L|I|j|K a permutation of 1..9."""
    keys = basis_keys(9, 3)
    pattern = []
    for key in keys:
        rest = [i for i in range(1, 10) if i not in key]
        terms = []
        for L in itertools.combinations(rest, 3):
            rest2 = [i for i in rest if i not in L]
            for j in rest2:
                K = tuple(i for i in rest2 if i != j)
                s = permutation_sign(L + key + (j,) + K)
                terms.append((s, L, j, K))
        pattern.append(terms)
    return keys, pattern


def gr39_matrix(t: Multivector) -> InvariantMatrix:
    """The 84 x 84 cubic matrix, built only from nonzero entries of ``T``."""
    _check_format("gr39", t)
    ints, den = _integral(t)
    dense = _dense(ints, 9, 3)
    keys, pattern = _gr39_pattern()
    M = np.array([k[0] - 1 for k in keys])
    N = np.array([k[1] - 1 for k in keys])
    P = np.array([k[2] - 1 for k in keys])
    wedge_cache: dict[tuple[int, tuple[int, int]], np.ndarray] = {}

    def u_wedge_tj(j, K):
        got = wedge_cache.get((j, K))
        if got is None:
            u = dense[:, K[0] - 1, K[1] - 1]
            w = dense[j - 1]
            got = u[M] * w[N, P] + u[N] * w[P, M] + u[P] * w[M, N]
            wedge_cache[(j, K)] = got
        return got

    out = np.zeros((84, 84), dtype=object)
    out.fill(0)
    for row, terms in enumerate(pattern):
        acc = None
        for s, L, j, K in terms:
            tl = ints.get(L)
            if not tl:
                continue
            contrib = u_wedge_tj(j, K) * (s * tl)
            acc = contrib if acc is None else acc + contrib
        if acc is not None:
            out[row] = acc
    return InvariantMatrix("gr39", out, den ** 3)


MATRIX_BUILDERS = {"gr36": gr36_matrix, "gr39": gr39_matrix, "gr48": gr48_matrix}


def invariant_matrix(family: str, t: Multivector) -> InvariantMatrix:
    try:
        return MATRIX_BUILDERS[family](t)
    except KeyError:
        raise ValueError(f"no invariant matrix for family {family!r}") from None


def trace_powers(m: np.ndarray, powers: Sequence[int]) -> dict[int, int]:
    """Exact ``tr(M^n)`` for an integer object matrix, using ``tr(AB) = sum(A * B.T)``."""
    powers = sorted(set(powers))
    if not powers:
        return {}
    top = max(1, (max(powers) + 1) // 2)
    mats = {1: m}
    for k in range(2, top + 1):
        mats[k] = mats[k // 2].dot(mats[k - k // 2])
    out = {}
    for n in powers:
        if n == 0:
            out[n] = m.shape[0]
            continue
        a = n // 2
        b = n - a
        if a == 0:
            out[n] = int(sum(m[i, i] for i in range(m.shape[0])))
        else:
            out[n] = int((mats[a] * mats[b].T).sum())
    return out


def raw_traces(family: str, t: Multivector, powers: Sequence[int] | None = None) -> dict[int, Fraction]:
    if powers is None:
        powers = [d // ENTRY_DEGREE[family] for d in FAMILY_DEGREES[family]]
    return invariant_matrix(family, t).trace_powers(powers)


# ---------------------------------------------------------------------------
# calibration


@dataclass(frozen=True)
class DegreeCalibration:
    degree: int
    power: int
    scale: Fraction
    correction: dict[tuple[int, ...], Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class Calibration:
    family: str
    degrees: tuple[int, ...]
    relabel: tuple[int, ...]
    entries: dict[int, DegreeCalibration]

    def scalars(self) -> dict[int, Fraction]:
        return {d: c.scale for d, c in self.entries.items()}

    @property
    def is_scalar(self) -> bool:
        return all(not c.correction for c in self.entries.values())

    def apply(self, traces: dict[int, Fraction]) -> dict[int, Fraction]:
        """Turn raw traces (keyed by power) into normalized invariants (keyed by degree)."""
        values: dict[int, Fraction] = {}
        for d in self.degrees:
            c = self.entries[d]
            lower = [dd for dd in self.degrees if dd < d]
            acc = traces[c.power]
            for exp, coeff in c.correction.items():
                term = coeff
                for dd, e in zip(lower, exp):
                    if e:
                        term *= values[dd] ** e
                acc -= term
            values[d] = acc / c.scale
        return values

    def format(self) -> str:
        lines = [f"family: {self.family}",
                 "degrees: " + " ".join(map(str, self.degrees)),
                 "relabel: " + " ".join(str(i + 1) for i in self.relabel)]
        for d in self.degrees:
            c = self.entries[d]
            lines.append(f"degree {d} power {c.power} scale {format_rational(c.scale)}")
            for exp, coeff in c.correction.items():
                lines.append("  " + " ".join(map(str, exp)) + " " + format_rational(coeff))
        return "\n".join(lines) + "\n"


def parse_calibration(text: str, source: str = "<string>") -> Calibration:
    family = None
    degrees: tuple[int, ...] = ()
    relabel: tuple[int, ...] = ()
    entries: dict[int, DegreeCalibration] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("family:"):
                family = line.split(":", 1)[1].strip()
            elif line.startswith("degrees:"):
                degrees = tuple(int(x) for x in line.split(":", 1)[1].split())
            elif line.startswith("relabel:"):
                relabel = tuple(int(x) - 1 for x in line.split(":", 1)[1].split())
            elif line.startswith("degree "):
                parts = line.split()
                d, power, scale = int(parts[1]), int(parts[3]), parse_rational(parts[5])
                current = DegreeCalibration(d, power, scale, {})
                entries[d] = current
            else:
                parts = line.split()
                current.correction[tuple(int(x) for x in parts[:-1])] = parse_rational(parts[-1])
        except (ValueError, IndexError, AttributeError) as exc:
            raise ValueError(f"{source}:{lineno}: cannot parse calibration line {raw!r}") from exc
    if family is None or set(entries) != set(degrees):
        raise ValueError(f"{source}: incomplete calibration")
    return Calibration(family, degrees, relabel, entries)


def _reference(family: str, relabel: tuple[int, ...]):
    """Sampler returning (tensor, reference invariant values) for a family."""
    if family == "gr36":
        from .exprdb import builtin

        dual = builtin("gr36_dual")
        keys = basis_keys(6, 3)

        def sample(rng):
            coeffs = [rng.randint(-3, 3) for _ in keys]
            t = Multivector(6, 3, dict(zip(keys, coeffs)))
            return t, {4: dual.evaluate_tensor(t)}
        return sample

    system = roots.e8_restricted_roots() if family == "gr39" else roots.e7_restricted_roots()
    size = len(system.variables)

    def sample(rng):
        c = [rng.randint(-9, 9) for _ in range(size)]
        t = roots.semisimple_tensor(family, c)
        return t, roots.invariant_values(system, [c[i] for i in relabel])
    return sample


def _lower_monomials(degrees: Sequence[int], d: int) -> list[tuple[int, ...]]:
    lower = [x for x in degrees if x < d]
    if not lower:
        return []
    return list(enumerate_monomials(lower, d).exponents)


def _fit(samples, degrees, family, d, scalar_only, extra=3):
    power = d // ENTRY_DEGREE[family]
    lower = [x for x in degrees if x < d]
    monos = [] if scalar_only else _lower_monomials(degrees, d)
    rows = []
    for traces, ref in samples:
        row = [ref[d]]
        for exp in monos:
            v = Fraction(1)
            for dd, e in zip(lower, exp):
                v *= ref[dd] ** e
            row.append(v)
        row.append(-traces[power])
        rows.append(row)
    ns = nullspace_rational(rows)
    ns = [v for v in ns if v[-1]]
    if len(ns) != 1 or not ns[0][0]:
        raise CalibrationError(f"{family}: degree {d} trace is not "
                               + ("a multiple of" if scalar_only else "triangular over")
                               + " the normalized power sum")
    v = ns[0]
    v = [x / v[-1] for x in v[:-1]]
    return DegreeCalibration(d, power, v[0], {e: c for e, c in zip(monos, v[1:]) if c})


def _relabel_candidates(family: str):
    if family != "gr39":
        yield tuple(range({"gr36": 0, "gr48": 7}[family]))
        return
    seen = set()
    for perm in [(0, 1, 2, 3), (0, 2, 1, 3)] + list(itertools.permutations(range(4))):
        if perm not in seen:
            seen.add(perm)
            yield perm


def calibrate(family: str, mode: str = "auto", seed: int = 0,
              checks: int = 3) -> Calibration:
    """Fit raw traces to the normalized power-sum invariants.

    ``mode="scalar"`` demands ``tr(M^n) = lambda_d f_d`` for every degree and
    raises :class:`CalibrationError` otherwise.  ``mode="triangular"`` allows a
    correction polynomial in lower-degree invariants.  ``mode="auto"`` tries
    scalar first.  For gr39 the coordinates are relabeled by the first
    permutation that makes the lowest degree consistent.
    """
    if family not in FAMILY_FORMATS:
        raise ValueError(f"no trace invariants for family {family!r}")
    if mode == "auto":
        try:
            return calibrate(family, "scalar", seed, checks)
        except CalibrationError:
            log.info("%s: scalar calibration failed, allowing lower-degree corrections", family)
            return calibrate(family, "triangular", seed, checks)
    if mode not in ("scalar", "triangular"):
        raise ValueError("mode must be 'auto', 'scalar' or 'triangular'")
    degrees = FAMILY_DEGREES[family]
    powers = [d // ENTRY_DEGREE[family] for d in degrees]
    need = 1 + (0 if mode == "scalar" else max(len(_lower_monomials(degrees, d)) for d in degrees))
    need += checks
    rng = random.Random(seed)
    last_error = None
    for relabel in _relabel_candidates(family):
        sample = _reference(family, relabel)
        samples = []
        for _ in range(need):
            t, ref = sample(rng)
            samples.append((raw_traces(family, t, powers), ref))
        try:
            _fit(samples, degrees, family, degrees[0], True)
        except CalibrationError as exc:
            last_error = exc
            continue
        entries = {d: _fit(samples, degrees, family, d, mode == "scalar") for d in degrees}
        return Calibration(family, degrees, relabel, entries)
    raise CalibrationError(f"{family}: no coordinate relabeling calibrates the traces") from last_error


# ---------------------------------------------------------------------------
# stored calibrations

_PACKAGE_DATA = Path(__file__).with_name("data")
_loaded: dict[str, Calibration] = {}


def calibration_path(family: str, directory: Path | None = None) -> Path:
    base = directory or Path(os.environ.get("DISCFORGE_DATA", _PACKAGE_DATA))
    return Path(base) / f"calibration_{family}.txt"


def save_calibration(cal: Calibration, directory: Path | None = None) -> Path:
    path = calibration_path(cal.family, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(cal.format())
    _loaded[cal.family] = cal
    return path


def register_calibration(cal: Calibration) -> None:
    _loaded[cal.family] = cal


def load_calibration(family: str) -> Calibration:
    if family in _loaded:
        return _loaded[family]
    for path in (calibration_path(family), calibration_path(family, _PACKAGE_DATA)):
        if path.exists():
            cal = parse_calibration(path.read_text(), str(path))
            _loaded[family] = cal
            return cal
    raise CalibrationError(f"family {family} is not calibrated; run calibrate({family!r}) "
                           f"or `discforge calibrate {family}` first")


def trace_invariants(family: str, t: Multivector,
                     calibration: Calibration | None = None) -> FundamentalInvariantValues:
    """Calibrated fundamental invariants of a tensor."""
    if family not in FAMILY_FORMATS:
        raise ValueError(f"no trace invariants for family {family!r}")
    _check_format(family, t)
    cal = calibration or load_calibration(family)
    traces = raw_traces(family, t, [c.power for c in cal.entries.values()])
    return FundamentalInvariantValues(family, cal.apply(traces))
