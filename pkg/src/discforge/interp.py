"""Interpolation of discriminants as polynomials in fundamental invariants.

Points are drawn on the dual variety inside the semi-simple coordinate
space (where a restricted root vanishes), fundamental invariants are
evaluated there, and the vector of monomial coefficients is the nullspace of
the evaluation matrix.  The scale is fixed by pinning one coefficient.
"""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import roots
from .exactnum import (
    certification_bound,
    certify_nullvector,
    clear_denominators,
    crt_combine,
    default_primes,
    is_prime,
    rational_reconstruct,
    read_residue_file,
    reduce_mod,
    write_residue_file,
)
from .linalg import nullspace_mod, nullspace_mod_blocked, nullspace_rational

log = logging.getLogger(__name__)

DEFAULT_BOX = 50
DEFAULT_OVERSAMPLE = 1.1
MIN_EXTRA_ROWS = 3
MAX_RESAMPLES = 3


class InterpolationError(RuntimeError):
    pass


@dataclass(frozen=True)
class MonomialBasis:
    names: tuple[str, ...]
    degrees: tuple[int, ...]
    total: int
    exponents: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.exponents)

    def index(self, exponent: Sequence[int]) -> int:
        return self.exponents.index(tuple(exponent))


def enumerate_monomials(degrees: Sequence[int], total: int,
                        names: Sequence[str] | None = None) -> MonomialBasis:
    """All exponent vectors ``e`` with ``sum e_i deg_i = total``, lexicographically descending."""
    degrees = tuple(int(d) for d in degrees)
    if any(d <= 0 for d in degrees):
        raise ValueError("generator degrees must be positive")
    names = tuple(names) if names is not None else tuple(f"f{d}" for d in degrees)
    out: list[tuple[int, ...]] = []
    k = len(degrees)
    prefix = [0] * k

    def rec(i: int, remaining: int):
        if i == k - 1:
            if remaining % degrees[i] == 0:
                prefix[i] = remaining // degrees[i]
                out.append(tuple(prefix))
            return
        for e in range(remaining // degrees[i], -1, -1):
            prefix[i] = e
            rec(i + 1, remaining - e * degrees[i])
        prefix[i] = 0

    if k:
        rec(0, total)
    elif total == 0:
        out.append(())
    return MonomialBasis(names, degrees, total, tuple(out))


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class InterpolationFamily:
    name: str
    system: roots.RestrictedRootSystem
    degrees: tuple[int, ...]
    total: int
    anchor: tuple[int, ...]
    anchor_value: Fraction
    invariant_embedding: tuple[tuple[int, ...], ...] | None = None  # coords -> system coords
    rational_ok: bool = True

    def basis(self) -> MonomialBasis:
        return enumerate_monomials(self.degrees, self.total)

    def system_point(self, point: Sequence[int]) -> list[int]:
        if self.invariant_embedding is None:
            return list(point)
        return [sum(row[j] * point[j] for j in range(len(point))) for row in self.invariant_embedding]


GR48_ANCHOR_VALUE = Fraction(3, 1690514664168754070821429178618909)


def interpolation_family(name: str) -> InterpolationFamily:
    if name == "gr39":
        return InterpolationFamily("gr39", roots.e8_restricted_roots(), roots.GR39_DEGREES, 120,
                                   (10, 0, 0, 0), Fraction(1))
    if name == "cube2222":
        return InterpolationFamily("cube2222", roots.e7_restricted_roots(), roots.CUBE2222_DEGREES,
                                   24, (0, 0, 0, 2), Fraction(-1, 151875), roots.CUBE2222_FROM_GR48)
    if name == "gr48":
        return InterpolationFamily("gr48", roots.e7_restricted_roots(), roots.GR48_DEGREES, 126,
                                   (0, 0, 0, 0, 0, 0, 7), GR48_ANCHOR_VALUE, rational_ok=False)
    raise ValueError(f"no interpolation problem for family {name!r}")


def _coordinate_system(fam: InterpolationFamily) -> roots.RestrictedRootSystem:
    if fam.invariant_embedding is None:
        return fam.system
    return roots.root_system(fam.name)


def hyperplane_forms(name: str) -> list[tuple[int, ...]]:
    """Primitive integer linear forms, one per pair of opposite real-coefficient roots."""
    system = _coordinate_system(interpolation_family(name))
    forms = set()
    for r in system.roots:
        if any(b for _, b in r):
            continue
        coeffs = [a for a, _ in r]
        g = 0
        for c in coeffs:
            g = math.gcd(g, c)
        coeffs = [c // g for c in coeffs]
        first = next(c for c in coeffs if c)
        if first < 0:
            coeffs = [-c for c in coeffs]
        forms.add(tuple(coeffs))
    return sorted(forms, reverse=True)


def _vanishing_roots(system: roots.RestrictedRootSystem, point: Sequence[int]) -> int:
    count = 0
    for r in system.roots:
        if not sum(a * x for (a, _), x in zip(r, point)) and not sum(b * x for (_, b), x in zip(r, point)):
            count += 1
    return count


def _roots_per_hyperplane(name: str) -> int:
    return {"gr39": 6, "gr48": 2, "cube2222": 8}[name]


def sample_dual_point(name: str, rng: random.Random, box: int = DEFAULT_BOX,
                      max_tries: int = 1000) -> list[int]:
    """Random integer point of the semi-simple space on which the discriminant vanishes.

    Exactly one hyperplane of the restricted root arrangement passes through it.
    """
    fam = interpolation_family(name)
    system = _coordinate_system(fam)
    size = len(system.variables)
    per = _roots_per_hyperplane(name)

    def draw():
        return [rng.choice([v for v in range(-box, box + 1) if v]) for _ in range(size)]

    for _ in range(max_tries):
        z = draw()
        if name == "gr39":
            z[rng.randrange(size)] = 0
        elif name == "gr48":
            forms = hyperplane_forms("gr48")
            form = forms[rng.randrange(len(forms))]
            unit = [i for i, c in enumerate(form) if abs(c) == 1]
            if not unit:
                raise InterpolationError("hyperplane form without a unit coefficient")
            i = unit[-1]
            rest = sum(c * x for j, (c, x) in enumerate(zip(form, z)) if j != i)
            z[i] = -rest * form[i]
        else:
            i, j = rng.sample(range(size), 2)
            z[j] = z[i] * rng.choice((1, -1))
        if _vanishing_roots(system, z) != per:
            continue
        return z
    raise InterpolationError(f"could not draw a non-degenerate dual point for {name}")


def sample_generic_point(name: str, rng: random.Random, box: int = DEFAULT_BOX) -> list[int]:
    fam = interpolation_family(name)
    system = _coordinate_system(fam)
    while True:
        z = [rng.choice([v for v in range(-box, box + 1) if v]) for _ in system.variables]
        if not _vanishing_roots(system, z):
            return z


# ---------------------------------------------------------------------------
# evaluation matrices


def _invariants_exact(args):
    name, point = args
    fam = interpolation_family(name)
    return roots.invariant_values(fam.system, fam.system_point(point), fam.degrees)


def invariant_rows(name: str, points: Sequence[Sequence[int]], workers: int = 1) -> list[dict[int, Fraction]]:
    jobs = [(name, list(p)) for p in points]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_invariants_exact, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_invariants_exact(j) for j in jobs]


def monomial_row(basis: MonomialBasis, values: dict[int, Fraction]) -> list[Fraction]:
    powers = {d: {0: Fraction(1)} for d in basis.degrees}
    row = []
    for exp in basis.exponents:
        v = Fraction(1)
        for d, e in zip(basis.degrees, exp):
            if e:
                cache = powers[d]
                if e not in cache:
                    cache[e] = values[d] ** e
                v *= cache[e]
        row.append(v)
    return row


def build_matrix(basis: MonomialBasis, name: str, points: Sequence[Sequence[int]],
                 prime: int | None = None, workers: int = 1, dtype=np.int64):
    """Evaluation matrix: rows are points, columns monomials.

    Rational mode returns a list of Fraction rows; prime mode an array of
    residues (int64, or float64 to feed the blocked elimination directly).
    """
    fam = interpolation_family(name)
    if prime is None:
        return [monomial_row(basis, vals) for vals in invariant_rows(name, points, workers)]
    pts = np.array([fam.system_point(p) for p in points], dtype=np.int64)
    vals = roots.invariant_values_mod_batch(fam.system, pts, prime, fam.degrees)
    return monomial_matrix_mod(basis, vals, prime, dtype)


def monomial_matrix_mod(basis: MonomialBasis, vals: np.ndarray, p: int,
                        dtype=np.int64) -> np.ndarray:
    """Monomials mod p from an (npoints x ngenerators) array of invariant residues."""
    npts = vals.shape[0]
    exps = np.array(basis.exponents, dtype=np.int64)
    out = np.empty((npts, len(basis)), dtype=dtype)
    tables = []
    for g in range(len(basis.degrees)):
        top = int(exps[:, g].max()) if len(exps) else 0
        t = np.ones((top + 1, npts), dtype=np.int64)
        for e in range(1, top + 1):
            t[e] = t[e - 1] * vals[:, g] % p
        tables.append(t)
    for col, exp in enumerate(basis.exponents):
        acc = np.ones(npts, dtype=np.int64)
        for g, e in enumerate(exp):
            if e:
                acc = acc * tables[g][e] % p
        out[:, col] = acc
    return out


def reduce_matrix(rows: Sequence[Sequence[Fraction]], p: int) -> np.ndarray:
    return np.array([[reduce_mod(x, p) for x in row] for row in rows], dtype=np.int64)


def integer_matrix(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Scale each row to integers (the nullspace is unchanged)."""
    return [clear_denominators(row)[0] for row in rows]


def row_count(ncols: int, oversample: float = DEFAULT_OVERSAMPLE) -> int:
    return max(math.floor(oversample * ncols), ncols + MIN_EXTRA_ROWS)


# ---------------------------------------------------------------------------
# interpolation


@dataclass
class InterpolationResult:
    family: str
    basis: MonomialBasis
    coefficients: list[Fraction] | None = None
    prime: int | None = None
    residues: list[int] | None = None
    anchor: tuple[int, ...] = ()
    anchor_value: Fraction = Fraction(1)
    certified: bool = False
    points: list[list[int]] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def as_expression(self):
        from .exprdb import InvariantExpression

        if self.coefficients is None:
            raise ValueError("no rational coefficients (modular result)")
        return InvariantExpression(self.basis.names, self.basis.degrees,
                                   dict(zip(self.basis.exponents, self.coefficients)))


def _draw_points(name: str, count: int, rng: random.Random, box: int) -> list[list[int]]:
    return [sample_dual_point(name, rng, box) for _ in range(count)]


def interpolate(name: str, mode: str = "rational", prime: int | None = None, seed: int = 0,
                box: int = DEFAULT_BOX, oversample: float = DEFAULT_OVERSAMPLE,
                workers: int = 1, progress: Callable | None = None) -> InterpolationResult:
    """Coefficients of the discriminant in the monomial basis of fundamental invariants."""
    fam = interpolation_family(name)
    basis = fam.basis()
    anchor_col = basis.index(fam.anchor)
    nrows = row_count(len(basis), oversample)
    rng = random.Random(seed)
    if mode == "rational":
        if not fam.rational_ok:
            raise InterpolationError(f"{name} is only interpolated modulo primes")
        for attempt in range(MAX_RESAMPLES + 1):
            points = _draw_points(name, nrows, rng, box)
            rows = build_matrix(basis, name, points, workers=workers)
            ns = nullspace_rational(rows, len(basis))
            log.info("%s: attempt %d, nullspace dimension %d", name, attempt, len(ns))
            if len(ns) == 1:
                v = ns[0]
                if not v[anchor_col]:
                    raise InterpolationError("anchor coefficient vanishes")
                scale = fam.anchor_value / v[anchor_col]
                return InterpolationResult(name, basis, [x * scale for x in v], anchor=fam.anchor,
                                           anchor_value=fam.anchor_value, points=points)
            if not ns:
                raise InterpolationError(f"{name}: nullspace is trivial; the monomial basis is wrong")
        raise InterpolationError(f"{name}: nullspace dimension stays above 1 after resampling")
    if mode != "prime":
        raise ValueError("mode must be 'rational' or 'prime'")
    if prime is None or not is_prime(prime):
        raise ValueError("prime mode needs a prime")
    anchor_res = reduce_mod(fam.anchor_value, prime)
    for attempt in range(MAX_RESAMPLES + 1):
        points = _draw_points(name, nrows, rng, box)
        blocked = len(basis) > 2000
        mat = build_matrix(basis, name, points, prime=prime,
                           dtype=np.float64 if blocked else np.int64)
        if blocked:
            ns = nullspace_mod_blocked(mat, prime, progress=progress)
            del mat
        else:
            ns = nullspace_mod(mat, prime)
        log.info("%s mod %d: attempt %d, nullspace dimension %d", name, prime, attempt, len(ns))
        if len(ns) == 1:
            v = ns[0]
            if not v[anchor_col] % prime:
                raise InterpolationError(f"anchor coefficient vanishes mod {prime}")
            scale = anchor_res * pow(int(v[anchor_col]), -1, prime) % prime
            residues = [int(x) * scale % prime for x in v]
            return InterpolationResult(name, basis, None, prime, residues, fam.anchor,
                                       fam.anchor_value, points=points)
        if not ns:
            raise InterpolationError(f"{name} mod {prime}: trivial nullspace")
    raise InterpolationError(f"{name} mod {prime}: nullspace dimension stays above 1 (bad prime?)")


# ---------------------------------------------------------------------------
# shards, lifting and certification


def shard_path(directory: Path, prime: int) -> Path:
    return Path(directory) / f"{prime}.txt"


def write_shard(directory: Path, result: InterpolationResult) -> Path:
    path = shard_path(directory, result.prime)
    path.parent.mkdir(parents=True, exist_ok=True)
    anchor = " ".join(map(str, result.anchor))
    write_residue_file(path, result.prime, result.residues,
                       [f"anchor {anchor} {result.anchor_value.numerator}/{result.anchor_value.denominator}"])
    return path


def read_shard(path: Path) -> tuple[int, tuple[int, ...], Fraction, list[int]]:
    prime, header, residues = read_residue_file(path, header_lines=1)
    parts = header[0].split()
    if not parts or parts[0] != "anchor":
        raise ValueError(f"{path}:2: expected an anchor line")
    anchor = tuple(int(x) for x in parts[1:-1])
    num, _, den = parts[-1].partition("/")
    value = Fraction(int(num), int(den or 1))
    if any(not 0 <= r < prime for r in residues):
        raise ValueError(f"{path}: residue out of range for prime {prime}")
    return prime, anchor, value, residues


def load_shards(directory: Path) -> list[tuple[int, list[int]]]:
    shards = []
    anchors = set()
    for path in sorted(Path(directory).glob("*.txt"), key=lambda p: int(p.stem) if p.stem.isdigit() else 0):
        if not path.stem.isdigit():
            continue
        prime, anchor, value, residues = read_shard(path)
        if prime != int(path.stem):
            raise ValueError(f"{path}: prime {prime} does not match file name")
        anchors.add((anchor, value))
        shards.append((prime, residues))
    if len(anchors) > 1:
        raise ValueError("shards use different anchor conventions")
    return shards


def run_primes(name: str, primes: Sequence[int], shard_dir: Path | None = None, seed: int = 0,
               box: int = DEFAULT_BOX, oversample: float = DEFAULT_OVERSAMPLE,
               replace_bad: bool = True, progress: Callable | None = None) -> list[InterpolationResult]:
    """Per-prime interpolations; existing shard files are reused, bad primes replaced."""
    results = []
    queue = list(primes)
    used = set()
    while queue:
        p = queue.pop(0)
        used.add(p)
        if shard_dir is not None and shard_path(shard_dir, p).exists():
            prime, anchor, value, residues = read_shard(shard_path(shard_dir, p))
            fam = interpolation_family(name)
            results.append(InterpolationResult(name, fam.basis(), None, prime, residues, anchor, value))
            log.info("reusing shard for %d", p)
            continue
        try:
            res = interpolate(name, "prime", p, seed=seed + p, box=box, oversample=oversample,
                              progress=progress)
        except InterpolationError as exc:
            if not replace_bad:
                raise
            log.warning("discarding prime %d: %s", p, exc)
            nxt = max(used | set(queue)) + 1
            while not is_prime(nxt):
                nxt += 1
            queue.append(nxt)
            continue
        if shard_dir is not None:
            write_shard(shard_dir, res)
        results.append(res)
    return results


def lift_and_certify(name: str, shards: Sequence[tuple[int, Sequence[int]]], seed: int = 1,
                     certify_box: int = 3, check_points: int | None = None) -> InterpolationResult:
    """CRT + rational reconstruction of per-prime null vectors, certified on fresh points."""
    fam = interpolation_family(name)
    basis = fam.basis()
    if len(shards) < 1:
        raise InterpolationError("no shards to lift")
    primes = [p for p, _ in shards]
    if len(set(primes)) != len(primes):
        raise InterpolationError("duplicate primes among shards")
    if any(len(r) != len(basis) for _, r in shards):
        raise InterpolationError("shard length does not match the monomial basis")
    coeffs = []
    modulus = math.prod(primes)
    failed = []
    for i in range(len(basis)):
        r, m = crt_combine([(res[i], p) for p, res in shards])
        q = rational_reconstruct(r, m)
        if q is None:
            failed.append(i)
        coeffs.append(q)
    if failed:
        raise InterpolationError(f"rational reconstruction failed for {len(failed)} of {len(basis)} "
                                 f"coordinates; need more primes (modulus has {len(str(modulus))} digits)")
    y, den = clear_denominators(coeffs)
    rng = random.Random(seed)
    count = check_points or row_count(len(basis))
    points = [sample_dual_point(name, rng, certify_box) for _ in range(count)]
    A = integer_matrix(build_matrix(basis, name, points))
    n = len(basis)
    amax = max(abs(x) for row in A for x in row)
    ymax = max(abs(x) for x in y)
    ok = certify_nullvector(A, y, modulus)
    bound = certification_bound(n, amax, ymax)
    return InterpolationResult(name, basis, coeffs, None, None, fam.anchor, fam.anchor_value, ok,
                               points, {"modulus": modulus, "bound": bound, "primes": primes,
                                        "amax": amax, "ymax": ymax, "denominator": den})


def primes_for(count: int) -> list[int]:
    return default_primes(count)
