"""Restricted root systems of E8 and E7 on semi-simple coordinates.

Roots are stored after restriction as integer Eisenstein coordinate vectors:
root ``r`` stands for the linear form ``sum_i (a_i + b_i w) x_i / scale``.
For E8 the restriction has coefficients in (1/3)Z[w], so ``scale = 3``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactnum import EisensteinRational, as_fraction, eisenstein_mul_mod, reduce_mod
from .exterior import HypercubeTensor, Multivector
from .polynomial import Polynomial, exponent_vectors, multinomial

Eis = tuple[int, int]

ONE: Eis = (1, 0)
W: Eis = (0, 1)
WBAR: Eis = (-1, -1)


def _eadd(x: Eis, y: Eis) -> Eis:
    return (x[0] + y[0], x[1] + y[1])


def _eneg(x: Eis) -> Eis:
    return (-x[0], -x[1])


def _emul(x: Eis, y: Eis) -> Eis:
    a, b = x
    c, d = y
    bd = b * d
    return (a * c - bd, a * d + b * c - bd)


@dataclass(frozen=True)
class RestrictedRootSystem:
    name: str
    variables: tuple[str, ...]
    roots: tuple[tuple[Eis, ...], ...]
    scale: int = 1
    degrees: tuple[int, ...] = ()

    def __len__(self):
        return len(self.roots)

    @property
    def is_rational(self) -> bool:
        return all(b == 0 for r in self.roots for _, b in r)

    def forms(self) -> list[list[EisensteinRational]]:
        """Root linear forms with exact Eisenstein-rational coefficients."""
        s = self.scale
        return [[EisensteinRational(Fraction(a, s), Fraction(b, s)) for a, b in r]
                for r in self.roots]

    def restrict(self, matrix: Sequence[Sequence[int]], variables: Sequence[str],
                 name: str | None = None, drop_zero: bool = True) -> "RestrictedRootSystem":
        """Pull the roots back along ``old_i = sum_j matrix[i][j] new_j``."""
        m = len(variables)
        new_roots = []
        for r in self.roots:
            coeffs = []
            for j in range(m):
                acc = (0, 0)
                for i, c in enumerate(r):
                    if matrix[i][j]:
                        acc = _eadd(acc, (c[0] * matrix[i][j], c[1] * matrix[i][j]))
                coeffs.append(acc)
            if drop_zero and all(c == (0, 0) for c in coeffs):
                continue
            new_roots.append(tuple(coeffs))
        return RestrictedRootSystem(name or f"{self.name}|restricted", tuple(variables),
                                    tuple(new_roots), self.scale, self.degrees)

    def vanishing_count(self, matrix: Sequence[Sequence[int]]) -> int:
        return len(self) - len(self.restrict(matrix, [f"u{j}" for j in range(len(matrix[0]))]))


# ---------------------------------------------------------------------------
# E8 on the Gr(3,9) Cartan subspace

# 3 * eps_i(p) in terms of z1..z4
E8_EPSILON_TABLE: tuple[tuple[Eis, ...], ...] = (
    (ONE, ONE, ONE, ONE),
    (ONE, W, W, W),
    (ONE, WBAR, WBAR, WBAR),
    (W, ONE, WBAR, W),
    (W, W, ONE, WBAR),
    (W, WBAR, W, ONE),
    (WBAR, ONE, W, WBAR),
    (WBAR, W, WBAR, ONE),
    (WBAR, WBAR, ONE, W),
)

# eps_i(p) in terms of y1..y7
E7_EPSILON_TABLE: tuple[tuple[int, ...], ...] = (
    (1, 1, 1, 1, 1, 1, 1),
    (1, -1, 1, -1, -1, -1, 1),
    (1, 1, -1, 1, -1, -1, -1),
    (1, -1, -1, -1, 1, 1, -1),
    (-1, 1, 1, -1, 1, -1, -1),
    (-1, -1, 1, 1, -1, 1, -1),
    (-1, 1, -1, -1, -1, 1, 1),
    (-1, -1, -1, 1, 1, -1, 1),
)

GR39_DEGREES = (12, 18, 24, 30)
GR48_DEGREES = (2, 6, 8, 10, 12, 14, 18)
CUBE2222_DEGREES = (2, 6, 8, 12)


def _sum_forms(forms: Sequence[tuple[Eis, ...]]) -> tuple[Eis, ...]:
    out = [(0, 0)] * len(forms[0])
    for f in forms:
        out = [_eadd(x, y) for x, y in zip(out, f)]
    return tuple(out)


@lru_cache(maxsize=None)
def e8_restricted_roots() -> RestrictedRootSystem:
    """The 240 roots of E8 restricted to the span of the four basic semi-simple tensors."""
    eps = E8_EPSILON_TABLE
    roots = []
    for i, j in itertools.permutations(range(9), 2):
        roots.append(_sum_forms([eps[i], tuple(_eneg(c) for c in eps[j])]))
    for trip in itertools.combinations(range(9), 3):
        s = _sum_forms([eps[t] for t in trip])
        roots.append(s)
        roots.append(tuple(_eneg(c) for c in s))
    return RestrictedRootSystem("e8", ("z1", "z2", "z3", "z4"), tuple(roots), 3, GR39_DEGREES)


@lru_cache(maxsize=None)
def e7_restricted_roots() -> RestrictedRootSystem:
    """The 126 roots of E7 restricted to the span of the seven basic semi-simple tensors."""
    eps = [tuple((c, 0) for c in row) for row in E7_EPSILON_TABLE]
    roots = []
    for i, j in itertools.permutations(range(8), 2):
        roots.append(_sum_forms([eps[i], tuple(_eneg(c) for c in eps[j])]))
    for quad in itertools.combinations(range(8), 4):
        roots.append(_sum_forms([eps[q] for q in quad]))
    return RestrictedRootSystem("e7", tuple(f"y{i}" for i in range(1, 8)), tuple(roots), 1,
                                GR48_DEGREES)


# ---------------------------------------------------------------------------
# power sums


def _power_table(c: Eis, d: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.zeros(d + 1, dtype=np.int64)
    b = np.zeros(d + 1, dtype=np.int64)
    x = (1, 0)
    for k in range(d + 1):
        a[k], b[k] = x
        x = _emul(x, c)
    return a, b


def _check_int64_safe(system: RestrictedRootSystem, d: int) -> bool:
    # components of x = a + b w satisfy |a|, |b| <= 2|x|/sqrt(3); partial products
    # of a monomial never exceed max|c|^d in absolute value
    big = max(math.sqrt(a * a - a * b + b * b) for r in system.roots for a, b in r)
    return 3.0 * big ** d * len(system.roots) < 2.0 ** 62


@lru_cache(maxsize=None)
def raw_power_sum(system: RestrictedRootSystem, d: int) -> dict[tuple[int, ...], int]:
    """Expanded ``sum_r (scale * alpha_r)^d`` with integer coefficients.

    Raises if the w-part does not vanish.
    """
    m = len(system.variables)
    exps = exponent_vectors(m, d)
    if not _check_int64_safe(system, d):
        raise OverflowError("power sum too large for vectorized expansion")
    E = np.array(exps, dtype=np.int64)
    acc_a = np.zeros(len(exps), dtype=np.int64)
    acc_b = np.zeros(len(exps), dtype=np.int64)
    for root in system.roots:
        pa = np.ones(len(exps), dtype=np.int64)
        pb = np.zeros(len(exps), dtype=np.int64)
        for i, c in enumerate(root):
            if c == (1, 0):
                continue
            ta, tb = _power_table(c, d)
            xa = ta[E[:, i]]
            xb = tb[E[:, i]]
            bd = pb * xb
            pa, pb = pa * xa - bd, pa * xb + pb * xa - bd
        acc_a += pa
        acc_b += pb
    if np.any(acc_b):
        raise ValueError(f"power sum of degree {d} over {system.name} has a nonzero w-part")
    out = {}
    for exp, s in zip(exps, acc_a.tolist()):
        if s:
            out[exp] = multinomial(exp) * s
    return out


@lru_cache(maxsize=None)
def normalization_constant(system: RestrictedRootSystem, d: int) -> int:
    """Signed integer ``K`` with ``f_d = raw_power_sum / K`` having content 1."""
    raw = raw_power_sum(system, d)
    if not raw:
        raise ValueError(f"power sum of degree {d} vanishes identically")
    g = 0
    for c in raw.values():
        g = math.gcd(g, c)
    lead = (d,) + (0,) * (len(system.variables) - 1)
    ref = raw.get(lead)
    if ref is None:
        ref = raw[min(raw, key=lambda e: tuple(-x for x in e))]
    return g if ref > 0 else -g


def power_sum_invariant(system: RestrictedRootSystem, d: int) -> Polynomial:
    """The normalized fundamental invariant of degree ``d`` on the semi-simple coordinates."""
    if d % 2:
        raise ValueError("power sums of odd degree vanish; use an even degree")
    raw = raw_power_sum(system, d)
    k = normalization_constant(system, d)
    return Polynomial(system.variables, {e: Fraction(c, k) for e, c in raw.items()})


def root_values(system: RestrictedRootSystem, point: Sequence) -> list:
    """Values ``scale * alpha_r(point)``; Eisenstein numbers unless the system is rational."""
    pt = [as_fraction(x) for x in point]
    if len(pt) != len(system.variables):
        raise ValueError(f"expected {len(system.variables)} coordinates")
    if system.is_rational:
        return [sum((a * x for (a, _), x in zip(r, pt)), Fraction(0)) for r in system.roots]
    out = []
    for r in system.roots:
        va = sum((a * x for (a, _), x in zip(r, pt)), Fraction(0))
        vb = sum((b * x for (_, b), x in zip(r, pt)), Fraction(0))
        out.append(EisensteinRational(va, vb))
    return out


def invariant_values(system: RestrictedRootSystem, point: Sequence,
                     degrees: Sequence[int] | None = None) -> dict[int, Fraction]:
    """Normalized power-sum invariants evaluated at a point (no expansion)."""
    degrees = tuple(degrees or system.degrees)
    vals = root_values(system, point)
    out = {}
    if system.is_rational:
        sq = [v * v for v in vals]
        for d in degrees:
            total = sum((s ** (d // 2) for s in sq), Fraction(0))
            out[d] = total / normalization_constant(system, d)
        return out
    for d in degrees:
        total = EisensteinRational(0, 0)
        for v in vals:
            total = total + v ** d
        if not total.is_rational():
            raise ValueError("invariant value has a nonzero w-part")
        out[d] = Fraction(total.a) / normalization_constant(system, d)
    return out


def invariant_values_mod(system: RestrictedRootSystem, point: Sequence[int], p: int,
                         degrees: Sequence[int] | None = None) -> dict[int, int]:
    degrees = tuple(degrees or system.degrees)
    pt = [reduce_mod(x, p) for x in point]
    vals = []
    for r in system.roots:
        va = sum(a * x for (a, _), x in zip(r, pt)) % p
        vb = sum(b * x for (_, b), x in zip(r, pt)) % p
        vals.append((va, vb))
    out = {}
    for d in degrees:
        ta, tb = 0, 0
        for v in vals:
            x = (1, 0)
            base, e = v, d
            while e:
                if e & 1:
                    x = eisenstein_mul_mod(x, base, p)
                base = eisenstein_mul_mod(base, base, p)
                e >>= 1
            ta += x[0]
            tb += x[1]
        if tb % p:
            raise ValueError("invariant value has a nonzero w-part mod p")
        k = normalization_constant(system, d) % p
        if k == 0:
            raise ZeroDivisionError(f"normalization constant vanishes mod {p}")
        out[d] = ta * pow(k, -1, p) % p
    return out


def invariant_values_mod_batch(system: RestrictedRootSystem, points: np.ndarray, p: int,
                               degrees: Sequence[int] | None = None) -> np.ndarray:
    """Vectorized mod-p invariants for a batch of integer points of a rational system.

    Returns an array of shape (len(points), len(degrees)).
    """
    if not system.is_rational:
        return np.array([[v for v in invariant_values_mod(system, pt, p, degrees).values()]
                         for pt in points], dtype=np.int64)
    degrees = tuple(degrees or system.degrees)
    C = np.array([[a for a, _ in r] for r in system.roots], dtype=np.int64) % p
    P = np.asarray(points, dtype=np.int64) % p
    vals = (P @ C.T) % p
    sq = vals * vals % p
    out = np.zeros((len(P), len(degrees)), dtype=np.int64)
    for col, d in enumerate(degrees):
        acc = np.ones_like(sq)
        base = sq.copy()
        e = d // 2
        while e:
            if e & 1:
                acc = acc * base % p
            base = base * base % p
            e >>= 1
        total = acc.sum(axis=1) % p
        k = normalization_constant(system, d) % p
        if k == 0:
            raise ZeroDivisionError(f"normalization constant vanishes mod {p}")
        out[:, col] = total * pow(k, -1, p) % p
    return out


# ---------------------------------------------------------------------------
# products of roots


@dataclass(frozen=True)
class RootProduct:
    """Product of restricted root forms, kept factored."""

    system: RestrictedRootSystem
    dropped: int = 0

    @property
    def degree(self) -> int:
        return len(self.system.roots)

    def evaluate(self, point: Sequence):
        vals = root_values(self.system, point)
        if self.system.is_rational:
            out = Fraction(1)
            for v in vals:
                out *= v
            return out / Fraction(self.system.scale) ** len(vals)
        out = EisensteinRational(1, 0)
        for v in vals:
            out = out * v
        out = out * EisensteinRational(Fraction(1, self.system.scale ** len(vals)), 0)
        return Fraction(out.a) if out.is_rational() else out

    def expand(self) -> Polynomial:
        """Fully expanded product (rational systems only; slow for large degree)."""
        if not self.system.is_rational:
            raise ValueError("expansion is only supported for rational root systems")
        names = self.system.variables
        result = Polynomial.constant(names, Fraction(1, self.system.scale ** self.degree))
        for r in self.system.roots:
            result = result * Polynomial.linear(names, [a for a, _ in r])
        return result


def restricted_discriminant(system: RestrictedRootSystem,
                            restriction: Sequence[Sequence[int]] | None = None,
                            variables: Sequence[str] | None = None) -> RootProduct:
    """Product of the restricted roots, optionally pulled back along ``restriction``.

    Roots that vanish identically after the pull-back are removed; their
    number is recorded in ``dropped``.
    """
    if restriction is None:
        if any(all(c == (0, 0) for c in r) for r in system.roots):
            raise ValueError("a root vanishes identically")
        return RootProduct(system, 0)
    variables = variables or [f"u{j + 1}" for j in range(len(restriction[0]))]
    sub = system.restrict(restriction, variables)
    return RootProduct(sub, len(system) - len(sub))


# ---------------------------------------------------------------------------
# semi-simple families


@dataclass(frozen=True)
class SemiSimpleFamily:
    name: str
    variables: tuple[str, ...]
    basis: tuple = field(repr=False)
    degrees: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.variables)


def _mv(n, *keys):
    out = Multivector(n, len(str(keys[0])))
    for key in keys:
        out = out + Multivector(n, len(key), {tuple(int(c) for c in key): 1})
    return out


GR39_BASIS = (
    _mv(9, "123", "456", "789"),
    _mv(9, "147", "258", "369"),
    _mv(9, "159", "267", "348"),
    _mv(9, "168", "249", "357"),
)

GR48_BASIS = (
    _mv(8, "1234", "5678"),
    _mv(8, "1357", "6824"),
    _mv(8, "1562", "8437"),
    _mv(8, "1683", "4752"),
    _mv(8, "1845", "7263"),
    _mv(8, "1476", "2385"),
    _mv(8, "1728", "3546"),
)


def _hc(shape, *keys):
    return HypercubeTensor(shape, {tuple(int(c) for c in k): 1 for k in keys})


CUBE333_BASIS = (
    _hc((3, 3, 3), "000", "111", "222"),
    _hc((3, 3, 3), "012", "201", "120"),
    _hc((3, 3, 3), "021", "102", "210"),
)

CUBE2222_BASIS = (
    _hc((2, 2, 2, 2), "0000", "1111"),
    _hc((2, 2, 2, 2), "0101", "1010"),
    _hc((2, 2, 2, 2), "0110", "1001"),
    _hc((2, 2, 2, 2), "0011", "1100"),
)

FAMILIES = {
    "gr39": SemiSimpleFamily("gr39", ("z1", "z2", "z3", "z4"), GR39_BASIS, GR39_DEGREES),
    "gr48": SemiSimpleFamily("gr48", tuple(f"y{i}" for i in range(1, 8)), GR48_BASIS, GR48_DEGREES),
    "cube333": SemiSimpleFamily("cube333", ("b", "c", "d"), CUBE333_BASIS, ()),
    "cube2222": SemiSimpleFamily("cube2222", ("t1", "t2", "t3", "t4"), CUBE2222_BASIS,
                                 CUBE2222_DEGREES),
}

# four-pair splitting of C^8: y = (t1, 0, 0, t2, 0, t3, t4)
CUBE2222_FROM_GR48 = (
    (1, 0, 0, 0),
    (0, 0, 0, 0),
    (0, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
)

# three-triplet splitting of C^9: z = (b, 0, c, d)
CUBE333_FROM_GR39 = (
    (1, 0, 0),
    (0, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
)

GR48_PAIRS = ((1, 5), (2, 6), (3, 7), (4, 8))
GR39_TRIPLETS = ((1, 4, 7), (2, 5, 8), (3, 6, 9))


def family(name: str) -> SemiSimpleFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}") from None


def root_system(name: str) -> RestrictedRootSystem:
    """Root system governing a family, restricted to its coordinates."""
    if name == "gr39":
        return e8_restricted_roots()
    if name == "gr48":
        return e7_restricted_roots()
    if name == "cube2222":
        return e7_restricted_roots().restrict(CUBE2222_FROM_GR48, FAMILIES["cube2222"].variables,
                                              "e7|cube2222")
    if name == "cube333":
        return e8_restricted_roots().restrict(CUBE333_FROM_GR39, FAMILIES["cube333"].variables,
                                              "e8|cube333")
    raise ValueError(f"unknown family {name!r}")


def semisimple_tensor(name: str, coords: Sequence):
    """``sum_i c_i p_i`` for the family's basic semi-simple tensors."""
    fam = family(name)
    if len(coords) != fam.size:
        raise ValueError(f"{name} needs {fam.size} coordinates, got {len(coords)}")
    out = None
    for c, b in zip(coords, fam.basis):
        term = b.scale(c)
        out = term if out is None else out + term
    return out


def family_invariants(name: str, point: Sequence) -> dict[int, Fraction]:
    """Normalized fundamental invariants of a family at semi-simple coordinates.

    The (C^2)^4 invariants are the Gr(4,8) ones pulled back along the
    four-pair splitting.
    """
    if name == "gr39":
        return invariant_values(e8_restricted_roots(), point)
    if name == "gr48":
        return invariant_values(e7_restricted_roots(), point)
    if name == "cube2222":
        y = [sum(as_fraction(row[j]) * as_fraction(point[j]) for j in range(4))
             for row in CUBE2222_FROM_GR48]
        return invariant_values(e7_restricted_roots(), y, CUBE2222_DEGREES)
    raise ValueError(f"no fundamental invariants for family {name!r}")


def vandermonde_2222(t: Sequence) -> Fraction:
    """``prod_{i<j} ((t_i - t_j)(t_i + t_j))^2``."""
    t = [as_fraction(x) for x in t]
    out = Fraction(1)
    for i, j in itertools.combinations(range(len(t)), 2):
        out *= ((t[i] - t[j]) * (t[i] + t[j])) ** 2
    return out
