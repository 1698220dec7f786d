"""Exact arithmetic: rationals, prime fields, Eisenstein rationals, CRT and
rational reconstruction.

Rationals are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

BigRational = Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):    # includes numpy integers
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``num/den`` or an integer literal; decimals are rejected."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "." in s or "e" in s.lower():
        raise ValueError(f"not an exact rational literal: {text!r}")
    if "/" in s:
        num, den = s.split("/", 1)
        d = int(den)
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), d)
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# primes and prime fields


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_above(start: int, count: int) -> list[int]:
    """The first ``count`` primes strictly greater than ``start``."""
    out = []
    n = start + 1
    while len(out) < count:
        if is_prime(n):
            out.append(n)
        n += 1
    return out


def default_primes(count: int) -> list[int]:
    """Consecutive primes starting at 1009."""
    return primes_above(1000, count)


@dataclass(frozen=True)
class PrimeFieldElement:
    residue: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    @classmethod
    def of(cls, x, p: int) -> "PrimeFieldElement":
        return cls(reduce_mod(x, p), p)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise ValueError("mixed moduli")
            return other.residue
        return reduce_mod(other, self.modulus)

    def __add__(self, other):
        return PrimeFieldElement((self.residue + self._coerce(other)) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return PrimeFieldElement((self.residue - self._coerce(other)) % self.modulus, self.modulus)

    def __rsub__(self, other):
        return PrimeFieldElement((self._coerce(other) - self.residue) % self.modulus, self.modulus)

    def __mul__(self, other):
        return PrimeFieldElement(self.residue * self._coerce(other) % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.residue % self.modulus, self.modulus)

    def inverse(self) -> "PrimeFieldElement":
        if self.residue == 0:
            raise ZeroDivisionError("inverse of zero in a prime field")
        return PrimeFieldElement(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * PrimeFieldElement(self._coerce(other), self.modulus).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PrimeFieldElement(pow(self.residue, e, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, (int, Fraction)):
            return self.residue == reduce_mod(other, self.modulus)
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __int__(self):
        return self.residue


def reduce_mod(x, p: int) -> int:
    """Image of an integer or rational in Z/p; raises if the denominator is not invertible."""
    if isinstance(x, int):
        return x % p
    x = as_fraction(x)
    den = x.denominator % p
    if den == 0:
        raise ZeroDivisionError(f"denominator {x.denominator} not invertible mod {p}")
    return x.numerator * pow(den, -1, p) % p


# ---------------------------------------------------------------------------
# Eisenstein rationals Q(w), w^2 + w + 1 = 0


class EisensteinRational:
    """``a + b*w`` with ``w = exp(2 pi i / 3)`` and rational ``a``, ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = as_fraction(a) if not isinstance(a, int) else a
        self.b = as_fraction(b) if not isinstance(b, int) else b

    @classmethod
    def _wrap(cls, x) -> "EisensteinRational":
        if isinstance(x, EisensteinRational):
            return x
        return cls(x, 0)

    def __add__(self, other):
        o = EisensteinRational._wrap(other)
        return EisensteinRational(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = EisensteinRational._wrap(other)
        return EisensteinRational(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return EisensteinRational._wrap(other) - self

    def __neg__(self):
        return EisensteinRational(-self.a, -self.b)

    def __mul__(self, other):
        o = EisensteinRational._wrap(other)
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = b * d
        return EisensteinRational(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def conjugate(self) -> "EisensteinRational":
        # conj(w) = w^2 = -1 - w
        return EisensteinRational(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        a, b = self.a, self.b
        return Fraction(a * a - a * b + b * b)

    def inverse(self) -> "EisensteinRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Eisenstein number")
        c = self.conjugate()
        return EisensteinRational(Fraction(c.a) / n, Fraction(c.b) / n)

    def __truediv__(self, other):
        return self * EisensteinRational._wrap(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = EisensteinRational(1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, EisensteinRational):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"EisensteinRational({self.a}, {self.b})"


OMEGA = EisensteinRational(0, 1)
OMEGA_BAR = EisensteinRational(-1, -1)


def eisenstein_mul_mod(x: tuple[int, int], y: tuple[int, int], p: int) -> tuple[int, int]:
    a, b = x
    c, d = y
    bd = b * d
    return ((a * c - bd) % p, (a * d + b * c - bd) % p)


def eisenstein_pow_mod(x: tuple[int, int], e: int, p: int) -> tuple[int, int]:
    result = (1, 0)
    base = (x[0] % p, x[1] % p)
    while e:
        if e & 1:
            result = eisenstein_mul_mod(result, base, p)
        base = eisenstein_mul_mod(base, base, p)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# CRT, rational reconstruction, certification


def crt_combine(residues: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine ``(value, prime)`` pairs into ``(r, M)`` with ``0 <= r < M``.

    Pairwise (Garner-style) combination; the moduli must be distinct.
    """
    residues = list(residues)
    seen = set()
    for _, p in residues:
        if p in seen:
            raise ValueError(f"duplicate modulus {p} in CRT input")
        seen.add(p)
    r, m = 0, 1
    for v, p in residues:
        v %= p
        # r + m*t = v (mod p)
        t = (v - r) * pow(m, -1, p) % p
        r += m * t
        m *= p
    return r % m, m


def crt_vectors(primes: Sequence[int], vectors: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Coordinatewise CRT of equal-length residue vectors."""
    if len(set(primes)) != len(primes):
        raise ValueError("duplicate primes")
    if not vectors:
        return [], 1
    length = len(vectors[0])
    if any(len(v) != length for v in vectors):
        raise ValueError("residue vectors have different lengths")
    combined = [0] * length
    m = 1
    for p, vec in zip(primes, vectors):
        inv = pow(m, -1, p)
        for i, v in enumerate(vec):
            r = combined[i]
            combined[i] = r + m * ((v - r) * inv % p)
        m *= p
    return combined, m


def rational_reconstruct(r: int, m: int) -> Fraction | None:
    """Recover ``p/q`` from ``r = p/q mod m`` with ``|p|, q <= sqrt(m/2)``.

    Returns ``None`` when no such fraction exists.
    """
    if m <= 0:
        raise ValueError("modulus must be positive")
    r %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, r
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    num, den = (r1, t1) if t1 > 0 else (-r1, -t1)
    if math.gcd(num, den) != 1 or math.gcd(den, m) != 1:
        return None
    return Fraction(num, den)


def int_content(values: Iterable) -> int:
    """gcd of the absolute values of the (integer) coefficients."""
    g = 0
    for v in values:
        v = as_fraction(v)
        if v.denominator != 1:
            raise ValueError("content needs integer coefficients")
        g = math.gcd(g, v.numerator)
    if g == 0:
        raise ValueError("content of the zero polynomial is undefined")
    return g


content = int_content


def clear_denominators(values: Sequence) -> tuple[list[int], int]:
    """Scale rationals by the lcm of their denominators."""
    fr = [as_fraction(v) for v in values]
    d = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr), 1)
    return [int(f * d) for f in fr], d


def certify_nullvector(A: Sequence[Sequence[int]], y: Sequence[int], m: int,
                       check_residue: bool = True) -> bool:
    """Certify ``A y = 0`` over Z from the identity modulo ``m``.

    True iff ``A y = 0 (mod m)`` and ``n * max|A| * max|y| < m/2``, where
    ``n`` is the number of columns.
    """
    if not A:
        return True
    n = len(A[0])
    if len(y) != n:
        raise ValueError("dimension mismatch between matrix and vector")
    amax = max((abs(int(a)) for row in A for a in row), default=0)
    ymax = max((abs(int(v)) for v in y), default=0)
    if 2 * n * amax * ymax >= m:
        return False
    if check_residue:
        for row in A:
            if sum(int(a) * int(v) for a, v in zip(row, y)) % m:
                return False
    return True


def certification_bound(n: int, amax: int, ymax: int) -> int:
    return n * amax * ymax


# ---------------------------------------------------------------------------
# residue vectors and shard files


@dataclass
class ResidueVector:
    primes: list[int]
    residues: list[list[int]]

    def __post_init__(self):
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be pairwise distinct")
        if len(self.primes) != len(self.residues):
            raise ValueError("one residue vector per prime")
        if self.residues and len({len(r) for r in self.residues}) != 1:
            raise ValueError("residue vectors have different lengths")

    @property
    def combined_modulus(self) -> int:
        return math.prod(self.primes)

    def combine(self) -> tuple[list[int], int]:
        return crt_vectors(self.primes, self.residues)

    def reconstruct(self) -> list[Fraction | None]:
        combined, m = self.combine()
        return [rational_reconstruct(c, m) for c in combined]


def write_residue_file(path, prime: int, residues: Sequence[int], header: Sequence[str] = ()) -> None:
    """One prime per file: the prime on line 1, optional header lines, then residues."""
    lines = [str(prime), *header, *(str(int(r) % prime) for r in residues)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_residue_file(path, header_lines: int = 0) -> tuple[int, list[str], list[int]]:
    text = Path(path).read_text().splitlines()
    if not text:
        raise ValueError(f"{path}: empty residue file")
    try:
        prime = int(text[0])
    except ValueError:
        raise ValueError(f"{path}:1: expected a prime, got {text[0]!r}") from None
    header = text[1:1 + header_lines]
    residues = []
    for lineno, line in enumerate(text[1 + header_lines:], start=2 + header_lines):
        line = line.strip()
        if not line:
            continue
        try:
            v = int(line)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad residue {line!r}") from None
        if not 0 <= v < prime:
            raise ValueError(f"{path}:{lineno}: residue {v} out of range for {prime}")
        residues.append(v)
    return prime, header, residues


# ---------------------------------------------------------------------------
# small exact linear algebra


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Gaussian elimination over Q."""
    a = [[as_fraction(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        pv = a[c][c]
        result *= pv
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return sign * result


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]
