"""Sparse exact multivectors in the exterior powers of Q^n, hypercube tensors,
and the coordinate projections between the two formats.

Basis keys of a :class:`Multivector` are strictly increasing 1-based index
tuples.  Hypercube tensor indices are 0-based.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .exactnum import as_fraction, det, format_rational, parse_rational


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has a repeat."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign of ``e_a ^ e_b`` relative to the sorted union (0 if they overlap)."""
    sb = set(b)
    if any(x in sb for x in a):
        return 0
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions & 1 else 1


def basis_keys(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(1, n + 1), k))


class Multivector:
    """Element of the k-th exterior power of an n-dimensional space."""

    __slots__ = ("n", "k", "entries")

    def __init__(self, n: int, k: int, entries: Mapping | Iterable = ()):
        if not 0 <= k <= n:
            raise ValueError(f"degree {k} out of range for n={n}")
        self.n = n
        self.k = k
        data: dict[tuple[int, ...], Fraction] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for key, value in items:
            key = tuple(int(i) for i in key)
            if len(key) != k:
                raise ValueError(f"key {key} has wrong length for degree {k}")
            if any(not 1 <= i <= n for i in key):
                raise ValueError(f"index out of range in {key} (n={n})")
            s = permutation_sign(key)
            if s == 0:
                continue
            key = tuple(sorted(key))
            v = data.get(key, 0) + s * as_fraction(value)
            if v:
                data[key] = v
            else:
                data.pop(key, None)
        self.entries = data

    @classmethod
    def basis(cls, n: int, *indices: int) -> "Multivector":
        return cls(n, len(indices), {tuple(indices): 1})

    @classmethod
    def zero(cls, n: int, k: int) -> "Multivector":
        return cls(n, k)

    def __getitem__(self, key) -> Fraction:
        key = tuple(key)
        s = permutation_sign(key)
        if s == 0:
            return Fraction(0)
        return s * self.entries.get(tuple(sorted(key)), Fraction(0))

    def _check(self, other: "Multivector"):
        if not isinstance(other, Multivector):
            raise TypeError("expected a Multivector")
        if other.n != self.n:
            raise ValueError(f"ambient dimensions differ: {self.n} vs {other.n}")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        if other.k != self.k:
            raise ValueError("cannot add multivectors of different degree")
        out = dict(self.entries)
        for key, v in other.entries.items():
            out[key] = out.get(key, 0) + v
        return Multivector(self.n, self.k, out)

    def __neg__(self):
        return Multivector(self.n, self.k, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Multivector":
        c = as_fraction(c)
        return Multivector(self.n, self.k, {k: c * v for k, v in self.entries.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.n, self.k, self.entries) == (other.n, other.k, other.entries)

    def __bool__(self):
        return bool(self.entries)

    def __repr__(self):
        terms = " + ".join(f"{format_rational(v)}*e{''.join(map(str, k))}"
                           for k, v in sorted(self.entries.items()))
        return f"Multivector(n={self.n}, k={self.k}: {terms or '0'})"

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def scalar(self) -> Fraction:
        if self.k != 0:
            raise ValueError("not a scalar")
        return self.entries.get((), Fraction(0))

    def pairing(self, other: "Multivector") -> Fraction:
        """Standard inner product in which the wedge basis is orthonormal."""
        self._check(other)
        if other.k != self.k:
            return Fraction(0)
        return sum((v * other.entries.get(key, 0) for key, v in self.entries.items()), Fraction(0))

    def to_vector(self) -> list[Fraction]:
        return [self.entries.get(key, Fraction(0)) for key in basis_keys(self.n, self.k)]

    @classmethod
    def from_vector(cls, n: int, k: int, values: Sequence) -> "Multivector":
        keys = basis_keys(n, k)
        if len(values) != len(keys):
            raise ValueError(f"expected {len(keys)} coordinates, got {len(values)}")
        return cls(n, k, {key: v for key, v in zip(keys, values) if v})


def wedge(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    if a.k + b.k > a.n:
        raise ValueError(f"wedge degree {a.k}+{b.k} exceeds n={a.n}")
    out: dict[tuple[int, ...], Fraction] = {}
    for ka, va in a.entries.items():
        for kb, vb in b.entries.items():
            s = merge_sign(ka, kb)
            if s:
                key = tuple(sorted(ka + kb))
                out[key] = out.get(key, 0) + s * va * vb
    return Multivector(a.n, a.k + b.k, out)


def contract(a: Multivector, t: Multivector) -> Multivector:
    """Interior product of ``t`` into ``a``: the adjoint of ``b -> t ^ b``."""
    a._check(t)
    if a.k < t.k:
        raise ValueError(f"cannot contract degree {t.k} into degree {a.k}")
    out: dict[tuple[int, ...], Fraction] = {}
    for kt, vt in t.entries.items():
        st = set(kt)
        for ka, va in a.entries.items():
            if not st.issubset(ka):
                continue
            rest = tuple(i for i in ka if i not in st)
            s = merge_sign(kt, rest)
            out[rest] = out.get(rest, 0) + s * va * vt
    return Multivector(a.n, a.k - t.k, out)


def complement(key: Sequence[int], n: int) -> tuple[int, ...]:
    s = set(key)
    return tuple(i for i in range(1, n + 1) if i not in s)


def volume_dual(a: Multivector) -> Multivector:
    """Hodge-type isomorphism defined by ``e_I ^ dual(e_I) = e_1 ^ ... ^ e_n``."""
    n = a.n
    out = {}
    for key, v in a.entries.items():
        comp = complement(key, n)
        out[comp] = merge_sign(key, comp) * v
    return Multivector(n, n - a.k, out)


def apply_group_element(t: Multivector, g: Sequence[Sequence]) -> Multivector:
    """Induced action ``e_I -> g e_i1 ^ ... ^ g e_ik`` of an n x n matrix."""
    n, k = t.n, t.k
    if len(g) != n or any(len(row) != n for row in g):
        raise ValueError(f"group element must be {n}x{n}")
    g = [[as_fraction(x) for x in row] for row in g]
    targets = basis_keys(n, k)
    out: dict[tuple[int, ...], Fraction] = {}
    for key, v in t.entries.items():
        cols = [i - 1 for i in key]
        for target in targets:
            rows = [j - 1 for j in target]
            m = det([[g[r][c] for c in cols] for r in rows]) if k else Fraction(1)
            if m:
                out[target] = out.get(target, 0) + m * v
    return Multivector(n, k, out)


# ---------------------------------------------------------------------------
# hypercube tensors


class HypercubeTensor:
    """Sparse tensor with 0-based multi-indices and given mode sizes."""

    __slots__ = ("shape", "entries")

    def __init__(self, shape: Sequence[int], entries: Mapping | Iterable = ()):
        self.shape = tuple(int(s) for s in shape)
        data: dict[tuple[int, ...], Fraction] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for idx, value in items:
            idx = tuple(int(i) for i in idx)
            if len(idx) != len(self.shape) or any(not 0 <= i < s for i, s in zip(idx, self.shape)):
                raise ValueError(f"index {idx} out of bounds for shape {self.shape}")
            v = data.get(idx, 0) + as_fraction(value)
            if v:
                data[idx] = v
            else:
                data.pop(idx, None)
        self.entries = data

    def __getitem__(self, idx) -> Fraction:
        return self.entries.get(tuple(idx), Fraction(0))

    def __add__(self, other: "HypercubeTensor") -> "HypercubeTensor":
        if other.shape != self.shape:
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return HypercubeTensor(self.shape, out)

    def scale(self, c) -> "HypercubeTensor":
        c = as_fraction(c)
        return HypercubeTensor(self.shape, {k: c * v for k, v in self.entries.items()})

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, HypercubeTensor):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __bool__(self):
        return bool(self.entries)

    def __repr__(self):
        terms = " + ".join(f"{format_rational(v)}*x{''.join(map(str, k))}"
                           for k, v in sorted(self.entries.items()))
        return f"HypercubeTensor({'x'.join(map(str, self.shape))}: {terms or '0'})"

    def items(self):
        return self.entries.items()


def _validate_grouping(grouping: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    blocks = [tuple(int(i) for i in b) for b in grouping]
    flat = [i for b in blocks for i in b]
    if sorted(flat) != list(range(1, n + 1)):
        raise ValueError(f"grouping {blocks} is not a partition of 1..{n}")
    if len({len(b) for b in blocks}) != 1:
        raise ValueError("grouping blocks must have equal size")
    return blocks


def project_to_hypercube(t: Multivector, grouping: Sequence[Sequence[int]]) -> HypercubeTensor:
    """Coordinate projection onto the tensor product of the blocks.

    ``grouping`` lists ordered blocks of indices; block ``j`` is mode ``j`` and
    the position of an index inside its block is its coordinate.  Wedge
    monomials that do not meet every block exactly once map to zero.
    """
    blocks = _validate_grouping(grouping, t.n)
    if len(blocks) != t.k:
        raise ValueError(f"need {t.k} blocks for degree {t.k}, got {len(blocks)}")
    where = {i: (j, pos) for j, b in enumerate(blocks) for pos, i in enumerate(b)}
    out = {}
    for key, v in t.entries.items():
        modes = [where[i] for i in key]
        if len({m for m, _ in modes}) != t.k:
            continue
        ordered = sorted(zip(modes, key))
        chosen = [i for _, i in ordered]
        idx = tuple(pos for (_, pos), _ in ordered)
        out[idx] = permutation_sign(chosen) * v
    return HypercubeTensor([len(blocks[0])] * len(blocks), out)


def embed_hypercube(x: HypercubeTensor, grouping: Sequence[Sequence[int]]) -> Multivector:
    """Right inverse of :func:`project_to_hypercube`: ``x_I -> e_{b1[i1]} ^ ... ^ e_{bk[ik]}``."""
    n = sum(len(b) for b in grouping)
    blocks = _validate_grouping(grouping, n)
    if len(blocks) != len(x.shape):
        raise ValueError("one block per tensor mode required")
    entries = []
    for idx, v in x.entries.items():
        entries.append((tuple(blocks[j][i] for j, i in enumerate(idx)), v))
    return Multivector(n, len(blocks), entries)


def symmetrize(x: HypercubeTensor) -> dict[tuple[int, ...], Fraction]:
    """Average over permutations of each multi-index, keyed by sorted index."""
    if len(set(x.shape)) > 1:
        raise ValueError(f"symmetrization needs equal mode sizes, got {x.shape}")
    d, m = x.shape[0], len(x.shape)
    out = {}
    for key in itertools.combinations_with_replacement(range(d), m):
        perms = set(itertools.permutations(key))
        total = sum((x[p] for p in perms), Fraction(0))
        out[key] = total / len(perms)
    return out


# ---------------------------------------------------------------------------
# text file format


def format_tensor(t: Multivector | HypercubeTensor) -> str:
    if isinstance(t, Multivector):
        lines = [f"wedge {t.n} {t.k}"]
        for key, v in sorted(t.entries.items()):
            lines.append(" ".join(map(str, key)) + " " + format_rational(v))
    else:
        lines = ["cube " + " ".join(map(str, t.shape))]
        for idx, v in sorted(t.entries.items()):
            lines.append(" ".join(map(str, idx)) + " " + format_rational(v))
    return "\n".join(lines) + "\n"


def parse_tensor(text: str, source: str = "<string>") -> Multivector | HypercubeTensor:
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"{source}: empty tensor file")
    lineno, header = lines[0]
    parts = header.split()
    try:
        if parts[0] == "wedge" and len(parts) == 3:
            n, k = int(parts[1]), int(parts[2])
            width, make = k, lambda e: Multivector(n, k, e)
        elif parts[0] == "cube" and len(parts) >= 2:
            shape = [int(s) for s in parts[1:]]
            width, make = len(shape), lambda e: HypercubeTensor(shape, e)
        else:
            raise ValueError
    except ValueError:
        raise ValueError(f"{source}:{lineno}: bad header {header!r}") from None
    entries = []
    for lineno, line in lines[1:]:
        toks = line.split()
        if len(toks) != width + 1:
            raise ValueError(f"{source}:{lineno}: expected {width} indices and a value")
        try:
            idx = tuple(int(t) for t in toks[:width])
            value = parse_rational(toks[-1])
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
        entries.append((idx, value))
    try:
        return make(entries)
    except ValueError as exc:
        raise ValueError(f"{source}: {exc}") from None


def load_tensor(path) -> Multivector | HypercubeTensor:
    return parse_tensor(Path(path).read_text(), str(path))


def save_tensor(t: Multivector | HypercubeTensor, path) -> None:
    Path(path).write_text(format_tensor(t))


def dimension(n: int, k: int) -> int:
    return comb(n, k)
