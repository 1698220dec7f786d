"""Exact nullspaces over Q and over Z/p.

Pivoting is deterministic everywhere: columns are scanned left to right and
the first row (top to bottom) holding a nonzero entry becomes the pivot.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        ints = [int(x * den) for x in row]
        g = 0
        for v in ints:
            g = gcd(g, v)
        out.append([v // g for v in ints] if g > 1 else ints)
    return out


def row_echelon_rational(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss-style) echelon form with primitive integer rows."""
    m = _integer_rows(rows)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        a = prow[c]
        for i in range(len(m)):
            if i != r and m[i][c]:
                b = m[i][c]
                row = [a * x - b * y for x, y in zip(m[i], prow)]
                g = 0
                for v in row:
                    g = gcd(g, v)
                m[i] = [v // g for v in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace_rational(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right nullspace over Q, one vector per free column.

    Each vector has a 1 in its free column and zeros in the other free columns.
    """
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    ech, pivots = row_echelon_rational(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(ech, pivots):
            v[c] = Fraction(-row[f], row[c])
        basis.append(v)
    return basis


def solve_rational(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Unique exact solution of a consistent, full-column-rank system."""
    aug = [list(r) + [-Fraction(b)] for r, b in zip(rows, rhs)]
    ns = nullspace_rational(aug)
    ncols = len(rows[0])
    ns = [v for v in ns if v[ncols]]
    if len(ns) != 1 or nullspace_rational(rows):
        raise ValueError("system is inconsistent or underdetermined")
    v = ns[0]
    return [x / v[ncols] for x in v[:ncols]]


# ---------------------------------------------------------------------------
# modular


def _inv_mod(x: int, p: int) -> int:
    return pow(int(x), -1, p)


def row_echelon_mod(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod ``p`` (int64, in place on a copy)."""
    if p >= 1 << 31:
        raise ValueError("prime too large for int64 elimination")
    m = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * _inv_mod(m[r, c], p) % p
        col = m[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            m[rows] = (m[rows] - np.outer(col[rows], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace_mod(matrix: np.ndarray, p: int) -> list[np.ndarray]:
    matrix = np.asarray(matrix)
    ncols = matrix.shape[1]
    ech, pivots = row_echelon_mod(matrix, p)
    pivset = set(pivots)
    basis = []
    for f in (c for c in range(ncols) if c not in pivset):
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for row, c in zip(ech, pivots):
            v[c] = (-row[f]) % p
        basis.append(v)
    return basis


def _fmod(x: np.ndarray, p: int) -> np.ndarray:
    """In-place exact reduction of an integer-valued float64 array into [0, p)."""
    q = np.floor(x * (1.0 / p))
    q *= p
    x -= q
    np.add(x, p, out=x, where=x < 0)
    np.subtract(x, p, out=x, where=x >= p)
    return x


def _unit_lower_inverse_mod(L: np.ndarray, p: int) -> np.ndarray:
    k = L.shape[0]
    inv = np.eye(k, dtype=np.float64)
    for t in range(1, k):
        # row t of L^{-1} = e_t - sum_{s<t} L[t, s] * row s of L^{-1}
        inv[t, :t] = _fmod(-(L[t, :t] @ inv[:t, :t]), p)
    return inv


def nullspace_mod_blocked(matrix: np.ndarray, p: int, block: int = 128,
                          chunk: int = 2048, progress=None) -> list[np.ndarray]:
    """Nullspace mod a small prime for large dense matrices (blocked LU).

    Works in float64 so that trailing updates run through BLAS; with
    ``p**2 * max(block, ncols) < 2**52`` every intermediate is an exact integer.
    A float64 input array is overwritten.
    """
    a = matrix if (isinstance(matrix, np.ndarray) and matrix.dtype == np.float64) \
        else np.array(matrix, dtype=np.float64)
    nrows, ncols = a.shape
    if float(p) * p * max(block, ncols) >= 2.0 ** 52:
        raise ValueError("prime too large for exact float64 blocked elimination")
    for s in range(0, nrows, chunk):     # chunked: _fmod allocates a temporary
        _fmod(a[s:s + chunk], p)
    pivots: list[int] = []
    r = 0
    for c0 in range(0, ncols, block):
        if r == nrows:
            break
        c1 = min(c0 + block, ncols)
        r0 = r
        panel = a[r0:, c0:c1].copy()
        panel_cols = []
        swaps = []
        t = 0
        for j in range(c1 - c0):
            if t == panel.shape[0]:
                break
            nz = np.flatnonzero(panel[t:, j])
            if nz.size == 0:
                continue
            piv = t + int(nz[0])
            if piv != t:
                panel[[t, piv]] = panel[[piv, t]]
                swaps.append((r0 + t, r0 + piv))
            inv = _inv_mod(int(panel[t, j]), p)
            mult = _fmod(panel[t + 1:, j] * inv, p)
            if j + 1 < c1 - c0:
                below = panel[t + 1:, j + 1:]
                below -= np.outer(mult, panel[t, j + 1:])
                _fmod(below, p)
            panel[t + 1:, j] = mult
            panel_cols.append(c0 + j)
            t += 1
        r = r0 + t
        a[r0:, c0:c1] = panel
        del panel
        for x, y in swaps:
            a[[x, y], c1:] = a[[y, x], c1:]
        k = len(panel_cols)
        if k and c1 < ncols:
            L11 = a[r0:r, panel_cols]
            L11 = np.tril(L11, -1)
            u12 = _fmod(_unit_lower_inverse_mod(L11, p) @ a[r0:r, c1:], p)
            a[r0:r, c1:] = u12
            L21 = a[r:, panel_cols]
            for s in range(0, nrows - r, chunk):
                e = min(s + chunk, nrows - r)
                blockrows = a[r + s:r + e, c1:]
                blockrows -= L21[s:e] @ u12
                _fmod(blockrows, p)
        # drop the stored multipliers so only the echelon form remains
        for t, c in enumerate(panel_cols):
            a[r0 + t + 1:, c] = 0
        pivots.extend(panel_cols)
        if progress:
            progress(c1, ncols)
    pivset = set(pivots)
    basis = []
    for f in (c for c in range(ncols) if c not in pivset):
        v = np.zeros(ncols, dtype=np.float64)
        v[f] = 1.0
        for t in range(len(pivots) - 1, -1, -1):
            pc = pivots[t]
            s = float(np.dot(a[t, pc + 1:], v[pc + 1:])) % p
            v[pc] = (-s * _inv_mod(int(a[t, pc]), p)) % p
        basis.append(v.astype(np.int64))
    return basis
