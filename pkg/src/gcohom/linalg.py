"""Exact sparse linear algebra over the rationals.

Ranks are computed modulo two independent random word-size primes; on
agreement the common value is accepted (a bad prime can only lower the
rank, and two independent primes lowering it to the same value is the
failure mode we accept at desk scale), on disagreement the computation
escalates to fraction-free elimination over the rationals.  A fixed seed
makes runs reproducible; `rank_context` overrides the primes, which the
tests use to inject a bad prime.
"""

from __future__ import annotations

import json
import random
import struct
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

__all__ = [
    "SparseMatrix",
    "rank",
    "rank_modp",
    "rank_exact",
    "image_basis",
    "rank_context",
    "set_prime_seed",
    "write_matrix",
    "read_matrix",
    "matrix_to_json",
    "matrix_from_json",
]

_DENSE_LIMIT = 4_000_000  # entries; above this the pure sparse path is used


class SparseMatrix:
    """Immutable sparse matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (r, c), val in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise ValueError("entry (%d,%d) out of shape" % (r, c))
                val = Fraction(val)
                if val:
                    if (r, c) in self.entries:
                        raise ValueError("duplicate entry (%d,%d)" % (r, c))
                    self.entries[(r, c)] = val

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def nnz(self):
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def transpose(self):
        return SparseMatrix(
            self.cols, self.rows,
            {(c, r): v for (r, c), v in self.entries.items()})

    def permuted(self, row_perm=None, col_perm=None):
        rp = row_perm or list(range(self.rows))
        cp = col_perm or list(range(self.cols))
        return SparseMatrix(
            self.rows, self.cols,
            {(rp[r], cp[c]): v for (r, c), v in self.entries.items()})

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        m = SparseMatrix(self.rows, self.cols)
        m.entries = out
        return m

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, s):
        s = Fraction(s)
        m = SparseMatrix(self.rows, self.cols)
        if s:
            m.entries = {k: v * s for k, v in self.entries.items()}
        return m

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                s = acc.get(key, 0) + v * w
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        m = SparseMatrix(self.rows, other.cols)
        m.entries = acc
        return m

    def __eq__(self, other):
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            self.entries == other.entries

    def column(self, j):
        return {r: v for (r, c), v in self.entries.items() if c == j}

    def __repr__(self):
        return "SparseMatrix(%dx%d, nnz=%d)" % (self.rows, self.cols, self.nnz())


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------

_PRIME_SEED = 987654321


def set_prime_seed(seed):
    global _PRIME_SEED
    _PRIME_SEED = seed


_FORCED_PRIMES = None


@contextmanager
def rank_context(primes):
    """Force the modular primes (testing hook for bad-prime injection)."""
    global _FORCED_PRIMES
    old = _FORCED_PRIMES
    _FORCED_PRIMES = tuple(primes)
    try:
        yield
    finally:
        _FORCED_PRIMES = old


def _random_primes(count, seed=None):
    rng = random.Random(_PRIME_SEED if seed is None else seed)
    out = []
    while len(out) < count:
        cand = rng.randrange(2**31, 2**32) | 1
        if _is_prime(cand) and cand not in out:
            out.append(cand)
    return out


def _is_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


def _entries_modp(m: SparseMatrix, p):
    """Residue entries; None when a denominator is divisible by p."""
    out = {}
    for (r, c), v in m.entries.items():
        den = v.denominator % p
        if den == 0:
            return None
        val = v.numerator % p * pow(den, -1, p) % p
        if val:
            out[(r, c)] = val
    return out


def rank_modp(m: SparseMatrix, p) -> int:
    """Rank of the matrix reduced modulo p; None if p divides a denominator."""
    entries = _entries_modp(m, p)
    if entries is None:
        return None
    if not entries:
        return 0
    if m.rows * m.cols <= _DENSE_LIMIT:
        return _rank_modp_dense(m.rows, m.cols, entries, p)
    return _rank_modp_sparse(m.rows, m.cols, entries, p)


def _rank_modp_dense(rows, cols, entries, p):
    a = np.zeros((rows, cols), dtype=np.int64)
    for (r, c), v in entries.items():
        a[r, c] = v
    rank = 0
    row = 0
    for col in range(cols):
        piv = None
        for r in range(row, rows):
            if a[r, col]:
                piv = r
                break
        if piv is None:
            continue
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), -1, p)
        a[row] = a[row] * inv % p
        mask = a[row + 1:, col] != 0
        if mask.any():
            factors = a[row + 1:, col][mask][:, None]
            a[row + 1:][mask] = (a[row + 1:][mask] - factors * a[row][None, :]) % p
        rank += 1
        row += 1
        if row == rows:
            break
    return rank


def _rank_modp_sparse(rows, cols, entries, p):
    row_data = [dict() for _ in range(rows)]
    for (r, c), v in entries.items():
        row_data[r][c] = v
    live = [r for r in range(rows) if row_data[r]]
    rank = 0
    while live:
        # pivot on the shortest live row to limit fill-in
        live.sort(key=lambda r: len(row_data[r]))
        r0 = live.pop(0)
        prow = row_data[r0]
        if not prow:
            continue
        col = min(prow, key=lambda c: (len_col(row_data, live, c), c))
        inv = pow(prow[col], -1, p)
        prow = {c: v * inv % p for c, v in prow.items()}
        rank += 1
        for r in live:
            other = row_data[r]
            f = other.get(col)
            if not f:
                continue
            for c, v in prow.items():
                s = (other.get(c, 0) - f * v) % p
                if s:
                    other[c] = s
                else:
                    other.pop(c, None)
        live = [r for r in live if row_data[r]]
    return rank


def len_col(row_data, live, c):
    return sum(1 for r in live if c in row_data[r])


def rank_exact(m: SparseMatrix) -> int:
    """Fraction-free Gaussian elimination over the rationals."""
    rows = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    live = [r for r in range(m.rows) if rows[r]]
    rank = 0
    while live:
        live.sort(key=lambda r: len(rows[r]))
        r0 = live.pop(0)
        prow = rows[r0]
        if not prow:
            continue
        col = min(prow)
        pval = prow[col]
        rank += 1
        for r in live:
            other = rows[r]
            f = other.get(col)
            if not f:
                continue
            factor = f / pval
            for c, v in prow.items():
                s = other.get(c, 0) - factor * v
                if s:
                    other[c] = s
                else:
                    other.pop(c, None)
        live = [r for r in live if rows[r]]
    return rank


def rank(m: SparseMatrix, seed=None) -> int:
    """Exact rank: two modular ranks must agree, else escalate to exact."""
    if not m.entries:
        return 0
    primes = _FORCED_PRIMES or _random_primes(2, seed)
    vals = [rank_modp(m, p) for p in primes]
    vals = [v for v in vals if v is not None]
    if len(vals) == 2 and vals[0] == vals[1]:
        return vals[0]
    return rank_exact(m)


def image_basis(m: SparseMatrix):
    """Independent columns spanning the column space, as {row: coeff} dicts.

    Column echelon over the rationals; returns rank-many vectors.
    """
    cols = []
    for j in range(m.cols):
        col = m.column(j)
        if col:
            cols.append(col)
    basis = []
    for col in cols:
        cur = dict(col)
        for piv_row, piv_vec in basis:
            f = cur.get(piv_row)
            if f:
                factor = f / piv_vec[piv_row]
                for r, v in piv_vec.items():
                    s = cur.get(r, 0) - factor * v
                    if s:
                        cur[r] = s
                    else:
                        cur.pop(r, None)
        if cur:
            piv_row = min(cur)
            basis.append((piv_row, cur))
    return [vec for _piv, vec in basis]


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_MAGIC = b"GCMX"
_VERSION = 1


def write_matrix(path, m: SparseMatrix, header=None):
    """Binary format: magic, version byte, u32 header length + UTF-8 JSON
    header (includes dims), u64 count, then (u32 row, u32 col, i64 num,
    u64 den) little-endian triplets."""
    meta = dict(header or {})
    meta["rows"] = m.rows
    meta["cols"] = m.cols
    blob = json.dumps(meta, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<B", _VERSION))
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(struct.pack("<Q", len(m.entries)))
        for (r, c) in sorted(m.entries):
            v = m.entries[(r, c)]
            fh.write(struct.pack("<IIqQ", r, c, v.numerator, v.denominator))


def read_matrix(path):
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError("not a matrix file")
        (version,) = struct.unpack("<B", fh.read(1))
        if version != _VERSION:
            raise ValueError("unsupported version %d" % version)
        (hlen,) = struct.unpack("<I", fh.read(4))
        meta = json.loads(fh.read(hlen).decode())
        (count,) = struct.unpack("<Q", fh.read(8))
        entries = {}
        for _ in range(count):
            r, c, num, den = struct.unpack("<IIqQ", fh.read(24))
            entries[(r, c)] = Fraction(num, den)
    return SparseMatrix(meta["rows"], meta["cols"], entries), meta


def matrix_to_json(m: SparseMatrix, header=None):
    meta = dict(header or {})
    meta["rows"] = m.rows
    meta["cols"] = m.cols
    meta["entries"] = [
        [r, c, str(v)] for (r, c), v in sorted(m.entries.items())
    ]
    return meta


def matrix_from_json(meta):
    entries = {
        (r, c): Fraction(v) for r, c, v in meta["entries"]
    }
    return SparseMatrix(meta["rows"], meta["cols"], entries)
