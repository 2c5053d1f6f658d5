"""Dense linear algebra over GF(2).

Rows are packed into Python ints, most significant bit first: entry ``j`` of
a length-``n`` row lives at bit ``n - 1 - j``.  That matches the way CA
configurations are stored (cell 0 is the most significant bit), so a
configuration int can be used directly as a vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError

__all__ = [
    "BitVector",
    "BitMatrix",
    "identity",
    "zeros",
    "mat_mul",
    "mat_pow",
    "mat_vec",
    "rank",
    "rational_rank",
    "transpose",
    "block_diag",
    "hstack",
    "vstack",
]


def _parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class BitVector:
    """Immutable bit vector; ``bits`` holds entry 0 at the top bit."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"vector length must be >= 1, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise DimensionError(f"bits do not fit in length {self.n}")

    @classmethod
    def from_str(cls, s: str) -> "BitVector":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise DimensionError(f"not a bit string: {s!r}")
        return cls(len(s), int(s, 2))

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "BitVector":
        return cls.from_str("".join("1" if e else "0" for e in entries))

    @classmethod
    def unit(cls, n: int, j: int) -> "BitVector":
        """e_j: a single 1 at position ``j`` (0-indexed)."""
        if not 0 <= j < n:
            raise DimensionError(f"unit index {j} out of range for length {n}")
        return cls(n, 1 << (n - 1 - j))

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexError(j)
        return (self.bits >> (self.n - 1 - j)) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise DimensionError(f"length mismatch {self.n} vs {other.n}")
        return BitVector(self.n, self.bits ^ other.bits)

    def is_zero(self) -> bool:
        return self.bits == 0

    def to_list(self) -> list[int]:
        return [self[j] for j in range(self.n)]

    def __str__(self) -> str:
        return format(self.bits, f"0{self.n}b")


@dataclass(frozen=True)
class BitMatrix:
    """Immutable ``nrows x ncols`` matrix over GF(2), one int per row."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.nrows < 1 or self.ncols < 1:
            raise DimensionError(f"matrix must be at least 1x1, got {self.nrows}x{self.ncols}")
        if len(self.rows) != self.nrows:
            raise DimensionError("row count does not match nrows")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise DimensionError(f"row value does not fit in {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows: Iterable[int], ncols: int) -> "BitMatrix":
        rows = tuple(rows)
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> "BitMatrix":
        if not data or not data[0]:
            raise DimensionError("empty matrix")
        ncols = len(data[0])
        rows = []
        for row in data:
            if len(row) != ncols:
                raise DimensionError("ragged rows")
            rows.append(int("".join("1" if e else "0" for e in row), 2))
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        return cls.from_lists([[int(ch) for ch in r] for r in rows])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(idx)
        return (self.rows[i] >> (self.ncols - 1 - j)) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.ncols, self.rows[i])

    def to_lists(self) -> list[list[int]]:
        return [[(r >> (self.ncols - 1 - j)) & 1 for j in range(self.ncols)] for r in self.rows]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        n = self.ncols
        return all(r == 1 << (n - 1 - i) for i, r in enumerate(self.rows))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __str__(self) -> str:
        return "\n".join(format(r, f"0{self.ncols}b") for r in self.rows)


def identity(n: int) -> BitMatrix:
    if n < 1:
        raise DimensionError(f"identity size must be >= 1, got {n}")
    return BitMatrix(n, n, tuple(1 << (n - 1 - i) for i in range(n)))


def zeros(nrows: int, ncols: int) -> BitMatrix:
    return BitMatrix(nrows, ncols, (0,) * nrows)


def _mul_rows(a_rows: Sequence[int], a_cols: int, b_rows: Sequence[int]) -> list[int]:
    # row i of the product is the XOR of the rows of b selected by row i of a
    out = []
    top = a_cols - 1
    for r in a_rows:
        acc = 0
        while r:
            low = r & -r
            acc ^= b_rows[top - (low.bit_length() - 1)]
            r ^= low
        out.append(acc)
    return out


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.nrows}x{a.ncols} by {b.nrows}x{b.ncols}")
    return BitMatrix(a.nrows, b.ncols, tuple(_mul_rows(a.rows, a.ncols, b.rows)))


def mat_pow(m: BitMatrix, e: int) -> BitMatrix:
    """``m**e`` by square-and-multiply; ``e`` may be an arbitrary-size int."""
    if m.nrows != m.ncols:
        raise DimensionError(f"mat_pow needs a square matrix, got {m.nrows}x{m.ncols}")
    if e < 0:
        raise ValueError("negative exponent")
    result = identity(m.nrows)
    base = m
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def mat_vec(m: BitMatrix, v: BitVector) -> BitVector:
    if m.ncols != v.n:
        raise DimensionError(f"cannot apply {m.nrows}x{m.ncols} matrix to length-{v.n} vector")
    acc = 0
    x = v.bits
    for r in m.rows:
        acc = (acc << 1) | _parity(r & x)
    return BitVector(m.nrows, acc)


def _rank_rows(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = r
                break
            r ^= p
    return len(pivots)


def rank(m: BitMatrix) -> int:
    """Rank over GF(2).  Works on a copy of the rows; ``m`` is untouched."""
    return _rank_rows(m.rows)


# Two primes just under 2**31 keep products inside int64.
_PRIMES = (2147483647, 2147483629)


def _rank_mod_p(a: np.ndarray, p: int) -> int:
    a = a.astype(np.int64) % p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        f = a[r + 1:, c].copy()
        if f.any():
            a[r + 1:] = (a[r + 1:] - (f[:, None] * a[r]) % p) % p
        r += 1
    return r


def rational_rank(m: BitMatrix) -> int:
    """Rank of the 0/1 matrix taken over the rationals instead of GF(2).

    Computed as the larger of two ranks modulo distinct ~2**31 primes.  Each
    modular rank is a lower bound on the rational rank; both falling short
    would need both primes to divide every maximal nonzero minor.
    """
    a = m.to_numpy()
    return max(_rank_mod_p(a, p) for p in _PRIMES)


def transpose(m: BitMatrix) -> BitMatrix:
    out = []
    for j in range(m.ncols):
        shift = m.ncols - 1 - j
        acc = 0
        for r in m.rows:
            acc = (acc << 1) | ((r >> shift) & 1)
        out.append(acc)
    return BitMatrix(m.ncols, m.nrows, tuple(out))


def hstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    nrows = blocks[0].nrows
    if any(b.nrows != nrows for b in blocks):
        raise DimensionError("hstack needs equal row counts")
    rows = []
    for i in range(nrows):
        acc = 0
        for b in blocks:
            acc = (acc << b.ncols) | b.rows[i]
        rows.append(acc)
    return BitMatrix(nrows, sum(b.ncols for b in blocks), tuple(rows))


def vstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    ncols = blocks[0].ncols
    if any(b.ncols != ncols for b in blocks):
        raise DimensionError("vstack needs equal column counts")
    rows = tuple(r for b in blocks for r in b.rows)
    return BitMatrix(len(rows), ncols, rows)


def block_diag(blocks: Sequence[BitMatrix]) -> BitMatrix:
    total = sum(b.ncols for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        shift = total - offset - b.ncols
        rows.extend(r << shift for r in b.rows)
        offset += b.ncols
    return BitMatrix(len(rows), total, tuple(rows))
