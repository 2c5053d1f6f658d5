"""Null-boundary rule 90/150 cellular automata.

A configuration of ``k`` cells is an int whose most significant bit (bit
``k-1``) is cell 0.  Rule 90 XORs the two neighbours, rule 150 also XORs the
cell itself, and cells beyond either end read as 0.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .bitlinalg import BitMatrix, BitVector, mat_pow
from .errors import DimensionError, InvalidInputError, UnsupportedSizeError

__all__ = [
    "RuleVector",
    "Gf2Poly",
    "FactorTable",
    "step",
    "step_int",
    "characteristic_matrix",
    "char_poly",
    "n1_fraction",
    "verify_maximal_period",
    "orbit_length",
    "DEFAULT_VERIFY_CAP",
]

RULES = (90, 150)
DEFAULT_VERIFY_CAP = 64


@dataclass(frozen=True)
class RuleVector:
    rules: tuple[int, ...]

    def __post_init__(self):
        if not self.rules:
            raise DimensionError("rule vector must have at least one cell")
        bad = [r for r in self.rules if r not in RULES]
        if bad:
            raise InvalidInputError(f"only rules 90 and 150 are supported, got {bad[0]}")
        object.__setattr__(self, "rules", tuple(int(r) for r in self.rules))

    @classmethod
    def uniform(cls, k: int, rule: int = 90) -> "RuleVector":
        return cls((rule,) * k)

    @classmethod
    def with_150_at(cls, k: int, positions: Iterable[int]) -> "RuleVector":
        """Rule 150 at the given 1-indexed cells, rule 90 elsewhere."""
        rules = [90] * k
        for p in positions:
            if not 1 <= p <= k:
                raise InvalidInputError(f"position {p} outside 1..{k}")
            rules[p - 1] = 150
        return cls(tuple(rules))

    @property
    def k(self) -> int:
        return len(self.rules)

    @property
    def mask150(self) -> int:
        k = self.k
        m = 0
        for i, r in enumerate(self.rules):
            if r == 150:
                m |= 1 << (k - 1 - i)
        return m

    @property
    def positions150(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, r in enumerate(self.rules) if r == 150)

    def __len__(self) -> int:
        return self.k

    def __str__(self) -> str:
        return "<" + ",".join(map(str, self.rules)) + ">"


def step_int(c: int, k: int, mask150: int) -> int:
    """One synchronous update of a packed configuration."""
    full = (1 << k) - 1
    return (c >> 1) ^ ((c << 1) & full) ^ (c & mask150)


def step(rv: RuleVector, c: BitVector) -> BitVector:
    if c.n != rv.k:
        raise DimensionError(f"configuration has {c.n} cells, rule vector has {rv.k}")
    return BitVector(rv.k, step_int(c.bits, rv.k, rv.mask150))


def characteristic_matrix(rv: RuleVector) -> BitMatrix:
    k = rv.k
    rows = []
    for i, r in enumerate(rv.rules):
        row = 0
        if i > 0:
            row |= 1 << (k - i)  # cell i-1
        if i < k - 1:
            row |= 1 << (k - 2 - i)  # cell i+1
        if r == 150:
            row |= 1 << (k - 1 - i)
        rows.append(row)
    return BitMatrix(k, k, tuple(rows))


@dataclass(frozen=True)
class Gf2Poly:
    """Polynomial over GF(2); bit ``i`` of ``bits`` is the coefficient of x^i."""

    bits: int

    def __post_init__(self):
        if self.bits < 0:
            raise InvalidInputError("negative coefficient mask")

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    @property
    def n1(self) -> int:
        return self.bits.bit_count()

    def coeffs(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.degree + 1)]

    def is_zero(self) -> bool:
        return self.bits == 0

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
        return " + ".join(terms)


def char_poly(rv: RuleVector) -> Gf2Poly:
    # p_i = (x + d_i) p_{i-1} + p_{i-2}, coefficients as bit masks
    prev, cur = 0, 1
    for r in rv.rules:
        d = 1 if r == 150 else 0
        prev, cur = cur, (cur << 1) ^ (cur if d else 0) ^ prev
    return Gf2Poly(cur)


def n1_fraction(p: Gf2Poly) -> tuple[int, float]:
    if p.is_zero():
        raise InvalidInputError("N1 is undefined for the zero polynomial")
    n1 = p.n1
    deg = p.degree
    return n1, (n1 / deg if deg else float(n1))


class FactorTable:
    """Prime factorisations of 2^k - 1, read from ``k: p1 p2 ...`` lines."""

    ENV_VAR = "CAPRNG_FACTORS"

    def __init__(self, factors: Mapping[int, tuple[int, ...]]):
        self._factors = dict(factors)

    @classmethod
    def parse(cls, text: str) -> "FactorTable":
        table: dict[int, tuple[int, ...]] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, sep, tail = line.partition(":")
            if not sep:
                raise InvalidInputError(f"factor table line {lineno}: missing ':'")
            try:
                k = int(head)
                primes = tuple(int(p) for p in tail.split())
            except ValueError as exc:
                raise InvalidInputError(f"factor table line {lineno}: {exc}") from None
            prod = 1
            for p in primes:
                prod *= p
            if prod != (1 << k) - 1:
                raise InvalidInputError(f"factor table line {lineno}: product is not 2^{k}-1")
            table[k] = primes
        return cls(table)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "FactorTable":
        """Load from ``path``, else ``$CAPRNG_FACTORS``, else the shipped table."""
        if path is None:
            path = os.environ.get(cls.ENV_VAR) or None
        if path is None:
            return default_factor_table()
        return cls.parse(Path(path).read_text())

    def __contains__(self, k: int) -> bool:
        return k in self._factors

    def factors(self, k: int) -> tuple[int, ...]:
        try:
            return self._factors[k]
        except KeyError:
            raise UnsupportedSizeError(f"no factorisation of 2^{k}-1 in the factor table") from None

    def distinct_primes(self, k: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.factors(k))))


@lru_cache(maxsize=1)
def default_factor_table() -> FactorTable:
    text = resources.files("caprng").joinpath("data/factors.txt").read_text()
    return FactorTable.parse(text)


@lru_cache(maxsize=4096)
def _is_maximal(rules: tuple[int, ...], primes: tuple[int, ...]) -> bool:
    t = characteristic_matrix(RuleVector(rules))
    k = len(rules)
    order = (1 << k) - 1
    if not mat_pow(t, order).is_identity():
        return False
    return all(not mat_pow(t, order // p).is_identity() for p in primes)


def verify_maximal_period(
    rv: RuleVector,
    factor_table: FactorTable | None = None,
    cap: int = DEFAULT_VERIFY_CAP,
) -> bool:
    """True iff the CA cycles through all 2^k - 1 nonzero states."""
    if rv.k > cap:
        raise UnsupportedSizeError(f"k={rv.k} exceeds the verification cap {cap}")
    if factor_table is None:
        factor_table = default_factor_table()
    if rv.k == 1:
        # 2^1 - 1 = 1 has no prime factors; only the 150 cell maps 1 -> 1
        return mat_pow(characteristic_matrix(rv), 1).is_identity()
    return _is_maximal(rv.rules, factor_table.distinct_primes(rv.k))


def orbit_length(rv: RuleVector, seed: int | None = None, limit: int | None = None) -> int:
    """Brute-force cycle length of ``seed`` (cell 0 only, by default)."""
    k = rv.k
    start = (1 << (k - 1)) if seed is None else seed
    if start == 0:
        return 1
    m = rv.mask150
    limit = (1 << k) if limit is None else limit
    c = step_int(start, k, m)
    n = 1
    while c != start:
        c = step_int(c, k, m)
        n += 1
        if n > limit:
            return 0
    return n

