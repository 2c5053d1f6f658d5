"""(t, l)-equidistribution analysis for the combined CA generators.

For a linear generator the t successive l-bit outputs are a linear image of
the seed.  Stacking those images for every unit seed gives a ``t*l x K``
binary matrix; the point set is (t, l)-equidistributed exactly when that
matrix has full row rank.

Two rank notions are offered.  ``gf2`` is the mathematically meaningful one:
it agrees with brute-force box counting.  ``rational`` treats the same 0/1
matrix as an integer matrix; published CA generator tables were computed
that way, so it is kept for reproducing them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .bitlinalg import BitMatrix, mat_mul, rank, rational_rank
from .combined import GeneratorSpec, transition_matrix
from .errors import InvalidInputError, ResourceError

__all__ = [
    "FIELDS",
    "DEFAULT_WORD_SIZE",
    "DEFAULT_ROW_CAP",
    "EquidistQuery",
    "TRecord",
    "EquidistReport",
    "top_bits_matrix",
    "build_b_matrix",
    "check_tl",
    "resolution",
    "resolution_linear",
    "phi_sets",
    "psi_sets",
    "me_verdict",
    "format_table",
    "format_records",
]

FIELDS = ("gf2", "rational")
DEFAULT_WORD_SIZE = 32
DEFAULT_ROW_CAP = 4096


def _rank_fn(field_: str) -> Callable[[BitMatrix], int]:
    if field_ == "gf2":
        return rank
    if field_ == "rational":
        return rational_rank
    raise InvalidInputError(f"rank field must be one of {FIELDS}, got {field_!r}")


@dataclass(frozen=True)
class EquidistQuery:
    t: int
    l: int
    L: int = DEFAULT_WORD_SIZE

    def __post_init__(self):
        if self.t < 1 or self.l < 1:
            raise InvalidInputError("t and l must be >= 1")
        if self.l > self.L:
            raise InvalidInputError(f"l={self.l} exceeds the word size {self.L}")


def top_bits_matrix(spec: GeneratorSpec, l: int) -> BitMatrix:
    """Map from the concatenated state to the top ``l`` bits of the combined word."""
    if not 1 <= l <= spec.width:
        raise InvalidInputError(f"l={l} outside 1..{spec.width}")
    K = spec.k_total
    rows = [0] * l
    col = 0
    for j, rv in enumerate(spec.components):
        off = spec.pad_offset(j)
        for i in range(l):
            cell = i - off
            if 0 <= cell < rv.k:
                rows[i] |= 1 << (K - 1 - (col + cell))
        col += rv.k
    return BitMatrix(l, K, tuple(rows))


def build_b_matrix(
    spec: GeneratorSpec,
    q: EquidistQuery,
    row_cap: int = DEFAULT_ROW_CAP,
) -> BitMatrix:
    """Row block n (n = 1..t) holds the top ``l`` output bits after n emitted words.

    Column j is the response to the unit seed e_j of the concatenated state,
    component 1 first.
    """
    t, l = q.t, q.l
    if t * l > row_cap:
        raise ResourceError(f"t*l = {t * l} exceeds the row cap {row_cap}")
    A = transition_matrix(spec)
    R = top_bits_matrix(spec, l)
    rows: list[int] = []
    for _ in range(t):
        R = mat_mul(R, A)
        rows.extend(R.rows)
    return BitMatrix(len(rows), spec.k_total, tuple(rows))


def check_tl(
    spec: GeneratorSpec,
    q: EquidistQuery,
    field: str = "gf2",
    row_cap: int = DEFAULT_ROW_CAP,
) -> tuple[int, bool]:
    r = _rank_fn(field)(build_b_matrix(spec, q, row_cap))
    return r, r == q.t * q.l


def _restrict(B: BitMatrix, t: int, l_full: int, l: int) -> BitMatrix:
    rows = [B.rows[n * l_full + i] for n in range(t) for i in range(l)]
    return BitMatrix(len(rows), B.ncols, tuple(rows))


def l_star(k: int, t: int, L: int = DEFAULT_WORD_SIZE) -> int:
    return min(L, k // t)


class _Probe:
    """Caches one B matrix at l = l_t* and answers rank queries for smaller l."""

    def __init__(self, spec: GeneratorSpec, t: int, L: int, field: str, row_cap: int):
        self.t = t
        self.l_star = l_star(spec.k_total, t, L)
        self.rank_fn = _rank_fn(field)
        self.l_full = min(max(self.l_star + 1, 1), spec.width, L)
        self.B = build_b_matrix(spec, EquidistQuery(t, self.l_full, max(L, self.l_full)), row_cap)
        self._cache: dict[int, int] = {}

    def rank_at(self, l: int) -> int:
        if l not in self._cache:
            self._cache[l] = self.rank_fn(_restrict(self.B, self.t, self.l_full, l))
        return self._cache[l]

    def ok(self, l: int) -> bool:
        return self.rank_at(l) == self.t * l

    def resolution(self) -> int:
        lo, hi = 0, self.l_star
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.ok(mid):
                lo = mid
            else:
                hi = mid - 1
        return lo


def resolution(
    spec: GeneratorSpec,
    t: int,
    L: int = DEFAULT_WORD_SIZE,
    field: str = "gf2",
    row_cap: int = DEFAULT_ROW_CAP,
) -> int:
    """Largest l <= l_t* with (t, l)-equidistribution, by binary search."""
    if t < 1:
        raise InvalidInputError("t must be >= 1")
    if l_star(spec.k_total, t, L) == 0:
        return 0
    return _Probe(spec, t, L, field, row_cap).resolution()


def resolution_linear(spec: GeneratorSpec, t: int, L: int = DEFAULT_WORD_SIZE, field: str = "gf2") -> int:
    """Same as :func:`resolution` but scanning every l; kept as an oracle."""
    best = 0
    for l in range(1, l_star(spec.k_total, t, L) + 1):
        if check_tl(spec, EquidistQuery(t, l, L), field)[1]:
            best = l
        else:
            break
    return best


def phi_sets(k: int, L: int = DEFAULT_WORD_SIZE) -> tuple[list[int], list[int]]:
    """Dimensions that suffice to decide maximal equidistribution."""
    if k < 4:
        raise InvalidInputError("phi sets need k >= 4")
    r = math.isqrt(k)
    phi1 = list(range(max(2, k // L), r + 1))
    phi2 = sorted({k // l for l in range(1, r + 1)})
    return phi1, phi2


def psi_sets(k: int, L: int = DEFAULT_WORD_SIZE) -> tuple[list[int], list[int]]:
    """The resolution-indexed counterpart of :func:`phi_sets`."""
    if k < 4:
        raise InvalidInputError("psi sets need k >= 4")
    psi1 = list(range(1, math.isqrt(k) + 1))
    psi2 = sorted({k // t for t in range(max(2, k // L), math.isqrt(k - 1) + 1)})
    return psi1, psi2


@dataclass(frozen=True)
class TRecord:
    t: int
    l_star: int
    l_t: int
    rank_at_l_star: int
    gap: int
    cf: bool | None
    cf_rank: int | None

    @property
    def equidistributed(self) -> bool:
        return self.gap == 0


@dataclass(frozen=True)
class EquidistReport:
    k_total: int
    word_size: int
    field: str
    t_set: tuple[int, ...]
    records: tuple[TRecord, ...]
    psi: tuple[tuple[int, ...], tuple[int, ...]] = field(default=((), ()))

    @property
    def total_gap(self) -> int:
        return sum(r.gap for r in self.records)

    @property
    def verdict(self) -> str:
        g = self.total_gap
        return "ME" if g == 0 else "almost-ME" if g == 1 else "not-ME"

    @property
    def gapped_t(self) -> list[int]:
        return [r.t for r in self.records if r.gap]


def analyze_t(
    spec: GeneratorSpec,
    t: int,
    L: int = DEFAULT_WORD_SIZE,
    field: str = "gf2",
    row_cap: int = DEFAULT_ROW_CAP,
) -> TRecord:
    probe = _Probe(spec, t, L, field, row_cap)
    ls = probe.l_star
    r_star = probe.rank_at(ls) if ls else 0
    lt = ls if (ls and r_star == t * ls) else probe.resolution()
    cf = cf_rank = None
    if lt + 1 <= probe.l_full and t * (lt + 1) >= spec.k_total:
        cf_rank = probe.rank_at(lt + 1)
        cf = cf_rank == spec.k_total
    return TRecord(t, ls, lt, r_star, ls - lt, cf, cf_rank)


def me_verdict(
    spec: GeneratorSpec,
    L: int = DEFAULT_WORD_SIZE,
    field: str = "gf2",
    row_cap: int = DEFAULT_ROW_CAP,
    t_set: list[int] | None = None,
) -> EquidistReport:
    """Resolution gaps over the sufficient dimension set, plus the verdict."""
    K = spec.k_total
    if t_set is None:
        phi1, phi2 = phi_sets(K, L)
        t_set = sorted(set(phi1) | set(phi2))
    records = tuple(analyze_t(spec, t, L, field, row_cap) for t in t_set)
    psi1, psi2 = psi_sets(K, L)
    return EquidistReport(K, L, field, tuple(t_set), records, (tuple(psi1), tuple(psi2)))


def format_table(report: EquidistReport) -> str:
    """Text table: t, l_t*, rank at l_t*, outcome, then the measured l_t and gap."""
    lines = [f"{'t':>4} {'l_t*':>5} {'rank':>5}  {'equidistribution':<22} {'l_t':>4} {'gap':>4}"]
    for r in report.records:
        tl = r.t * r.l_star
        outcome = "(t,l)-equidistributed" if r.rank_at_l_star == tl else "not equidistributed"
        lines.append(f"{r.t:>4} {r.l_star:>5} {r.rank_at_l_star:>5}  {outcome:<22} {r.l_t:>4} {r.gap:>4}")
    lines.append(f"total gap {report.total_gap}: {report.verdict} (rank over {report.field})")
    return "\n".join(lines)


RECORD_FIELDS = ("t", "l_star", "l_t", "rank", "gap", "cf")


def format_records(report: EquidistReport) -> str:
    """One tab-separated record per t; fields in ``RECORD_FIELDS`` order."""
    out = ["\t".join(RECORD_FIELDS)]
    for r in report.records:
        cf = "-" if r.cf is None else ("y" if r.cf else "n")
        out.append("\t".join(map(str, (r.t, r.l_star, r.l_t, r.rank_at_l_star, r.gap, cf))))
    return "\n".join(out)
