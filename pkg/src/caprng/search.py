"""Sweep coprime component pairs and spacings, recording period and ME verdicts."""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .catalog import CatalogEntry, build_rule_vector, find_coprime_pairs
from .combined import GeneratorSpec, PeriodReport, period
from .equidist import DEFAULT_ROW_CAP, DEFAULT_WORD_SIZE, me_verdict
from .errors import InvalidInputError, ResourceError

__all__ = [
    "N1_FILTERS",
    "SearchSpace",
    "SearchResult",
    "close_to_half_filter",
    "calibrate_close_to_half",
    "select_entries",
    "enumerate_space",
    "format_line",
    "parse_line",
    "me_spacings",
]

N1_FILTERS = ("any", "close-to-half", "not-close")
VERDICT_CODES = {"ME": "ME", "almost-ME": "AME", "not-ME": "notME"}


def close_to_half_filter(entry: CatalogEntry, threshold: float) -> bool:
    return abs(entry.n1 / entry.k - 0.5) <= threshold


def calibrate_close_to_half(entries: Iterable[CatalogEntry], target_ks: Iterable[int]) -> float | None:
    """Smallest threshold that admits exactly ``target_ks``, or None if none does."""
    entries = list(entries)
    target = set(target_ks)
    dev = {e.k: abs(e.n1 / e.k - 0.5) for e in entries}
    if not target <= dev.keys():
        return None
    thr = max(dev[k] for k in target)
    admitted = {k for k, d in dev.items() if d <= thr}
    return thr if admitted == target else None


@dataclass(frozen=True)
class SearchSpace:
    k_min: int = 32
    k_max: int = 128
    s_min: int = 2
    s_max: int = 10
    family: str | None = "table-mca"
    n1_filter: str = "any"
    threshold: float | None = None
    close_set: frozenset[int] | None = None
    half_open: bool = False
    word_size: int = DEFAULT_WORD_SIZE
    field: str = "gf2"
    row_cap: int = DEFAULT_ROW_CAP
    max_k_total: int | None = None

    def __post_init__(self):
        if not 1 <= self.s_min <= self.s_max:
            raise InvalidInputError("need 1 <= s_min <= s_max")
        if self.k_min > self.k_max:
            raise InvalidInputError("need k_min <= k_max")
        if self.n1_filter not in N1_FILTERS:
            raise InvalidInputError(f"n1_filter must be one of {N1_FILTERS}")
        if self.n1_filter != "any" and self.threshold is None and self.close_set is None:
            raise InvalidInputError("an N1 filter needs a threshold or an explicit close set")
        if self.close_set is not None:
            object.__setattr__(self, "close_set", frozenset(self.close_set))

    def is_close(self, e: CatalogEntry) -> bool:
        if self.close_set is not None:
            return e.k in self.close_set
        return close_to_half_filter(e, self.threshold)  # type: ignore[arg-type]


def select_entries(space: SearchSpace, catalog: Sequence[CatalogEntry]) -> list[CatalogEntry]:
    out = [e for e in catalog if space.family is None or e.family == space.family]
    if space.n1_filter == "close-to-half":
        out = [e for e in out if space.is_close(e)]
    elif space.n1_filter == "not-close":
        out = [e for e in out if not space.is_close(e)]
    return out


@dataclass(frozen=True)
class SearchResult:
    k1: int
    k2: int
    s: int
    log2_rho: float
    close_to_maximal: bool
    verdict: str | None
    total_gap: int | None
    gapped_t: tuple[int, ...] = field(default=())
    ids: tuple[str, str] = ("", "")
    period_report: PeriodReport | None = None
    skip_reason: str | None = None

    @property
    def key(self) -> tuple[int, int, int]:
        return self.k1, self.k2, self.s

    @property
    def skipped(self) -> bool:
        return self.verdict is None


def format_line(r: SearchResult) -> str:
    maximal = "y" if r.close_to_maximal else "n"
    if r.skipped:
        return f"{r.k1} {r.k2} {r.s} {r.log2_rho:.4f} maximal={maximal} verdict=skip gaps=-"
    return (
        f"{r.k1} {r.k2} {r.s} {r.log2_rho:.4f} maximal={maximal} "
        f"verdict={VERDICT_CODES[r.verdict]} gaps={r.total_gap}"  # type: ignore[index]
    )


def parse_line(line: str) -> SearchResult:
    parts = line.split()
    if len(parts) != 7:
        raise InvalidInputError(f"bad result line: {line!r}")
    k1, k2, s = (int(x) for x in parts[:3])
    kv = dict(p.split("=", 1) for p in parts[4:])
    back = {v: k for k, v in VERDICT_CODES.items()}
    verdict = back.get(kv["verdict"])
    gaps = None if kv["gaps"] == "-" else int(kv["gaps"])
    return SearchResult(k1, k2, s, float(parts[3]), kv["maximal"] == "y", verdict, gaps)


def _write_atomic(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write("".join(line + "\n" for line in lines))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _evaluate(space: SearchSpace, a: CatalogEntry, b: CatalogEntry, s: int) -> SearchResult:
    spec = GeneratorSpec((build_rule_vector(a), build_rule_vector(b)), s)
    rep = period(spec, assume_maximal=True)
    common = dict(ids=(a.id, b.id), period_report=rep)
    if space.max_k_total is not None and spec.k_total > space.max_k_total:
        return SearchResult(a.k, b.k, s, rep.log2_rho, rep.is_close_to_maximal, None, None,
                            skip_reason=f"k1+k2={spec.k_total} above budget", **common)
    try:
        eq = me_verdict(spec, space.word_size, space.field, space.row_cap)
    except ResourceError as exc:
        return SearchResult(a.k, b.k, s, rep.log2_rho, rep.is_close_to_maximal, None, None,
                            skip_reason=str(exc), **common)
    return SearchResult(a.k, b.k, s, rep.log2_rho, rep.is_close_to_maximal, eq.verdict,
                        eq.total_gap, tuple(eq.gapped_t), **common)


def enumerate_space(
    space: SearchSpace,
    catalog: Sequence[CatalogEntry],
    checkpoint: str | os.PathLike | None = None,
    checkpoint_every: int = 25,
) -> Iterator[SearchResult]:
    """Results in (k1, k2, s) order.  With a checkpoint file, finished keys are
    read back instead of recomputed, and progress is saved atomically."""
    entries = select_entries(space, catalog)
    by_id = {e.id: e for e in entries}
    pairs = find_coprime_pairs(entries, space.k_min, space.k_max, family=space.family,
                               half_open=space.half_open)

    done: dict[tuple[int, int, int], str] = {}
    path = Path(checkpoint) if checkpoint is not None else None
    if path is not None and path.exists():
        for line in path.read_text().splitlines():
            if line.strip():
                r = parse_line(line)
                done[r.key] = line.strip()
    lines = list(done.values())
    pending = 0

    for ida, idb in pairs:
        a, b = by_id[ida], by_id[idb]
        for s in range(space.s_min, space.s_max + 1):
            key = (a.k, b.k, s)
            if key in done:
                yield parse_line(done[key])
                continue
            r = _evaluate(space, a, b, s)
            if path is not None:
                lines.append(format_line(r))
                pending += 1
                if pending >= checkpoint_every:
                    _write_atomic(path, sorted(lines, key=_line_key))
                    pending = 0
            yield r
    if path is not None:
        _write_atomic(path, sorted(lines, key=_line_key))


def _line_key(line: str) -> tuple[int, ...]:
    return tuple(int(x) for x in line.split()[:3])


def me_spacings(results: Iterable[SearchResult], close_only: bool = False) -> dict[tuple[int, int], list[int]]:
    """Spacings with an ME verdict per pair; ``close_only`` also requires a
    close-to-maximal period."""
    out: dict[tuple[int, int], list[int]] = {}
    for r in results:
        out.setdefault((r.k1, r.k2), [])
        if r.verdict == "ME" and (r.close_to_maximal or not close_only):
            out[(r.k1, r.k2)].append(r.s)
    return out
