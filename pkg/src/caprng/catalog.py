"""Registry of component CAs shipped as a plain-text data file."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence

from .ca import (
    DEFAULT_VERIFY_CAP,
    FactorTable,
    RuleVector,
    char_poly,
    verify_maximal_period,
)
from .errors import CatalogError

__all__ = [
    "FAMILIES",
    "Maximality",
    "CatalogEntry",
    "parse_catalog",
    "load_catalog",
    "build_rule_vector",
    "find_coprime_pairs",
    "get_entry",
]

FAMILIES = ("table-mca", "ca90prime", "ca150prime", "literature")
ENV_VAR = "CAPRNG_CATALOG"

# Load-time order checks stay cheap below this size; larger entries are
# recorded as assumed unless the caller asks for more.
LOAD_VERIFY_CAP = 32


class Maximality(str, Enum):
    VERIFIED = "verified"
    ASSUMED = "assumed-from-paper"
    FAILED = "failed"
    UNCLAIMED = "unclaimed"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    family: str
    k: int
    rule150_positions: tuple[int, ...]
    n1: int
    maximal_verified: Maximality = Maximality.ASSUMED
    published_n1: int | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def n1_ratio(self) -> float:
        return self.n1 / self.k

    @property
    def rule_vector(self) -> RuleVector:
        return build_rule_vector(self)


def build_rule_vector(e: CatalogEntry) -> RuleVector:
    return RuleVector.with_150_at(e.k, e.rule150_positions)


def _parse_positions(text: str, k: int, where: str) -> tuple[int, ...]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        try:
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise CatalogError(f"{where}: bad position list {text!r}") from None
    if any(b <= a for a, b in zip(out, out[1:])):
        raise CatalogError(f"{where}: positions must be strictly increasing")
    if out and not (1 <= out[0] and out[-1] <= k):
        raise CatalogError(f"{where}: position out of range 1..{k}")
    return tuple(out)


def _check_family(family: str, k: int, pos: tuple[int, ...], where: str) -> None:
    if family == "table-mca" and not 1 <= len(pos) <= 2:
        raise CatalogError(f"{where}: table-mca entries have one or two rule-150 cells")
    if family == "ca90prime" and pos != (1,):
        raise CatalogError(f"{where}: ca90prime must use rule 150 at cell 1 only")
    if family == "ca150prime" and pos != tuple(range(2, k + 1)):
        raise CatalogError(f"{where}: ca150prime must use rule 90 at cell 1 only")


def parse_catalog(
    text: str,
    factor_table: FactorTable | None = None,
    verify_cap: int = LOAD_VERIFY_CAP,
    source: str = "<catalog>",
) -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        parts = line.split()
        if len(parts) < 4:
            raise CatalogError(f"{where}: expected 'id family k key=value...'")
        eid, family, ktext, *rest = parts
        if eid in seen:
            raise CatalogError(f"{where}: duplicate id {eid!r}")
        if family not in FAMILIES:
            raise CatalogError(f"{where}: unknown family {family!r}")
        try:
            k = int(ktext)
        except ValueError:
            raise CatalogError(f"{where}: bad size {ktext!r}") from None
        if k < 1:
            raise CatalogError(f"{where}: size must be positive")
        kv: dict[str, str] = {}
        for item in rest:
            key, sep, val = item.partition("=")
            if not sep:
                raise CatalogError(f"{where}: expected key=value, got {item!r}")
            kv[key] = val
        for req in ("positions", "n1"):
            if req not in kv:
                raise CatalogError(f"{where}: missing {req}=")
        pos = _parse_positions(kv["positions"], k, where)
        _check_family(family, k, pos, where)
        try:
            stated = int(kv["n1"])
            published_n1 = int(kv["published_n1"]) if "published_n1" in kv else None
        except ValueError:
            raise CatalogError(f"{where}: n1 values must be integers") from None

        rv = RuleVector.with_150_at(k, pos)
        n1 = char_poly(rv).n1
        if n1 != stated:
            raise CatalogError(f"{where}: entry {eid} states n1={stated} but its polynomial has {n1}")

        notes = tuple(kv["note"].split(",")) if "note" in kv else ()
        if "no-maximality-claim" in notes:
            status = Maximality.UNCLAIMED
        elif k <= verify_cap:
            ok = verify_maximal_period(rv, factor_table, cap=max(verify_cap, DEFAULT_VERIFY_CAP))
            status = Maximality.VERIFIED if ok else Maximality.FAILED
        else:
            status = Maximality.ASSUMED
        entries.append(CatalogEntry(eid, family, k, pos, n1, status, published_n1, notes))
        seen.add(eid)
    return entries


def load_catalog(
    path: str | os.PathLike | None = None,
    factor_table: FactorTable | None = None,
    verify_cap: int = LOAD_VERIFY_CAP,
) -> list[CatalogEntry]:
    """Read a catalog file; falls back to ``$CAPRNG_CATALOG`` then the shipped one."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        text = resources.files("caprng").joinpath("data/catalog.txt").read_text()
        return parse_catalog(text, factor_table, verify_cap, source="catalog.txt")
    p = Path(path)
    return parse_catalog(p.read_text(), factor_table, verify_cap, source=str(p))


def get_entry(entries: Iterable[CatalogEntry], key: str | int, family: str = "table-mca") -> CatalogEntry:
    """Look up by id, or by size within ``family`` when ``key`` is an int."""
    for e in entries:
        if isinstance(key, int) or str(key).isdigit():
            if e.family == family and e.k == int(key):
                return e
        elif e.id == key:
            return e
    raise CatalogError(f"no catalog entry {key!r}")


def find_coprime_pairs(
    entries: Sequence[CatalogEntry],
    k_min: int,
    k_max: int,
    *,
    family: str | None = "table-mca",
    half_open: bool = False,
) -> list[tuple[str, str]]:
    """Unordered pairs with gcd(k_a, k_b) = 1 and sizes in ``[k_min, k_max]``.

    ``half_open=True`` excludes ``k_max`` itself.  Pairs come back as
    (smaller CA id, larger CA id), sorted by size.
    """
    if k_min > k_max:
        raise ValueError("k_min must not exceed k_max")
    hi = k_max - 1 if half_open else k_max
    pool = [e for e in entries if (family is None or e.family == family) and k_min <= e.k <= hi]
    pool.sort(key=lambda e: (e.k, e.id))
    pairs = []
    for i, a in enumerate(pool):
        for b in pool[i + 1:]:
            if a.k != b.k and gcd(a.k, b.k) == 1:
                pairs.append((a, b))
    pairs.sort(key=lambda p: (p[0].k, p[1].k, p[0].id, p[1].id))
    return [(x.id, y.id) for x, y in pairs]
