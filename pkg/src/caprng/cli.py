"""Command-line front end: ``caprng <subcommand> ...``."""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path
from typing import BinaryIO, Sequence

from .ca import FactorTable
from .catalog import CatalogEntry, get_entry, load_catalog
from .chaos import p_parameter
from .combined import (
    Generator,
    GeneratorSpec,
    GeneratorState,
    combined_config,
    next_word,
    period,
    seed,
    seed_entropy,
    seed_middle,
)
from .equidist import FIELDS, format_records, format_table, me_verdict
from .errors import CaprngError, InvalidInputError
from .search import N1_FILTERS, SearchSpace, enumerate_space, format_line

CHUNK = 1 << 16


def write_pbm(path: str | Path, rows: Sequence[int], width: int) -> None:
    """Binary PBM; ``rows`` are ints with the leftmost pixel in the top bit."""
    pad = -width % 8
    nbytes = (width + pad) // 8
    with open(path, "wb") as fh:
        fh.write(f"P4\n{width} {len(rows)}\n".encode("ascii"))
        for r in rows:
            fh.write((r << pad).to_bytes(nbytes, "big"))


def read_pbm(path: str | Path) -> tuple[int, list[int]]:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 2)
    if parts[0] != b"P4":
        raise InvalidInputError("not a binary PBM file")
    width, height = (int(x) for x in parts[1].split())
    pad = -width % 8
    nbytes = (width + pad) // 8
    body = parts[2]
    rows = [int.from_bytes(body[i * nbytes:(i + 1) * nbytes], "big") >> pad for i in range(height)]
    return width, rows


def _catalog(args) -> list[CatalogEntry]:
    return load_catalog(args.catalog_file, FactorTable.load(args.factor_file))


def _component(entries, ident: str | None, k: int | None):
    if ident is not None:
        return get_entry(entries, ident).rule_vector
    return get_entry(entries, k).rule_vector


def build_spec(args) -> GeneratorSpec:
    entries = _catalog(args)
    if args.c1 is None and args.k1 is None:
        raise InvalidInputError("give a first component with --k1 or --c1")
    comps = [_component(entries, args.c1, args.k1)]
    if args.c2 is not None or args.k2 is not None:
        comps.append(_component(entries, args.c2, args.k2))
    return GeneratorSpec(tuple(comps), args.s, args.w, args.padding)


def build_state(args, spec: GeneratorSpec) -> GeneratorState:
    mode = args.seed_mode
    if mode is None:
        mode = "hex" if args.seed1 is not None else "middle"
    if mode == "middle":
        st = seed_middle(spec)
    elif mode == "entropy":
        st = seed_entropy(spec)
    else:
        raw = [args.seed1, args.seed2][: len(spec.components)]
        if any(v is None for v in raw):
            raise InvalidInputError("hex seeding needs --seed1 (and --seed2 for two components)")
        try:
            st = seed(spec, [int(v, 16) for v in raw])
        except ValueError:
            raise InvalidInputError("seeds must be hexadecimal") from None
    hexes = " ".join(f"seed{j + 1}={c:x}" for j, c in enumerate(st.configs))
    print(f"# {spec.label()} {hexes}", file=sys.stderr)
    return st


def _open_sink(path: str | None) -> BinaryIO:
    if path is None or path == "-":
        return sys.stdout.buffer
    return open(path, "wb")


def cmd_generate(args) -> int:
    spec = build_spec(args)
    if spec.w > 32:
        raise InvalidInputError("streams carry 32-bit words; use --w 32 or less")
    gen = Generator(spec, build_state(args, spec))
    unbounded = args.count == "unbounded"
    remaining = 0 if unbounded else int(args.count)
    if not unbounded and remaining < 1:
        raise InvalidInputError("--count must be >= 1 or 'unbounded'")
    sink = _open_sink(args.out)
    try:
        while unbounded or remaining > 0:
            n = CHUNK if unbounded else min(CHUNK, remaining)
            sink.write(gen.bytes(n))
            remaining -= n
        sink.flush()
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the interpreter's final flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    finally:
        if sink is not sys.stdout.buffer:
            sink.close()
    return 0


def spacetime_rows(spec: GeneratorSpec, state: GeneratorState, steps: int) -> dict[str, list[int]]:
    """Rows after 1..steps emitted words for each component and the combination."""
    if steps < 1:
        raise InvalidInputError("steps must be >= 1")
    out: dict[str, list[int]] = {f"c{j + 1}": [] for j in range(len(spec.components))}
    out["combined"] = []
    for _ in range(steps):
        state, _w = next_word(spec, state)
        for j, c in enumerate(state.configs):
            out[f"c{j + 1}"].append(c)
        out["combined"].append(combined_config(spec, state.configs))
    return out


def cmd_spacetime(args) -> int:
    spec = build_spec(args)
    rows = spacetime_rows(spec, build_state(args, spec), args.steps)
    targets = args.targets.split(",") if args.targets else list(rows)
    widths = {f"c{j + 1}": rv.k for j, rv in enumerate(spec.components)}
    widths["combined"] = spec.width
    prefix = args.out or "spacetime"
    for name in targets:
        if name not in rows:
            raise InvalidInputError(f"unknown target {name!r}; choose from {sorted(rows)}")
        path = f"{prefix}-{name}.pbm"
        write_pbm(path, rows[name], widths[name])
        print(path)
    return 0


def cmd_report(args) -> int:
    spec = build_spec(args)
    rep = period(spec, FactorTable.load(args.factor_file))
    print(f"generator {spec.label()} w={spec.w} padding={spec.padding_side}")
    print(f"period rho = {rep.rho}")
    print(f"log2 rho = {rep.log2_rho:.4f} (about 2^{rep.exponent}); gcd(s, rho0) = {rep.gcd_s_rho}; "
          f"close to maximal: {'yes' if rep.is_close_to_maximal else 'no'}")
    for w in rep.warnings:
        print(f"warning: {w}")
    eq = me_verdict(spec, args.word_size, args.rank_field)
    print(format_records(eq) if args.records else format_table(eq))
    return 0


def bench(spec: GeneratorSpec, state: GeneratorState, count: int) -> tuple[float, float]:
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    gen = Generator(spec, state)
    gen.words(16)  # compile outside the timed region
    t0 = time.perf_counter()
    left = count
    while left:
        n = min(left, 1 << 22)
        gen.words(n)
        left -= n
    dt = time.perf_counter() - t0
    return dt, count / dt if dt > 0 else float("inf")


def cmd_bench(args) -> int:
    spec = build_spec(args)
    count = int(args.count)
    dt, rate = bench(spec, build_state(args, spec), count)
    print(f"{spec.label()}: {count} words in {dt:.3f} s, {rate:.3e} words/s (this machine)")
    print(f"projected time for 1e9 words: {1e9 / rate:.1f} s")
    return 0


def cmd_catalog(args) -> int:
    entries = _catalog(args)
    rows = [
        e for e in entries
        if (args.k is None or e.k == args.k)
        and (args.family is None or e.family == args.family)
        and (args.id is None or e.id == args.id)
    ]
    print(f"{'id':<12} {'family':<11} {'k':>5} {'positions':<18} {'N1':>4} {'N1/k':>5} {'maximal':<19} P")
    for e in rows:
        pos = ",".join(map(str, e.rule150_positions))
        if len(pos) > 18:
            pos = f"{e.rule150_positions[0]}-{e.rule150_positions[-1]}" if _contiguous(e) else pos[:15] + "..."
        p1, p2 = p_parameter(e.rule_vector)
        print(f"{e.id:<12} {e.family:<11} {e.k:>5} {pos:<18} {e.n1:>4} {e.n1_ratio:>5.2f} "
              f"{e.maximal_verified.value:<19} ({p1:g},{p2:g})")
    print(f"# {len(rows)} entries")
    return 0


def _contiguous(e: CatalogEntry) -> bool:
    p = e.rule150_positions
    return p == tuple(range(p[0], p[-1] + 1))


def cmd_search(args) -> int:
    entries = _catalog(args)
    close = frozenset(int(x) for x in args.close_set.split(",")) if args.close_set else None
    space = SearchSpace(
        k_min=args.k_min, k_max=args.k_max, s_min=args.s_min, s_max=args.s_max,
        family=args.family, n1_filter=args.n1_filter, threshold=args.threshold,
        close_set=close, half_open=args.half_open, word_size=args.word_size,
        field=args.rank_field, max_k_total=args.max_k_total,
    )
    for r in enumerate_space(space, entries, checkpoint=args.checkpoint):
        print(format_line(r), flush=True)
    return 0


def _spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k1", type=int, help="size of the first table CA")
    p.add_argument("--k2", type=int, help="size of the second table CA")
    p.add_argument("--c1", help="catalog id of the first component")
    p.add_argument("--c2", help="catalog id of the second component")
    p.add_argument("--s", type=int, default=1, help="time spacing (default 1)")
    p.add_argument("--w", type=int, default=None, help="output width in bits (default min(32, width))")
    p.add_argument("--padding", choices=("left", "right"), default="right")
    p.add_argument("--seed1")
    p.add_argument("--seed2")
    p.add_argument("--seed-mode", choices=("hex", "entropy", "middle"))


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--catalog-file")
    p.add_argument("--factor-file")
    p.add_argument("--word-size", type=int, default=32, help="word size L for the analysis")
    p.add_argument("--rank-field", choices=FIELDS, default="gf2")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="caprng", description="Cellular-automaton PRNG toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="raw little-endian 32-bit stream")
    _spec_flags(g)
    _common_flags(g)
    g.add_argument("--count", default="1000000", help="number of words or 'unbounded'")
    g.add_argument("--out", help="output file (default stdout)")
    g.set_defaults(func=cmd_generate)

    st = sub.add_parser("spacetime", help="space-time diagrams as PBM images")
    _spec_flags(st)
    _common_flags(st)
    st.add_argument("--steps", type=int, default=500)
    st.add_argument("--targets", help="comma list of c1,c2,combined (default all)")
    st.add_argument("--out", help="file prefix (default 'spacetime')")
    st.set_defaults(func=cmd_spacetime)

    r = sub.add_parser("report", help="period and equidistribution table")
    _spec_flags(r)
    _common_flags(r)
    r.add_argument("--records", action="store_true", help="tab-separated records instead of a table")
    r.set_defaults(func=cmd_report)

    b = sub.add_parser("bench", help="throughput of the compiled stepping path")
    _spec_flags(b)
    _common_flags(b)
    b.add_argument("--count", type=int, default=10_000_000)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("catalog", help="list component CAs")
    _common_flags(c)
    c.add_argument("--k", type=int)
    c.add_argument("--family")
    c.add_argument("--id")
    c.set_defaults(func=cmd_catalog)

    s = sub.add_parser("search", help="sweep pairs and spacings")
    _common_flags(s)
    s.add_argument("--k-min", type=int, default=32)
    s.add_argument("--k-max", type=int, default=128)
    s.add_argument("--half-open", action="store_true", help="exclude k-max itself")
    s.add_argument("--s-min", type=int, default=2)
    s.add_argument("--s-max", type=int, default=10)
    s.add_argument("--family", default="table-mca")
    s.add_argument("--n1-filter", choices=N1_FILTERS, default="any")
    s.add_argument("--threshold", type=float)
    s.add_argument("--close-set", help="comma list of sizes treated as close to half")
    s.add_argument("--max-k-total", type=int, help="skip pairs with k1+k2 above this")
    s.add_argument("--checkpoint", help="resumable results file")
    s.set_defaults(func=cmd_search)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CaprngError, OSError) as exc:
        print(f"caprng: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
