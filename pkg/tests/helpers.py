"""Independent oracles shared by the test modules.

Nothing here calls into the matrix machinery of the package: the oracles
work on plain ints, lists and numpy arrays so they can cross-check it.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from pathlib import Path

import numpy as np

DATA = Path(__file__).parent / "data"


def ca_step(rules, cells):
    """Cell-by-cell update of a list of bits, null boundary."""
    k = len(rules)
    out = []
    for i in range(k):
        left = cells[i - 1] if i > 0 else 0
        right = cells[i + 1] if i < k - 1 else 0
        v = left ^ right
        if rules[i] == 150:
            v ^= cells[i]
        out.append(v)
    return out


def int_to_cells(x, k):
    return [(x >> (k - 1 - i)) & 1 for i in range(k)]


def cells_to_int(cells):
    v = 0
    for c in cells:
        v = (v << 1) | c
    return v


def step_table(rules, s=1):
    """Lookup table: state -> state after s steps, by the list oracle."""
    k = len(rules)
    table = []
    for x in range(1 << k):
        cells = int_to_cells(x, k)
        for _ in range(s):
            cells = ca_step(rules, cells)
        table.append(cells_to_int(cells))
    return table


def orbit_length(table, start):
    x = table[start]
    n = 1
    while x != start:
        x = table[x]
        n += 1
    return n


@lru_cache(maxsize=None)
def toy_maximal(k):
    """All rule vectors of size k whose nonzero states form one cycle."""
    found = []
    for combo in itertools.product((90, 150), repeat=k):
        table = step_table(combo)
        x = 1
        n = 0
        seen = True
        while True:
            x = table[x]
            n += 1
            if x == 1:
                break
            if n > (1 << k):
                seen = False
                break
        if seen and n == (1 << k) - 1:
            found.append(combo)
    return tuple(found)


def berlekamp_massey(bits):
    """Connection polynomial of the shortest LFSR for ``bits`` (GF(2))."""
    c = [1]
    b = [1]
    L = 0
    m = 1
    for n in range(len(bits)):
        d = bits[n]
        for i in range(1, L + 1):
            d ^= c[i] & bits[n - i]
        if d == 0:
            m += 1
            continue
        t = c[:]
        shifted = [0] * m + b
        if len(shifted) > len(c):
            c = c + [0] * (len(shifted) - len(c))
        for i, v in enumerate(shifted):
            c[i] ^= v
        if 2 * L <= n:
            L = n + 1 - L
            b = t
            m = 1
        else:
            m += 1
    return c[: L + 1], L


def np_matmul_gf2(a, b):
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % 2


def gf2_rank_np(a):
    """Textbook elimination on a numpy 0/1 array."""
    m = np.array(a, dtype=np.uint8) % 2
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i, c]:
                piv = i
                break
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
        if r == rows:
            break
    return r


def output_sequence(comps, seeds, s, n, pad="right", width=None):
    """Combined configuration after each of n emitted words (list oracle)."""
    W = max(len(r) for r in comps) if width is None else width
    cells = [int_to_cells(x, len(r)) for x, r in zip(seeds, comps)]
    out = []
    for _ in range(n):
        combined = [0] * W
        for j, r in enumerate(comps):
            for _ in range(s):
                cells[j] = ca_step(r, cells[j])
            off = 0 if pad == "right" else W - len(r)
            for i, v in enumerate(cells[j]):
                combined[off + i] ^= v
        out.append(combined)
    return out


def box_count_all(comps, s, pad="right"):
    """(t, l) -> exhaustive box-count verdict, for every t*l <= K and l <= width.

    A point set is equidistributed when each of the 2^(t*l) boxes receives
    exactly 2^(K - t*l) of the 2^K seeds, the zero seed included.
    """
    ks = [len(r) for r in comps]
    K = sum(ks)
    W = max(ks)
    tables = [step_table(r, s) for r in comps]
    # outputs[x][n] = combined configuration (W-bit int) after n+1 words
    outputs = np.zeros((1 << K, K), dtype=np.int64)
    for x in range(1 << K):
        states = []
        rest = K
        for k in ks:
            rest -= k
            states.append((x >> rest) & ((1 << k) - 1))
        for n in range(K):
            states = [tab[c] for tab, c in zip(tables, states)]
            word = 0
            for k, c in zip(ks, states):
                word ^= c << (W - k) if pad == "right" else c
            outputs[x, n] = word
    verdicts = {}
    for l in range(1, W + 1):
        top = outputs >> (W - l)
        for t in range(1, K // l + 1):
            idx = np.zeros(1 << K, dtype=np.int64)
            for n in range(t):
                idx = (idx << l) | top[:, n]
            counts = np.bincount(idx, minlength=1 << (t * l))
            verdicts[(t, l)] = bool(np.all(counts == (1 << (K - t * l))))
    return verdicts


def load_reference_table():
    """k -> (positions, n1, ratio) from the frozen reference table."""
    out = {}
    for line in (DATA / "reference_mca_table.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        k, pos, n1, ratio = line.split()
        out[int(k)] = (tuple(int(p) for p in pos.split(",")), int(n1), float(ratio))
    return out
