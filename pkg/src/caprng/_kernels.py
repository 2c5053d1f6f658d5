"""Compiled inner loops for the word-parallel stepping path.

Each component is an unsigned integer configuration with cell 0 at the top
bit.  ``shift[j]`` is how far the component must move right so that its top
``w`` bits land in the output word (negative means move left).
"""

from __future__ import annotations

import numpy as np
from numba import njit

_U64 = np.uint64


@njit(cache=True)
def run_single_limb(state, full, m150, shift, s, n, wmask, out):
    ncomp = state.shape[0]
    for i in range(n):
        word = _U64(0)
        for j in range(ncomp):
            c = state[j]
            f = full[j]
            m = m150[j]
            for _ in range(s):
                c = (c >> _U64(1)) ^ ((c << _U64(1)) & f) ^ (c & m)
            state[j] = c
            d = shift[j]
            if d >= 0:
                word ^= c >> _U64(d)
            else:
                word ^= c << _U64(-d)
        out[i] = word & wmask


@njit(cache=True)
def _extract(hi, lo, d):
    if d < 0:
        return lo << _U64(-d)
    if d == 0:
        return lo
    if d < 64:
        return (lo >> _U64(d)) | (hi << _U64(64 - d))
    if d == 64:
        return hi
    return hi >> _U64(d - 64)


@njit(cache=True)
def run_two_limb(hi, lo, full_hi, full_lo, m150_hi, m150_lo, shift, s, n, wmask, out):
    # a component wider than 64 cells keeps its top k-64 cells in hi
    ncomp = hi.shape[0]
    top = _U64(63)
    one = _U64(1)
    for i in range(n):
        word = _U64(0)
        for j in range(ncomp):
            h = hi[j]
            l = lo[j]
            fh = full_hi[j]
            fl = full_lo[j]
            mh = m150_hi[j]
            ml = m150_lo[j]
            for _ in range(s):
                rh = h >> one
                rl = (l >> one) | (h << top)
                lh = ((h << one) | (l >> top)) & fh
                ll = (l << one) & fl
                h = rh ^ lh ^ (h & mh)
                l = rl ^ ll ^ (l & ml)
            hi[j] = h
            lo[j] = l
            word ^= _extract(h, l, shift[j])
        out[i] = word & wmask
