"""Single and two-component CA generators with optional time spacing.

Each emitted word advances every component ``s`` CA steps, XORs the padded
component configurations, and keeps the top ``w`` bits.  With ``right``
padding the shorter component is zero-filled after its last cell so cell 0
of both components feeds the word's most significant bit; with ``left``
padding it is zero-filled in front instead.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .bitlinalg import BitMatrix, BitVector, block_diag, mat_pow, mat_vec
from .ca import (
    DEFAULT_VERIFY_CAP,
    FactorTable,
    RuleVector,
    characteristic_matrix,
    step_int,
    verify_maximal_period,
)
from .errors import DimensionError, InvalidInputError, InvalidSeedError

__all__ = [
    "PADDING_SIDES",
    "GeneratorSpec",
    "GeneratorState",
    "PeriodReport",
    "seed",
    "seed_middle",
    "seed_entropy",
    "next_word",
    "period",
    "transition_matrix",
    "output_matrix",
    "combined_config",
    "concat_state",
    "split_state",
    "matrix_stream",
    "Generator",
]

PADDING_SIDES = ("left", "right")
MAX_K = 128


@dataclass(frozen=True)
class GeneratorSpec:
    components: tuple[RuleVector, ...]
    spacing: int = 1
    output_width: int | None = None
    padding_side: str = "right"

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not 1 <= len(comps) <= 2:
            raise InvalidInputError("a generator has one or two components")
        for rv in comps:
            if rv.k > MAX_K:
                raise InvalidInputError(f"component size {rv.k} exceeds {MAX_K}")
        if len(comps) == 2 and math.gcd(comps[0].k, comps[1].k) != 1:
            raise InvalidInputError(
                f"component sizes {comps[0].k} and {comps[1].k} are not coprime"
            )
        if self.spacing < 1:
            raise InvalidInputError("spacing must be >= 1")
        if self.padding_side not in PADDING_SIDES:
            raise InvalidInputError(f"padding must be one of {PADDING_SIDES}")
        width = self.width
        w = min(32, width) if self.output_width is None else self.output_width
        if not 1 <= w <= min(width, 64):
            raise InvalidInputError(f"output width {w} must lie in 1..{min(width, 64)}")
        object.__setattr__(self, "output_width", w)

    @property
    def width(self) -> int:
        """Size of the combined configuration, max(k1, k2)."""
        return max(rv.k for rv in self.components)

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(rv.k for rv in self.components)

    @property
    def k_total(self) -> int:
        return sum(self.ks)

    @property
    def w(self) -> int:
        return self.output_width  # type: ignore[return-value]

    def pad_offset(self, j: int) -> int:
        """Number of zero cells placed before component ``j`` in the combined word."""
        return 0 if self.padding_side == "right" else self.width - self.components[j].k

    def output_shift(self, j: int) -> int:
        """Right shift that moves component ``j``'s contribution into the word."""
        return self.components[j].k + self.pad_offset(j) - self.w

    def label(self) -> str:
        return "(" + ",".join(map(str, self.ks)) + f",s={self.spacing})"


@dataclass(frozen=True)
class GeneratorState:
    configs: tuple[int, ...]
    step_count: int = 0


def _coerce_seed(value, k: int, j: int) -> int:
    if isinstance(value, BitVector):
        if value.n != k:
            raise DimensionError(f"seed {j} has {value.n} bits, component has {k}")
        return value.bits
    if isinstance(value, str):
        text = value.strip()
        if not text or set(text) - {"0", "1"}:
            raise InvalidInputError(f"seed {j} is not a bit string")
        if len(text) != k:
            raise DimensionError(f"seed {j} has {len(text)} bits, component has {k}")
        return int(text, 2)
    v = int(value)
    if v < 0 or v >> k:
        raise DimensionError(f"seed {j} does not fit in {k} bits")
    return v


def seed(spec: GeneratorSpec, seed_bits: Sequence) -> GeneratorState:
    """Initial state from per-component seeds (ints, bit strings or BitVectors)."""
    if len(seed_bits) != len(spec.components):
        raise DimensionError(f"expected {len(spec.components)} seeds, got {len(seed_bits)}")
    configs = tuple(_coerce_seed(v, rv.k, j) for j, (v, rv) in enumerate(zip(seed_bits, spec.components)))
    if not any(configs):
        raise InvalidSeedError("the all-zero state is a fixed point")
    return GeneratorState(configs, 0)


def seed_middle(spec: GeneratorSpec) -> GeneratorState:
    """Only the middle cell of each component set."""
    return seed(spec, [1 << (rv.k - 1 - rv.k // 2) for rv in spec.components])


def seed_entropy(spec: GeneratorSpec) -> GeneratorState:
    seeds = []
    for rv in spec.components:
        while True:
            v = int.from_bytes(os.urandom((rv.k + 7) // 8), "big") >> (-rv.k % 8)
            if v:
                break
        seeds.append(v)
    return seed(spec, seeds)


def _word(spec: GeneratorSpec, configs: Sequence[int]) -> int:
    word = 0
    for j, c in enumerate(configs):
        d = spec.output_shift(j)
        word ^= c >> d if d >= 0 else c << -d
    return word & ((1 << spec.w) - 1)


def next_word(spec: GeneratorSpec, state: GeneratorState) -> tuple[GeneratorState, int]:
    """Advance every component ``s`` steps and emit one word (reference path)."""
    new = []
    for rv, c in zip(spec.components, state.configs):
        k, m = rv.k, rv.mask150
        for _ in range(spec.spacing):
            c = step_int(c, k, m)
        new.append(c)
    configs = tuple(new)
    return GeneratorState(configs, state.step_count + 1), _word(spec, configs)


def combined_config(spec: GeneratorSpec, configs: Sequence[int]) -> int:
    """XOR of the padded component configurations, ``spec.width`` cells wide."""
    out = 0
    W = spec.width
    for j, (rv, c) in enumerate(zip(spec.components, configs)):
        out ^= c << (W - rv.k - spec.pad_offset(j))
    return out


@dataclass(frozen=True)
class PeriodReport:
    rho: int
    rho0: int
    is_close_to_maximal: bool
    gcd_s_rho: int
    log2_rho: float
    warnings: tuple[str, ...] = field(default=())

    @property
    def exponent(self) -> int:
        """Smallest e with rho <= 2**e, the usual way to quote such periods."""
        return (self.rho - 1).bit_length()


def period(
    spec: GeneratorSpec,
    factor_table: FactorTable | None = None,
    verify_cap: int = DEFAULT_VERIFY_CAP,
    assume_maximal: bool = False,
) -> PeriodReport:
    rho0 = 1
    for k in spec.ks:
        rho0 = math.lcm(rho0, (1 << k) - 1)
    g = math.gcd(spec.spacing, rho0)
    rho = rho0 // g
    warnings = []
    if not assume_maximal:
        for j, rv in enumerate(spec.components):
            if rv.k > verify_cap:
                warnings.append(f"component {j + 1} (k={rv.k}) maximality not verified")
            elif not verify_maximal_period(rv, factor_table, cap=verify_cap):
                warnings.append(f"component {j + 1} (k={rv.k}) is not maximal; period formula does not hold")
    return PeriodReport(rho, rho0, g == 1, g, math.log2(rho), tuple(warnings))


def transition_matrix(spec: GeneratorSpec) -> BitMatrix:
    blocks = [mat_pow(characteristic_matrix(rv), spec.spacing) for rv in spec.components]
    return block_diag(blocks)


def output_matrix(spec: GeneratorSpec) -> BitMatrix:
    """``w x k_total`` map from the concatenated state to the output word."""
    w = spec.w
    K = spec.k_total
    rows = [0] * w
    col = 0
    for j, rv in enumerate(spec.components):
        off = spec.pad_offset(j)
        for i in range(w):
            cell = i - off
            if 0 <= cell < rv.k:
                rows[i] |= 1 << (K - 1 - (col + cell))
        col += rv.k
    return BitMatrix(w, K, tuple(rows))


def concat_state(spec: GeneratorSpec, configs: Sequence[int]) -> BitVector:
    acc = 0
    for rv, c in zip(spec.components, configs):
        acc = (acc << rv.k) | c
    return BitVector(spec.k_total, acc)


def split_state(spec: GeneratorSpec, v: BitVector) -> tuple[int, ...]:
    out = []
    rest = spec.k_total
    for rv in spec.components:
        rest -= rv.k
        out.append((v.bits >> rest) & ((1 << rv.k) - 1))
    return tuple(out)


def matrix_stream(spec: GeneratorSpec, state: GeneratorState, n: int) -> list[int]:
    """Words produced by repeated ``A x`` followed by the output map."""
    A = transition_matrix(spec)
    O = output_matrix(spec)
    x = concat_state(spec, state.configs)
    out = []
    for _ in range(n):
        x = mat_vec(A, x)
        out.append(mat_vec(O, x).bits)
    return out


_M64 = (1 << 64) - 1


class Generator:
    """Stateful wrapper that produces words in bulk through compiled kernels."""

    def __init__(self, spec: GeneratorSpec, state: GeneratorState):
        self.spec = spec
        self.state = state

    @classmethod
    def from_seeds(cls, spec: GeneratorSpec, seeds: Sequence) -> "Generator":
        return cls(spec, seed(spec, seeds))

    def __iter__(self) -> Iterator[int]:
        while True:
            self.state, word = next_word(self.spec, self.state)
            yield word

    def _dtype(self):
        return np.uint32 if self.spec.w <= 32 else np.uint64

    def words(self, n: int) -> np.ndarray:
        """The next ``n`` output words as a numpy array."""
        if n < 0:
            raise ValueError("n must be non-negative")
        spec = self.spec
        out = np.empty(n, dtype=np.uint64)
        if n:
            shift = np.array([spec.output_shift(j) for j in range(len(spec.components))], dtype=np.int64)
            wmask = np.uint64((1 << spec.w) - 1)
            s = spec.spacing
            if spec.width <= 64:
                st = np.array(self.state.configs, dtype=np.uint64)
                full = np.array([(1 << rv.k) - 1 for rv in spec.components], dtype=np.uint64)
                m150 = np.array([rv.mask150 for rv in spec.components], dtype=np.uint64)
                _kernels.run_single_limb(st, full, m150, shift, s, n, wmask, out)
                configs = tuple(int(c) for c in st)
            else:
                cs = self.state.configs
                ks = [rv.k for rv in spec.components]
                hi = np.array([c >> 64 for c in cs], dtype=np.uint64)
                lo = np.array([c & _M64 for c in cs], dtype=np.uint64)
                full = [(1 << k) - 1 for k in ks]
                fh = np.array([f >> 64 for f in full], dtype=np.uint64)
                fl = np.array([f & _M64 for f in full], dtype=np.uint64)
                ms = [rv.mask150 for rv in spec.components]
                mh = np.array([m >> 64 for m in ms], dtype=np.uint64)
                ml = np.array([m & _M64 for m in ms], dtype=np.uint64)
                _kernels.run_two_limb(hi, lo, fh, fl, mh, ml, shift, s, n, wmask, out)
                configs = tuple((int(h) << 64) | int(l) for h, l in zip(hi, lo))
            self.state = GeneratorState(configs, self.state.step_count + n)
        return out.astype(self._dtype())

    def bytes(self, n: int) -> bytes:
        """``n`` words serialised as little-endian 32-bit integers."""
        if self.spec.w > 32:
            raise InvalidInputError("byte streams carry 32-bit words; use w <= 32")
        return self.words(n).astype("<u4").tobytes()
