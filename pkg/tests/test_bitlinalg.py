import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from caprng.bitlinalg import (
    BitMatrix,
    BitVector,
    block_diag,
    hstack,
    identity,
    mat_mul,
    mat_pow,
    mat_vec,
    rank,
    rational_rank,
    transpose,
    vstack,
    zeros,
)
from caprng.ca import RuleVector, characteristic_matrix
from caprng.errors import DimensionError

from helpers import gf2_rank_np, np_matmul_gf2


@st.composite
def matrices(draw, max_dim=12, rows=None, cols=None):
    r = rows if rows is not None else draw(st.integers(1, max_dim))
    c = cols if cols is not None else draw(st.integers(1, max_dim))
    data = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return BitMatrix.from_rows(data, c)


@st.composite
def square(draw, max_dim=10):
    n = draw(st.integers(1, max_dim))
    return draw(matrices(rows=n, cols=n))


def test_identity_small():
    assert identity(1).to_lists() == [[1]]
    assert identity(2).to_lists() == [[1, 0], [0, 1]]
    v = BitVector.from_str("10110")
    assert mat_vec(identity(5), v) == v


def test_identity_rejects_zero():
    with pytest.raises(DimensionError):
        identity(0)


def test_matrix_needs_positive_dimensions():
    with pytest.raises(DimensionError):
        BitMatrix(0, 3, ())
    with pytest.raises(DimensionError):
        BitVector(0)


def test_involution():
    m = BitMatrix.from_lists([[1, 1], [0, 1]])
    assert mat_mul(m, m) == identity(2)


def test_mat_mul_dimension_mismatch():
    with pytest.raises(DimensionError):
        mat_mul(zeros(2, 3), zeros(2, 3))
    with pytest.raises(DimensionError):
        mat_vec(zeros(2, 3), BitVector(2))


def test_mat_pow_basics():
    m = BitMatrix.from_strings(["101", "011", "110"])
    assert mat_pow(m, 0) == identity(3)
    assert mat_pow(m, 1) == m
    with pytest.raises(DimensionError):
        mat_pow(zeros(2, 3), 2)


def test_five_cell_order_31():
    t = characteristic_matrix(RuleVector((150, 90, 90, 90, 90)))
    assert mat_pow(t, 31).is_identity()
    for x in range(32):
        v = BitVector(5, x)
        assert mat_vec(mat_pow(t, 31), v) == v


def test_mat_pow_huge_exponent():
    t = characteristic_matrix(RuleVector((150, 90, 90, 90, 90)))
    e = 31 * (1 << 200) + 7
    assert mat_pow(t, e) == mat_pow(t, 7)


def test_rank_trivial():
    assert rank(identity(5)) == 5
    assert rank(zeros(4, 7)) == 0


def test_rank_does_not_mutate():
    m = BitMatrix.from_strings(["110", "011", "101"])
    before = m.rows
    assert rank(m) == 2
    assert m.rows == before


def test_rational_rank_differs_from_gf2():
    # rows sum to zero mod 2 but are independent over the rationals
    m = BitMatrix.from_strings(["110", "011", "101"])
    assert rank(m) == 2
    assert rational_rank(m) == 3


@given(st.data())
def test_mat_mul_matches_numpy(data):
    a = data.draw(matrices())
    b = data.draw(matrices(rows=a.ncols))
    want = np_matmul_gf2(a.to_lists(), b.to_lists())
    assert mat_mul(a, b).to_lists() == want.tolist()


@given(matrices())
def test_rank_matches_textbook_elimination(m):
    assert rank(m) == gf2_rank_np(m.to_lists())
    assert rank(m) <= min(m.nrows, m.ncols)


@settings(max_examples=60)
@given(matrices(max_dim=9))
def test_rational_rank_matches_sympy(m):
    assert rational_rank(m) == sympy.Matrix(m.to_lists()).rank()


@given(matrices())
def test_rank_transpose_invariant(m):
    assert rank(m) == rank(transpose(m))


@given(matrices(), st.data())
def test_rank_invariant_under_row_ops(m, data):
    rows = list(m.rows)
    for _ in range(data.draw(st.integers(0, 8))):
        i = data.draw(st.integers(0, len(rows) - 1))
        j = data.draw(st.integers(0, len(rows) - 1))
        if data.draw(st.booleans()):
            rows[i], rows[j] = rows[j], rows[i]
        elif i != j:
            rows[i] ^= rows[j]
    assert rank(BitMatrix.from_rows(rows, m.ncols)) == rank(m)


@given(square(), st.integers(0, 40), st.integers(0, 40))
def test_mat_pow_additive(m, e1, e2):
    assert mat_pow(m, e1 + e2) == mat_mul(mat_pow(m, e1), mat_pow(m, e2))


@given(st.data())
def test_mat_vec_associates(data):
    n = data.draw(st.integers(1, 8))
    k = data.draw(st.integers(1, 8))
    p = data.draw(st.integers(1, 8))
    a = data.draw(matrices(rows=n, cols=k))
    b = data.draw(matrices(rows=k, cols=p))
    v = BitVector(p, data.draw(st.integers(0, (1 << p) - 1)))
    assert mat_vec(mat_mul(a, b), v) == mat_vec(a, mat_vec(b, v))


def test_zero_matrix_times_vector():
    assert mat_vec(zeros(3, 4), BitVector(4, 0b1011)).is_zero()


def test_stacking_and_block_diag():
    a = BitMatrix.from_strings(["10", "01"])
    b = BitMatrix.from_strings(["1"])
    d = block_diag([a, b])
    assert d.to_lists() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert hstack([a, a]).to_lists() == [[1, 0, 1, 0], [0, 1, 0, 1]]
    assert vstack([a, a]).nrows == 4


def test_entry_access_and_packing():
    m = BitMatrix.from_strings(["100", "001"])
    assert m[0, 0] == 1 and m[0, 2] == 0 and m[1, 2] == 1
    assert m.rows == (0b100, 0b001)
    assert str(m) == "100\n001"
    arr = m.to_numpy()
    assert arr.dtype == np.uint8 and arr.shape == (2, 3)
