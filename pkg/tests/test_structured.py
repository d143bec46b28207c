import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracmat.coeffs import gl_coeffs
from fracmat.stripmat import make_strip
from fracmat.structured import (Eliminator, Shifter, bandwidth, eliminate_cols, eliminate_rows, finalize,
                                identity, kron, shift_ne, shift_sw)

A3 = np.array([[11.0, 12, 13], [21, 22, 23], [31, 32, 33]])


def dense(a):
    return a.toarray() if sp.issparse(a) else np.asarray(a)


def literal_sw(w, n):
    """``S_1 E- U E- S_{n+2}^T`` built from explicit eliminators and shifters."""
    size = n + 2
    shift = Shifter(size, 1, "below").matrix()
    u = make_strip("upper", w[:size]).tosparse()
    core = shift @ u @ shift
    return Eliminator(size, (1,)).matrix() @ core @ Eliminator(size, (size,)).matrix().T


def literal_ne(w, n, orientation, k=1):
    """``S_rows E+_k P E+_k S_{1..k}^T`` with the last `k` rows and first `k` columns struck."""
    size = n + k + 1
    shift = Shifter(size, k, "above").matrix()
    p = make_strip(orientation, w[:size]).tosparse()
    core = shift @ p @ shift
    rows = Eliminator(size, tuple(range(n + 2, size + 1)))
    cols = Eliminator(size, tuple(range(1, k + 1)))
    return rows.matrix() @ core @ cols.matrix().T


def test_eliminate_rows_worked_example():
    s1 = Eliminator(3, (1,))
    np.testing.assert_array_equal(dense(eliminate_rows(s1, A3)), A3[1:])
    np.testing.assert_array_equal(dense(s1.matrix() @ sp.csr_array(A3)), A3[1:])
    np.testing.assert_array_equal(dense(eliminate_rows(Eliminator(3), A3)), A3)
    assert eliminate_rows(Eliminator(3, (1, 2, 3)), A3).shape == (0, 3)


def test_eliminate_cols_worked_example():
    s1 = Eliminator(3, (1,))
    np.testing.assert_array_equal(dense(eliminate_cols(s1, A3)), [[12, 13], [22, 23], [32, 33]])
    np.testing.assert_array_equal(dense(eliminate_cols(Eliminator(3), A3)), A3)
    np.testing.assert_array_equal(dense(eliminate_cols(s1, eliminate_rows(s1, A3))), [[22, 23], [32, 33]])


def test_eliminator_validation():
    assert Eliminator(4, (3, 1)).omitted == (1, 3)
    assert Eliminator(4, (3, 1)).shape == (2, 4)
    for bad in [(0,), (5,), (2, 2)]:
        with pytest.raises(ValueError):
            Eliminator(4, bad)
    with pytest.raises(ValueError):
        eliminate_rows(Eliminator(4), A3)
    with pytest.raises(ValueError):
        eliminate_cols(Eliminator(4), A3)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n)))))
def test_eliminator_round_trip(case):
    n, omitted = case
    s = Eliminator(n, tuple(omitted)).matrix()
    x = np.arange(1.0, s.shape[0] + 1)
    np.testing.assert_array_equal(s @ (s.T @ x), x)


def test_kron_worked_examples():
    a = np.array([[1, 2], [0, -3]])
    b = np.array([[1, 2, 3], [4, 5, 6]])
    expected = [[1, 2, 3, 2, 4, 6], [4, 5, 6, 8, 10, 12], [0, 0, 0, -3, -6, -9], [0, 0, 0, -12, -15, -18]]
    np.testing.assert_array_equal(dense(kron(a, b)), expected)
    np.testing.assert_array_equal(dense(kron(identity(2), b)), sp.block_diag([b, b]).toarray())
    spread = dense(kron(b, identity(3)))
    assert spread.shape == (6, 9)
    for i in range(2):
        for j in range(3):
            np.testing.assert_array_equal(spread[3 * i:3 * i + 3, 3 * j:3 * j + 3], b[i, j] * np.eye(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.sampled_from(["lower", "upper"]), st.data())
def test_kron_preserves_triangularity_and_nnz(p, q, kind, data):
    tri = np.tril if kind == "lower" else np.triu
    entries = st.sampled_from([0.0, -1.5, -1.0, 0.5, 2.0])
    a = tri(data.draw(arrays(float, (p, p), elements=entries)))
    b = tri(data.draw(arrays(float, (q, q), elements=entries)))
    out = dense(kron(a, b))
    off = np.triu(out, 1) if kind == "lower" else np.tril(out, -1)
    assert not off.any()
    assert kron(a, b).nnz == np.count_nonzero(a) * np.count_nonzero(b)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(2, 6), st.integers(0, 2), st.integers(0, 2), st.data())
def test_kron_preserves_bandedness(p, q, lo, up, data):
    mask = np.triu(np.tril(np.ones((p, p)), up), -lo)
    a = mask * data.draw(arrays(float, (p, p), elements=st.floats(0.5, 2)))
    b_mask = np.triu(np.tril(np.ones((q, q)), 1), -1)
    b = b_mask * data.draw(arrays(float, (q, q), elements=st.floats(0.5, 2)))
    lower, upper = bandwidth(kron(a, b))
    assert lower <= min(lo, p - 1) * q + 1
    assert upper <= min(up, p - 1) * q + 1


def test_finalize_sums_duplicates_and_drops_zeros():
    coo = sp.coo_array((np.array([1.0, 2.0, 3.0, 0.0]), (np.array([0, 0, 1, 1]), np.array([0, 0, 1, 0]))),
                       shape=(2, 2))
    out = finalize(coo)
    assert out.nnz == 2
    np.testing.assert_array_equal(out.toarray(), [[3, 0], [0, 3]])


def test_shifter_matrices():
    np.testing.assert_array_equal(dense(Shifter(3, 1, "above").matrix()), np.eye(3, k=1))
    np.testing.assert_array_equal(dense(Shifter(3, 2, "below").matrix()), np.eye(3, k=-2))
    with pytest.raises(ValueError):
        Shifter(3, 3, "above")
    with pytest.raises(ValueError):
        Shifter(3, 1, "left")


def test_shift_sw_examples():
    a, b, c, d = 2.0, 3.0, 5.0, 7.0
    np.testing.assert_array_equal(dense(shift_sw([a, b, c, d], 2)), [[b, c, d], [a, b, c], [0, a, b]])
    tri = dense(shift_sw(gl_coeffs(2.0, 6), 5))
    expected = np.diag(-2 * np.ones(6)) + np.eye(6, k=1) + np.eye(6, k=-1)
    np.testing.assert_array_equal(tri, expected)
    np.testing.assert_array_equal(dense(shift_sw(np.eye(1, 6)[0], 4)), np.eye(5, k=-1))
    with pytest.raises(ValueError):
        shift_sw([1.0, 2.0, 3.0], 2)


def test_shift_ne_examples():
    a, b, c, d = 2.0, 3.0, 5.0, 7.0
    np.testing.assert_array_equal(dense(shift_ne([a, b, c, d], 2, orientation="lower")),
                                  [[b, a, 0], [c, b, a], [d, c, b]])
    w = gl_coeffs(2.0, 6)
    np.testing.assert_array_equal(dense(shift_ne(w, 5, orientation="lower")), dense(shift_sw(w, 5)))
    np.testing.assert_array_equal(dense(shift_ne(np.eye(1, 6)[0], 4, orientation="upper")), np.eye(5, k=1))
    with pytest.raises(ValueError):
        shift_ne([1.0, 2.0], 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.data())
def test_shifts_match_literal_products(n, data):
    w = data.draw(arrays(float, n + 2, elements=st.floats(-1, 1)))
    scale = data.draw(st.floats(0.1, 3))
    np.testing.assert_allclose(dense(shift_sw(w, n, scale)), scale * dense(literal_sw(w, n)), atol=1e-15)
    np.testing.assert_allclose(dense(shift_ne(w, n, scale, "lower")), scale * dense(literal_ne(w, n, "lower")),
                               atol=1e-15)
    np.testing.assert_allclose(dense(shift_ne(w, n, scale, "upper")), scale * dense(literal_ne(w, n, "upper")),
                               atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10), st.data())
def test_multi_step_shift_matches_literal_product(n, k, data):
    w = data.draw(arrays(float, n + k + 1, elements=st.floats(-1, 1)))
    np.testing.assert_allclose(dense(shift_ne(w, n, 1.0, "upper", steps=k)), dense(literal_ne(w, n, "upper", k)),
                               atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 2.0), st.integers(1, 30))
def test_half_sum_pattern_is_symmetric(beta, n):
    w = gl_coeffs(beta, n + 1)
    total = dense(shift_sw(w, n) + shift_ne(w, n, orientation="lower"))
    np.testing.assert_allclose(total, total.T, rtol=0, atol=1e-12)
