import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_matmul, taylor_expm
from skidslip_ncs.linalg import (
    DimensionError,
    NilpotencyError,
    SingularMatrixError,
    as_mat,
    expm_nilpotent,
    inverse2,
    matmul,
    spectral_norm,
    thin_svd,
)

J = np.array([[0.05, 0.05], [0.2, -0.2]])


def a_matrix(v):
    a = np.zeros((3, 3))
    a[1, 2] = v
    return a


def test_as_mat_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_mat([[1.0, np.nan]])
    with pytest.raises(DimensionError):
        as_mat(np.eye(2), rows=3)


def test_matmul_identity():
    m = np.arange(9.0).reshape(3, 3)
    np.testing.assert_array_equal(matmul(np.eye(3), m), m)


def test_matmul_example():
    out = matmul(J, np.array([9.0, 10.0]))
    np.testing.assert_allclose(out, [0.95, -0.2], atol=1e-15)
    np.testing.assert_allclose(out, naive_matmul(J, [9.0, 10.0]).ravel(), atol=1e-15)


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionError):
        matmul(np.ones((2, 2)), np.ones((3, 1)))


def test_matmul_associative():
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b, c = (rng.standard_normal((4, 4)) for _ in range(3))
        lhs = matmul(matmul(a, b), c)
        rhs = matmul(a, matmul(b, c))
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


def test_inverse2_examples():
    np.testing.assert_array_equal(inverse2(np.eye(2)), np.eye(2))
    np.testing.assert_allclose(inverse2(J), [[10, 2.5], [10, -2.5]], rtol=1e-14)
    np.testing.assert_allclose(J @ inverse2(J), np.eye(2), atol=1e-12)


def test_inverse2_singular_carries_det():
    with pytest.raises(SingularMatrixError) as info:
        inverse2([[1.0, 1.0], [1.0, 1.0]])
    assert info.value.det == 0.0


@settings(max_examples=200)
@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4))
def test_inverse2_roundtrip(entries):
    a = np.array(entries).reshape(2, 2)
    if abs(np.linalg.det(a)) < 0.1 or np.linalg.cond(a) > 1e3:
        return
    assert np.max(np.abs(a @ inverse2(a) - np.eye(2))) < 1e-12


def test_thin_svd_zero_matrix():
    u, s, v = thin_svd(np.zeros((3, 4)))
    assert s.size == 0 and u.shape == (3, 0) and v.shape == (4, 0)


def test_thin_svd_diagonal():
    u, s, v = thin_svd(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(s, [3.0, 1.0])
    np.testing.assert_allclose(np.abs(u), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(np.abs(v), np.eye(2), atol=1e-15)


@pytest.mark.parametrize("shape", [(5, 7), (8, 8), (3, 1), (1, 6), (8, 2)])
def test_thin_svd_reconstruction(shape):
    rng = np.random.default_rng(sum(shape))
    a = rng.standard_normal(shape)
    u, s, v = thin_svd(a)
    assert np.linalg.norm(a - (u * s) @ v.T) < 1e-10
    np.testing.assert_allclose(u.T @ u, np.eye(s.size), atol=1e-10)
    np.testing.assert_allclose(v.T @ v, np.eye(s.size), atol=1e-10)


def test_thin_svd_truncates_rank():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 7))
    u, s, v = thin_svd(a, rank_tol=1e-10)
    assert s.size == 2
    assert np.linalg.norm(a - (u * s) @ v.T) < 1e-10


def test_spectral_norm_examples():
    assert spectral_norm(np.eye(2)) == pytest.approx(1.0, abs=1e-15)
    assert spectral_norm(np.diag([0.5, -0.25])) == pytest.approx(0.5, abs=1e-15)
    nil = np.array([[0.0, 2.0], [0.0, 0.0]])
    assert spectral_norm(nil) == pytest.approx(2.0, abs=1e-15)
    assert spectral_norm(nil) == pytest.approx(thin_svd(nil)[1][0], abs=1e-15)
    assert spectral_norm(np.zeros((0, 0))) == 0.0


def test_expm_zero():
    np.testing.assert_array_equal(expm_nilpotent(np.zeros((3, 3)), 0.7), np.eye(3))


@pytest.mark.parametrize("v,t", [(1.0, 0.1), (2.0, 0.05)])
def test_expm_examples(v, t):
    expected = np.array([[1, 0, 0], [0, 1, 0.1], [0, 0, 1.0]])
    got = expm_nilpotent(a_matrix(v), t)
    np.testing.assert_allclose(got, expected, atol=1e-15)
    assert np.max(np.abs(got - taylor_expm(a_matrix(v), t))) < 1e-14


def test_expm_higher_degree_matches_series():
    a = np.triu(np.random.default_rng(4).standard_normal((4, 4)), k=1)
    got = expm_nilpotent(a, 0.3, nilpotency_degree=4)
    assert np.max(np.abs(got - taylor_expm(a, 0.3))) < 1e-14


def test_expm_rejects_non_nilpotent():
    with pytest.raises(NilpotencyError):
        expm_nilpotent(np.eye(2), 1.0)
