import itertools

import numpy as np
import pytest

from sg_swell.algebra import (
    CellAlgebra,
    GalerkinAlgebra,
    eigenstructure,
    sg_apply,
    sg_compose_check,
    sg_inverse,
    sg_inverse_apply,
    sg_matrix,
    sg_sqrt,
    triple_products,
)
from sg_swell.basis import bivariate_haar_basis, haar_basis
from sg_swell.errors import NonPositiveHeight, SGSwellError

from conftest import make_alg, positive


def test_triple_products_k2():
    M = triple_products(haar_basis(1)).dense()
    assert M[0, 0, 0] == pytest.approx(1.0)
    assert M[0, 0, 1] == pytest.approx(0.0)
    assert M[0, 1, 1] == pytest.approx(1.0)
    assert M[1, 1, 1] == pytest.approx(0.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_triple_products_identity_slice(n):
    M = triple_products(haar_basis(n)).dense()
    assert np.allclose(M[:, :, 0], np.eye(2**n), atol=1e-15)


def test_triple_products_fully_symmetric():
    M = triple_products(haar_basis(2)).dense()
    for perm in itertools.permutations(range(3)):
        assert np.max(np.abs(M - M.transpose(perm))) < 1e-15


def test_sg_matrix_examples(rng):
    t = triple_products(haar_basis(1))
    assert np.allclose(sg_matrix(t, [1.0, 0.0]), np.eye(2))
    a, b = 0.7, -1.3
    assert np.allclose(sg_matrix(t, [a, b]), [[a, b], [b, a]])
    t8 = triple_products(haar_basis(3))
    for _ in range(100):
        v, w = rng.standard_normal((2, 8))
        assert np.max(np.abs(sg_matrix(t8, v) @ w - sg_matrix(t8, w) @ v)) < 1e-13


def test_eigenstructure_k2():
    eig = eigenstructure(haar_basis(1))
    V = np.abs(eig.V)
    assert np.allclose(V, np.full((2, 2), 1 / np.sqrt(2)))
    assert np.allclose(sorted(eig.eigvals(np.array([2.0, 0.5]))), [1.5, 2.5])


def test_eigvals_match_dense(rng):
    basis = haar_basis(3)
    eig, t = eigenstructure(basis), triple_products(basis)
    assert np.allclose(eig.eigvals(np.eye(8)[0]), 1.0)
    for _ in range(10):
        w = rng.standard_normal(8)
        dense = np.linalg.eigvalsh(sg_matrix(t, w))
        assert np.allclose(np.sort(eig.eigvals(w)), dense, atol=1e-11)


def test_sg_apply_route_equivalence(rng):
    basis = haar_basis(3)
    eig, t = eigenstructure(basis), triple_products(basis)
    for _ in range(20):
        v, w = rng.standard_normal((2, 8))
        assert np.max(np.abs(sg_apply(eig, v, w) - sg_matrix(t, v) @ w)) < 1e-13
        assert np.allclose(sg_apply(eig, np.eye(8)[0], w), w, atol=1e-14)


def test_inverse_examples():
    eig = eigenstructure(haar_basis(1))
    assert np.allclose(sg_inverse(eig, np.array([5.0, 3.0])), [5 / 16, -3 / 16], atol=1e-15)
    eig8 = eigenstructure(haar_basis(3))
    assert np.allclose(sg_inverse(eig8, 4.0 * np.eye(8)[0]), 0.25 * np.eye(8)[0], atol=1e-15)


def test_inverse_matrix_identity(rng):
    alg = make_alg(8)
    for v in positive(alg, rng, 20):
        Pinv = alg.matrix(alg.inv(v))
        assert np.max(np.abs(Pinv - np.linalg.inv(alg.matrix(v)))) < 1e-11
        assert np.allclose(alg.mul(v, alg.inv(v)), np.eye(8)[0], atol=1e-13)


def test_inverse_apply(rng):
    alg = make_alg(4)
    v = positive(alg, rng, 1)[0]
    w = rng.standard_normal(4)
    x = sg_inverse_apply(alg.eig, v, w)
    assert np.allclose(alg.matrix(v) @ x, w, atol=1e-13)


def test_sqrt_examples(rng):
    eig = eigenstructure(haar_basis(1))
    assert np.allclose(sg_sqrt(eig, np.array([4.0, 0.0])), [2.0, 0.0])
    assert np.allclose(sg_sqrt(eig, np.array([5.0, 3.0])), [3 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)
    alg = make_alg(8)
    for h in positive(alg, rng, 20):
        r = alg.sqrt(h)
        assert np.max(np.abs(alg.mul(r, r) - h)) < 1e-12


def test_compose_check(rng):
    for K in (2, 4, 8):
        alg = make_alg(K)
        for _ in range(100):
            v, w = rng.standard_normal((2, K))
            lhs, rhs = sg_compose_check(alg.eig, v, w)
            assert np.max(np.abs(lhs - rhs)) < 1e-12
    alg = make_alg(2)
    w = rng.standard_normal(2)
    lhs, rhs = sg_compose_check(alg.eig, np.eye(2)[0], w)
    assert np.allclose(lhs, alg.matrix(w)) and np.allclose(rhs, alg.matrix(w))
    v = rng.standard_normal(2)
    lhs, _ = sg_compose_check(alg.eig, v, w)
    a = v[0] * w[0] + v[1] * w[1]
    b = v[0] * w[1] + v[1] * w[0]
    assert np.allclose(lhs, [[a, b], [b, a]], atol=1e-14)


def test_commutation_dense(rng):
    alg = make_alg(8)
    for _ in range(20):
        v, w = rng.standard_normal((2, 8))
        Pv, Pw = alg.matrix(v), alg.matrix(w)
        assert np.max(np.abs(Pv @ Pw - Pw @ Pv)) < 1e-12


def test_pointwise_product_identity(rng):
    # Haar reconstructions multiply cellwise: (u v)_Haar = u_Haar v_Haar
    alg = make_alg(8)
    u, v = rng.standard_normal((2, 8))
    Psi = alg.basis.values
    assert np.allclose((u @ Psi) * (v @ Psi), alg.mul(u, v) @ Psi, atol=1e-13)


def test_bivariate_algebra(rng):
    alg = GalerkinAlgebra(bivariate_haar_basis(8))
    v, w = rng.standard_normal((2, 8))
    assert np.allclose(alg.matrix(v) @ w, alg.mul(v, w), atol=1e-13)
    h = positive(alg, rng, 1)[0]
    assert np.allclose(alg.mul(alg.sqrt(h), alg.sqrt(h)), h, atol=1e-12)


def test_cell_algebra_dot_matches_coefficients(rng):
    alg = make_alg(8)
    calg = alg.cell_algebra()
    assert isinstance(calg, CellAlgebra)
    a, b = rng.standard_normal((2, 8))
    assert calg.dot(alg.to_cells(a), alg.to_cells(b)) == pytest.approx(a @ b)


def test_non_positive_rejected():
    alg = make_alg(2)
    with pytest.raises(NonPositiveHeight):
        alg.sqrt(np.array([1.0, 1.5]))  # cell values 2.5 and -0.5
    with pytest.raises(SGSwellError):
        alg.inv(np.array([1.0, 1.0]))  # singular
