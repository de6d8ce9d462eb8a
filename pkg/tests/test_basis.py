import numpy as np
import pytest

from sg_swell.basis import (
    QuadratureSpec,
    bivariate_haar_basis,
    evaluate,
    haar_basis,
    legendre_project_demo,
    legendre_reconstruct,
    project,
    reconstruct,
)


def test_constant_basis():
    b = haar_basis(0)
    assert b.K == 1
    assert evaluate(b, 1, 0.3) == 1.0


def test_mother_wavelet_sign():
    b = haar_basis(1)
    assert b.K == 2
    assert evaluate(b, 2, -0.5) == 1.0
    assert evaluate(b, 2, 0.5) == -1.0


def test_level_one_wavelet_value():
    b = haar_basis(2)
    assert evaluate(b, 3, -0.75) == pytest.approx(np.sqrt(2.0), abs=1e-15)
    assert evaluate(b, 3, 0.5) == 0.0


def test_breakpoint_takes_left_cell():
    b = haar_basis(1)
    assert evaluate(b, 2, 0.0) == 1.0


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_gram_identity(n):
    b = haar_basis(n)
    gram = b.values @ b.values.T / b.K  # exact: values constant on finest cells, density 1/2
    assert np.max(np.abs(gram - np.eye(b.K))) < 1e-14


def test_gram_identity_bivariate():
    for K in (2, 4, 8):
        b = bivariate_haar_basis(K)
        gram = b.values @ b.values.T / b.values.shape[1]
        assert np.max(np.abs(gram - np.eye(K))) < 1e-13


def test_project_linear_scaling_list():
    b = haar_basis(3)
    c = 0.5
    coeffs = project(b, lambda x: 1 + 0.5 * x, QuadratureSpec())
    s52, s4 = 2**-2.5, 2**-4
    expect = np.array([1, -c / 2, -c * s52, -c * s52, -c * s4, -c * s4, -c * s4, -c * s4])
    assert np.allclose(coeffs, expect, atol=1e-14)


def test_project_constant():
    b = haar_basis(3)
    coeffs = project(b, lambda x: 7.0 + 0 * x)
    assert np.allclose(coeffs, 7.0 * np.eye(8)[0], atol=1e-14)


def test_project_step_function():
    b = haar_basis(1)
    coeffs = project(b, lambda x: np.where(x <= 0, 1.0, 0.02), breakpoints=[0.0])
    assert np.allclose(coeffs, [0.51, 0.49], atol=1e-14)


def test_reconstruct_unit_vector():
    b = haar_basis(2)
    for xi in (-0.9, -0.1, 0.4, 0.99):
        assert reconstruct(b, np.eye(4)[0], xi) == pytest.approx(1.0)


def test_dyadic_step_function_exact():
    b = haar_basis(3)
    levels = np.array([0.3, -1.2, 2.0, 0.0, 1.0, 5.0, -3.0, 0.7])

    def f(x):
        return levels[b.cell_index(x)]

    coeffs = project(b, f, breakpoints=list(b.cell_edges[1:-1]))
    for c, mid in enumerate(b.cell_midpoints):
        assert reconstruct(b, coeffs, mid) == pytest.approx(levels[c], abs=1e-13)


def test_no_overshoot_random_piecewise_smooth():
    rng = np.random.default_rng(7)
    b = haar_basis(3)
    xs = np.linspace(-1, 1, 10_000)
    for _ in range(100):
        a = rng.standard_normal(4)
        jump_at = rng.uniform(-1, 1)

        def f(x):
            return a[0] * np.sin(4 * a[1] * x) + a[2] * x**2 + a[3] * (x > jump_at)

        coeffs = project(b, f, breakpoints=[jump_at])
        vals = coeffs @ b.values
        fx = f(xs)
        # 1e-6 slack covers extrema falling between the 10^4 samples
        assert vals.max() <= fx.max() + 1e-6
        assert vals.min() >= fx.min() - 1e-6


def test_legendre_linear_exact():
    c = legendre_project_demo(lambda x: 1 + x, 3)
    xs = np.linspace(-1, 1, 11)
    assert np.allclose(legendre_reconstruct(c, xs), 1 + xs, atol=1e-13)


def test_legendre_hat_undershoots():
    c = legendre_project_demo(lambda x: 1 - np.abs(x), 3, breakpoints=[0.0])
    assert legendre_reconstruct(c, np.linspace(-1, 1, 401)).min() < 0.0


def test_legendre_constant():
    c = legendre_project_demo(lambda x: 1.0 + 0 * x, 4)
    assert np.allclose(c, np.eye(4)[0], atol=1e-14)


def test_bivariate_ordering_graded():
    b = bivariate_haar_basis(4)
    # constant first, then level-one functions in xi1 and xi2
    assert np.allclose(b.values[0], 1.0)
    assert b.pairs[:3] == ((0, 0), (1, 0), (0, 1))


def test_invalid_levels():
    with pytest.raises(ValueError):
        haar_basis(-1)
    with pytest.raises(ValueError):
        bivariate_haar_basis(3)
