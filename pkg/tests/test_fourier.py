import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffbt.errors import InvalidArgumentError
from ffbt.fourier import (
    dft2,
    direct_finite_fourier,
    finite_fourier_coeff_1d,
    finite_fourier_coeff_2d,
    finite_fourier_disk,
    finite_fourier_table,
    frequencies,
    tau,
)
from ffbt.oracle import QuadratureSpec, fourier_coefficient_trapezoid
from ffbt.sampling import Grid, field_from_values

from conftest import random_field


def _dft_brute(A):
    L = A.shape[0]
    w = np.exp(-2j * np.pi * np.outer(np.arange(L), np.arange(L)) / L)
    return w @ A @ w.T


def test_dft_all_ones():
    out = dft2(np.ones((4, 4)))
    want = np.zeros((4, 4))
    want[0, 0] = 16
    np.testing.assert_allclose(out, want, atol=1e-12)


@pytest.mark.parametrize("L", [1, 3, 6])
def test_dft_delta(L):
    A = np.zeros((L, L))
    A[0, 0] = 1.0
    np.testing.assert_allclose(dft2(A), np.ones((L, L)), atol=1e-15)


def test_dft_brute_force(rng):
    A = random_field(rng, 8)
    np.testing.assert_allclose(dft2(A), _dft_brute(A), rtol=0, atol=1e-10)


def test_dft_rejects_rectangles():
    with pytest.raises(InvalidArgumentError):
        dft2(np.zeros((3, 4)))


def test_frequencies_order():
    np.testing.assert_array_equal(frequencies(7), [0, 1, 2, 3, -3, -2, -1])
    assert tau(-2, 7) == 5


def test_zero_frequency_is_sum(rng):
    fld = field_from_values(random_field(rng, 9))
    assert finite_fourier_disk(fld, (0, 0)) == pytest.approx(fld.delta**2 * fld.values.sum(), abs=1e-13)


def test_folding_matches_definition(rng):
    fld = field_from_values(random_field(rng, 9))
    assert abs(finite_fourier_disk(fld, (3, -2)) - direct_finite_fourier(fld, (3, -2))) <= 1e-12


@pytest.mark.parametrize("L", [5, 8, 11])
def test_table_matches_definition(rng, L):
    fld = field_from_values(random_field(rng, L))
    K = 6
    tab = finite_fourier_table(fld, K)
    for k1 in range(-K, K + 1):
        for k2 in range(-K, K + 1):
            assert abs(tab[k1 + K, k2 + K] - direct_finite_fourier(fld, (k1, k2))) <= 1e-12


def test_real_conjugation(rng):
    fld = field_from_values(random_field(rng, 11, real=True))
    tab = finite_fourier_table(fld, 5)
    np.testing.assert_allclose(np.conj(tab), tab[::-1, ::-1], atol=1e-13)


@pytest.mark.parametrize("k, expected", [(1, 1.0), (0, 0.0)])
def test_1d_trig(k, expected):
    assert abs(finite_fourier_coeff_1d(lambda x: np.exp(1j * np.pi * x), k, 3) - expected) <= 1e-15


def test_1d_smooth_bound():
    got = finite_fourier_coeff_1d(lambda x: x**2, 0, 101)
    assert abs(got - 1.0 / 3.0) <= 12 * 2.0 / (np.pi * 50)
    assert abs(got - 1.0 / 3.0) <= 1e-3


def test_2d_examples():
    assert finite_fourier_coeff_2d(lambda x, y: np.ones_like(x), (0, 0), 7) == pytest.approx(1.0)
    U = lambda x, y: np.exp(1j * np.pi * (x + y))  # noqa: E731
    assert abs(finite_fourier_coeff_2d(U, (1, 1), 5) - 1.0) <= 1e-15


def test_2d_smooth_against_trapezoid():
    def U(x, y):
        return np.exp(np.cos(np.pi * x) + 0.5 * np.sin(np.pi * y))

    K = 32
    # |grad U| <= pi e^1.5 * sqrt(1 + 1/4)
    grad = np.pi * np.exp(1.5) * np.sqrt(1.25)
    ref = fourier_coefficient_trapezoid(U, (2, 1), QuadratureSpec(cartesian_nodes=512))
    assert abs(finite_fourier_coeff_2d(U, (2, 1), 2 * K + 1) - ref) <= 24 * grad / (np.pi * K)


def _trig_poly(K, seed):
    rng = np.random.default_rng(seed)
    n = 2 * K + 1
    coef = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    ks = np.arange(-K, K + 1)

    def U(x, y):
        e1 = np.exp(1j * np.pi * np.multiply.outer(x, ks))
        e2 = np.exp(1j * np.pi * np.multiply.outer(y, ks))
        return np.sum((e1 @ coef) * e2, axis=-1)

    return U, coef


@settings(max_examples=100, deadline=None)
@given(K=st.integers(0, 16), seed=st.integers(0, 2**32 - 1))
def test_trig_polynomial_exact(K, seed):
    U, coef = _trig_poly(K, seed)
    L = 2 * K + 1
    x = Grid(L).nodes
    vals = U(x[:, None], x[None, :])
    # the finite coefficient is f^(k; L) / 4 since delta^2 = 4 / L^2
    table = finite_fourier_table(field_from_values(vals), K) / 4.0
    assert np.max(np.abs(table - coef)) <= 1e-12 * max(1.0, np.abs(coef).max())
    for k1, k2 in [(0, 0), (K, -K), (-K, K // 2)]:
        got = finite_fourier_coeff_2d(U, (k1, k2), L)
        assert abs(got - coef[k1 + K, k2 + K]) <= 1e-12 * max(1.0, np.abs(coef).max())
