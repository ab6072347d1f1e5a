"""
Reference problem tests.

This module contains tests for the B-spline test function, its exact
coefficients in both bases, the periodization identity and the quadrature
helpers.
"""
import itertools
import math

import numpy as np
import pytest

from app.exceptions import DomainError, ParameterError
from app.schemas.base import BasisTag
from app.services.bases import univariate_table
from app.services.index_sets import enumerate_hyperbolic_cross
from app.services.reference_problems import (
    B2TensorOracle,
    ExpansionOracle,
    b2_cheb_coeff,
    b2_cheb_coeffs,
    b2_hpc_coeff,
    b2_hpc_coeffs,
    b2_norm_squared,
    bspline_b2,
    chebyshev_inner_product,
    fourier_coeff,
    lebesgue_inner_product_1d,
    periodize_cos,
    tail_remainder,
    tensor_coeff,
    test_function,
)

SQRT2 = math.sqrt(2.0)


def support_scale(k):
    return math.prod(SQRT2 ** -min(1, entry) for entry in k)


def test_bspline_values():
    assert bspline_b2(-1.0) == pytest.approx(0.75)
    assert bspline_b2(0.0) == pytest.approx(0.5)
    assert bspline_b2(1.0) == pytest.approx(0.125)
    assert bspline_b2(0.5) == pytest.approx(1 / 32 - 1 / 4 + 1 / 2)
    np.testing.assert_allclose(bspline_b2(np.array([-1.0, 1.0])), [0.75, 0.125])
    with pytest.raises(DomainError):
        bspline_b2(1.2)


def test_bspline_is_continuously_differentiable():
    h = 1e-6
    right = (bspline_b2(h) - bspline_b2(0.0)) / h
    left = (bspline_b2(0.0) - bspline_b2(-h)) / h
    assert right == pytest.approx(-0.5, abs=1e-5)
    assert left == pytest.approx(-0.5, abs=1e-5)


def test_test_function_is_a_product():
    assert test_function([0.0, 0.0]) == pytest.approx(0.25)
    assert test_function([-1.0, 1.0, 0.0]) == pytest.approx(0.75 * 0.125 * 0.5)
    batch = np.array([[0.0, 0.0], [1.0, -1.0]])
    np.testing.assert_allclose(test_function(batch), [0.25, 0.125 * 0.75])


def test_chebyshev_coefficient_examples():
    assert b2_cheb_coeff(0) == pytest.approx(0.46875, abs=1e-15)
    assert b2_cheb_coeff(4) == 0.0
    assert b2_cheb_coeff(3) == pytest.approx(1.0 / (10.0 * math.pi * SQRT2), abs=1e-15)
    assert b2_cheb_coeff(2) == pytest.approx(-1.0 / (32.0 * SQRT2), abs=1e-15)
    assert np.all(b2_cheb_coeffs(40)[4::2] == 0.0)


def test_half_period_cosine_coefficient_examples():
    assert b2_hpc_coeff(0) == pytest.approx(23.0 / (24.0 * SQRT2), abs=1e-15)
    assert b2_hpc_coeff(2) == pytest.approx(-1.0 / (4.0 * math.pi**2), abs=1e-15)
    assert b2_hpc_coeff(1) == pytest.approx(6.0 / math.pi**3 + 1.0 / math.pi**2, abs=1e-15)
    assert len(b2_hpc_coeffs(10)) == 11


def test_tensor_coefficients():
    assert tensor_coeff((0, 0), BasisTag.CHEBYSHEV) == pytest.approx((15.0 / 32.0) ** 2)
    assert tensor_coeff((3, 0, 1), BasisTag.HALF_PERIOD_COSINE) == pytest.approx(
        b2_hpc_coeff(3) * b2_hpc_coeff(0) * b2_hpc_coeff(1)
    )
    with pytest.raises(DomainError):
        tensor_coeff((1, -2), BasisTag.CHEBYSHEV)
    with pytest.raises(DomainError):
        b2_cheb_coeffs(-1)


def test_chebyshev_coefficients_match_quadrature():
    for k in range(51):
        quadrature = chebyshev_inner_product(test_function, (k,), nodes=4096)
        assert b2_cheb_coeff(k) == pytest.approx(quadrature, abs=1e-10)


def test_half_period_cosine_coefficients_match_quadrature():
    coeffs = b2_hpc_coeffs(50)
    for k in range(51):
        assert coeffs[k] == pytest.approx(lebesgue_inner_product_1d(bspline_b2, k), abs=1e-10)


def test_chebyshev_series_converges_pointwise():
    x = np.linspace(-1.0, 1.0, 11)
    K = 10_000
    cheb = univariate_table(BasisTag.CHEBYSHEV, K, x) @ b2_cheb_coeffs(K)
    hpc = univariate_table(BasisTag.HALF_PERIOD_COSINE, K, x) @ b2_hpc_coeffs(K)
    np.testing.assert_allclose(cheb, bspline_b2(x), atol=1e-6)
    np.testing.assert_allclose(hpc, bspline_b2(x), atol=1e-4)


@pytest.mark.parametrize("basis", list(BasisTag))
@pytest.mark.parametrize("cutoff", [16, 100_000])
def test_norm_matches_truncated_series(basis, cutoff):
    series = b2_cheb_coeffs(cutoff) if basis == BasisTag.CHEBYSHEV else b2_hpc_coeffs(cutoff)
    missing = b2_norm_squared(basis) - float(np.sum(series**2))
    assert -1e-14 <= missing <= tail_remainder(basis, cutoff) + 1e-14


def test_tail_cutoff_lower_limit():
    with pytest.raises(ParameterError):
        tail_remainder(BasisTag.CHEBYSHEV, 7)


@pytest.mark.parametrize(
    "terms",
    [{(0,): 1.0}, {(1,): 1.0}, {(3,): 1.0}, {(1, 2): 1.0}],
)
def test_periodization_identity_for_polynomials(terms):
    d = len(next(iter(terms)))
    polynomial = ExpansionOracle(BasisTag.CHEBYSHEV, d, terms)
    periodized = periodize_cos(polynomial)
    for k in itertools.product(range(5), repeat=d):
        fourier = fourier_coeff(periodized, k, grid=32)
        inner = chebyshev_inner_product(polynomial, k, nodes=64)
        assert fourier.real == pytest.approx(inner * support_scale(k), abs=1e-12)
        assert fourier.imag == pytest.approx(0.0, abs=1e-12)


def test_periodization_identity_for_test_function():
    periodized = periodize_cos(test_function)
    for k in range(8):
        fourier = fourier_coeff(periodized, (k,), grid=512)
        inner = chebyshev_inner_product(test_function, (k,), nodes=4096)
        assert fourier.real == pytest.approx(inner * support_scale((k,)), abs=1e-8)
    for k in [(0, 0), (1, 2), (3, 0), (2, 2), (3, 3)]:
        fourier = fourier_coeff(periodized, k, grid=512)
        inner = chebyshev_inner_product(test_function, k, nodes=512)
        assert fourier.real == pytest.approx(inner * support_scale(k), abs=1e-8)
        assert fourier.real == pytest.approx(tensor_coeff(k, BasisTag.CHEBYSHEV) * support_scale(k), abs=1e-8)


def test_fourier_coefficient_of_cosine():
    def g(points):
        return np.cos(np.pi * points[:, 0])

    assert fourier_coeff(g, (1,), grid=16) == pytest.approx(0.5, abs=1e-15)
    assert fourier_coeff(g, (-1,), grid=16) == pytest.approx(0.5, abs=1e-15)
    assert abs(fourier_coeff(g, (0,), grid=16)) < 1e-15
    assert abs(fourier_coeff(g, (2,), grid=16)) < 1e-15


def test_fourier_grid_too_coarse():
    with pytest.raises(ParameterError):
        fourier_coeff(periodize_cos(test_function), (5,), grid=20)


def test_b2_tensor_oracle():
    oracle = B2TensorOracle(BasisTag.CHEBYSHEV, 2)
    indices = enumerate_hyperbolic_cross(2, 10)
    expected = [tensor_coeff(k, BasisTag.CHEBYSHEV) for k in indices.as_tuples()]
    np.testing.assert_allclose(oracle.coefficients(indices), expected, rtol=1e-15, atol=1e-18)
    assert oracle.coefficient((3, 1)) == pytest.approx(expected[indices.positions()[(3, 1)]])
    univariate = float(np.sum(b2_cheb_coeffs(1000) ** 2))
    assert oracle.norm_squared(1000) == pytest.approx(univariate**2)
    assert oracle.remainder_bound(1000) > 0.0
    with pytest.raises(DomainError):
        oracle.coefficients(enumerate_hyperbolic_cross(3, 2))
    with pytest.raises(DomainError):
        B2TensorOracle(BasisTag.CHEBYSHEV, 0)


def test_expansion_oracle_evaluates_terms():
    oracle = ExpansionOracle(BasisTag.CHEBYSHEV, 2, {(0, 0): 3.0, (1, 1): -2.0})
    np.testing.assert_allclose(oracle(np.array([[0.5, 0.5]])), [2.0], atol=1e-15)
    assert oracle.coefficient((1, 1)) == -2.0
    assert oracle.coefficient((2, 0)) == 0.0
    assert oracle.norm_squared(100) == pytest.approx(13.0)
    assert oracle.remainder_bound(100) == 0.0
