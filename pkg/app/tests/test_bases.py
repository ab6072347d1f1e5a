"""
Basis tests.

This module contains tests for univariate and tensor basis evaluation and for
design matrix assembly.
"""
import math

import numpy as np
import pytest
from scipy import linalg

from app.exceptions import DomainError
from app.schemas.base import BasisTag, Measure
from app.schemas.nodes import NodeSet
from app.services.bases import cheb_1d, cheb_tensor, design_matrix, hpc_1d, hpc_tensor
from app.services.index_sets import enumerate_hyperbolic_cross
from app.services.reference_problems import gauss_chebyshev
from app.services.sampling import draw_chebyshev

SQRT2 = math.sqrt(2.0)


@pytest.mark.parametrize(
    "k, x, expected",
    [(0, 0.3, 1.0), (1, 0.5, SQRT2 * 0.5), (2, 0.0, -SQRT2), (3, 1.0, SQRT2), (3, -1.0, -SQRT2)],
)
def test_cheb_1d_values(k, x, expected):
    assert cheb_1d(k, x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("k, x, expected", [(0, 0.7, 1.0 / SQRT2), (1, -1.0, 1.0), (2, 0.0, -1.0)])
def test_hpc_1d_values(k, x, expected):
    assert hpc_1d(k, x) == pytest.approx(expected, abs=1e-15)


def test_tensor_values():
    assert cheb_tensor((0, 0), (0.2, -0.9)) == 1.0
    assert cheb_tensor((1, 1), (0.5, 0.5)) == pytest.approx(0.5, abs=1e-15)
    assert cheb_tensor((2, 1), (0.0, 1.0)) == pytest.approx(-2.0, abs=1e-15)
    assert hpc_tensor((0, 0), (0.0, 0.0)) == pytest.approx(0.5, abs=1e-15)
    assert hpc_tensor((1, 0), (-1.0, 0.3)) == pytest.approx(1.0 / SQRT2, abs=1e-15)
    assert hpc_tensor((1, 1), (0.0, 0.0)) == pytest.approx(0.0, abs=1e-15)


def test_outside_interval_raises():
    with pytest.raises(DomainError):
        cheb_1d(1, 1.5)
    with pytest.raises(DomainError):
        hpc_1d(2, -1.01)
    with pytest.raises(DomainError):
        cheb_tensor((1, 0), (0.5,))


def test_chebyshev_orthonormality():
    nodes, weights = gauss_chebyshev(64)
    for j in range(31):
        for k in range(31):
            value = sum(w * cheb_1d(j, x) * cheb_1d(k, x) for x, w in zip(nodes, weights))
            assert value == pytest.approx(1.0 if j == k else 0.0, abs=1e-12)


def test_half_period_cosine_orthonormality():
    nodes, weights = np.polynomial.legendre.leggauss(200)
    table = np.array([[hpc_1d(k, x) for x in nodes] for k in range(31)])
    gram = (table * weights) @ table.T
    np.testing.assert_allclose(gram, np.eye(31), atol=1e-12)


def test_three_term_recurrence():
    rng = np.random.default_rng(7)

    def unscaled(k, x):
        return cheb_1d(k, x) / SQRT2 ** min(1, k)

    for x in rng.uniform(-1.0, 1.0, 20):
        for k in range(1, 25):
            assert unscaled(k + 1, x) == pytest.approx(2 * x * unscaled(k, x) - unscaled(k - 1, x), abs=1e-12)


def test_tensor_matches_product_of_factors():
    rng = np.random.default_rng(11)
    for _ in range(100):
        d = int(rng.integers(1, 5))
        k = rng.integers(0, 12, d)
        x = rng.uniform(-1.0, 1.0, d)
        product = math.prod(cheb_1d(int(k_l), float(x_l)) for k_l, x_l in zip(k, x))
        assert cheb_tensor(k, x) == pytest.approx(product, abs=1e-14)


def test_design_matrix_single_node():
    nodes = NodeSet(d=2, points=[[0.0, 0.0]], measure=Measure.CHEBYSHEV, seed=0)
    matrix = design_matrix(nodes, enumerate_hyperbolic_cross(2, 1), BasisTag.CHEBYSHEV)
    np.testing.assert_allclose(matrix.entries, [[1.0, 0.0, 0.0, 0.0]], atol=1e-15)
    assert (matrix.rows, matrix.cols) == (1, 4)


def test_design_matrix_normalization():
    nodes = draw_chebyshev(2, 4, seed=3)
    indices = enumerate_hyperbolic_cross(2, 6)
    plain = design_matrix(nodes, indices, BasisTag.CHEBYSHEV, normalized=False)
    scaled = design_matrix(nodes, indices, BasisTag.CHEBYSHEV, normalized=True)
    np.testing.assert_array_equal(scaled.entries, plain.entries * 0.5)
    np.testing.assert_allclose(scaled.unnormalized(), plain.entries, rtol=1e-15)


def test_design_matrix_entries_match_tensor_functions():
    nodes = draw_chebyshev(3, 25, seed=5)
    indices = enumerate_hyperbolic_cross(3, 6)
    for basis, tensor in ((BasisTag.CHEBYSHEV, cheb_tensor), (BasisTag.HALF_PERIOD_COSINE, hpc_tensor)):
        matrix = design_matrix(nodes, indices, basis)
        for i in (0, 7, 24):
            for j, k in enumerate(indices.as_tuples()):
                assert matrix.entries[i, j] == pytest.approx(tensor(k, nodes.points[i]), abs=1e-14)
        if basis == BasisTag.CHEBYSHEV:
            assert np.abs(matrix.entries).max() <= SQRT2**3 + 1e-12


def test_design_matrix_dimension_mismatch():
    nodes = draw_chebyshev(2, 10, seed=1)
    with pytest.raises(DomainError):
        design_matrix(nodes, enumerate_hyperbolic_cross(3, 2), BasisTag.CHEBYSHEV)


def test_gram_matrix_converges_to_identity():
    indices = enumerate_hyperbolic_cross(2, 10)
    close = 0
    for seed in range(10):
        matrix = design_matrix(draw_chebyshev(2, 100_000, seed), indices, BasisTag.CHEBYSHEV, normalized=True)
        gram = matrix.entries.T @ matrix.entries
        close += np.abs(linalg.eigvalsh(gram - np.eye(indices.m))).max() < 0.1
    assert close >= 9
