"""
Subsampling tests.

This module contains tests for the barrier subsampler, the lower frame bound
check and frame bounds of design matrices.
"""
import itertools

import numpy as np
import pytest
from scipy import linalg

from app.exceptions import DomainError, GuaranteeError, ParameterError, SingularityError
from app.schemas.base import BasisTag, Measure
from app.schemas.frames import DesignMatrix, SubsampleResult
from app.services.bases import design_matrix
from app.services.index_sets import enumerate_hyperbolic_cross
from app.services.sampling import draw_chebyshev, draw_uniform, oversampled_budget
from app.services.subsampling import (
    BarrierSubsampler,
    bss_subsample,
    frame_bounds,
    guarantee_constant,
    require_guarantee,
    subsample_nodes,
    verify_guarantee,
)


def cross_matrix(d, R, seed, basis=BasisTag.CHEBYSHEV):
    indices = enumerate_hyperbolic_cross(d, R)
    sampler = draw_chebyshev if basis == BasisTag.CHEBYSHEV else draw_uniform
    nodes = sampler(d, oversampled_budget(indices.m), seed)
    return design_matrix(nodes, indices, basis)


def test_guarantee_constant():
    assert guarantee_constant(2.0) == pytest.approx(801.0)
    assert guarantee_constant(3.0) == pytest.approx(89.0 * 16 / 8)
    with pytest.raises(ParameterError):
        guarantee_constant(1.0)


def test_subsample_example_cross():
    nodes = draw_chebyshev(2, 2000, seed=1)
    indices = enumerate_hyperbolic_cross(2, 20)
    selected, result, summary = subsample_nodes(nodes, indices, BasisTag.CHEBYSHEV, 1.1)
    assert (summary.m, summary.M, summary.n) == (107, 2000, 118)
    assert result.satisfied
    assert summary.a_min_after > 1e-8
    assert selected.count == 118
    assert list(result.indices) == sorted(result.indices)
    assert summary.margin == pytest.approx(result.margin)


@pytest.mark.parametrize(
    "d, R",
    [(2, 5), (2, 10), (2, 20), (3, 5), (3, 10), pytest.param(3, 20, marks=pytest.mark.slow)],
)
@pytest.mark.parametrize("b", [1.1, 1.5, 2.0])
def test_guarantee_holds(d, R, b):
    for seed in range(3):
        matrix = cross_matrix(d, R, seed)
        result = bss_subsample(matrix, b)
        assert result.n <= int(np.ceil(b * matrix.cols))
        assert result.margin >= -result.tolerance
        assert verify_guarantee(matrix, result) == pytest.approx(result.margin, rel=1e-12, abs=1e-12)
        require_guarantee(result)


def test_guarantee_against_exhaustive_search():
    rng = np.random.default_rng(5)
    for _ in range(20):
        rows = rng.standard_normal((8, 2))
        result = bss_subsample(rows, 2.0)
        assert result.n == 4
        gram = rows.T @ rows
        margins = {}
        for subset in itertools.combinations(range(8), 4):
            chosen = rows[list(subset)]
            difference = (result.guarantee_constant / 2.0) * (chosen.T @ chosen) - gram / 8.0
            margins[subset] = linalg.eigvalsh(difference)[0]
        assert result.margin == pytest.approx(margins[tuple(result.indices)], abs=1e-12)
        assert result.margin >= -result.tolerance
        assert max(margins.values()) >= 0.0


def test_verify_guarantee_on_design_matrix():
    indices = enumerate_hyperbolic_cross(1, 1)
    nodes = draw_chebyshev(1, 8, seed=21)
    matrix = design_matrix(nodes, indices, BasisTag.CHEBYSHEV)
    result = bss_subsample(matrix, 2.0)
    assert verify_guarantee(matrix, result) >= -result.tolerance


def test_whole_set_when_budget_is_tight():
    rows = np.random.default_rng(3).standard_normal((4, 2))
    result = bss_subsample(rows, 2.0)
    np.testing.assert_array_equal(result.indices, np.arange(4))
    assert result.barrier == 1.0
    assert result.margin >= 0.0


def test_full_set_margin_is_nonnegative():
    matrix = cross_matrix(2, 5, seed=2)
    everything = SubsampleResult(
        indices=np.arange(matrix.rows),
        b=2.0,
        m=matrix.cols,
        M=matrix.rows,
        guarantee_constant=guarantee_constant(2.0),
        margin=0.0,
        tolerance=0.0,
        barrier=1.0,
    )
    assert verify_guarantee(matrix, everything) >= 0.0


def test_invalid_arguments():
    rows = np.random.default_rng(0).standard_normal((50, 4))
    with pytest.raises(ParameterError):
        bss_subsample(rows, 1.2)
    with pytest.raises(ParameterError):
        bss_subsample(rows[:7], 2.0)
    with pytest.raises(ParameterError):
        bss_subsample(rows, 2.0, selection="random")


def test_rank_deficient_frame():
    rows = np.random.default_rng(0).standard_normal((40, 3))
    rows[:, 2] = rows[:, 0] + rows[:, 1]
    with pytest.raises(SingularityError):
        bss_subsample(rows, 2.0)


def test_deterministic():
    matrix = cross_matrix(2, 10, seed=4)
    first = bss_subsample(matrix, 1.5)
    second = bss_subsample(matrix, 1.5)
    np.testing.assert_array_equal(first.indices, second.indices)
    assert first.margin == second.margin


def test_permutation_equivariance():
    rows = np.random.default_rng(9).standard_normal((30, 3))
    permutation = np.random.default_rng(10).permutation(30)
    original = bss_subsample(rows, 2.0, selection="best")
    shuffled = bss_subsample(rows[permutation], 2.0, selection="best")
    np.testing.assert_array_equal(np.sort(permutation[shuffled.indices]), original.indices)


def test_best_rule_satisfies_guarantee():
    result = bss_subsample(cross_matrix(2, 6, seed=6), 1.5, selection="best")
    assert result.selection == "best"
    assert result.satisfied


def test_out_of_range_indices():
    matrix = design_matrix(draw_chebyshev(1, 8, seed=0), enumerate_hyperbolic_cross(1, 1), BasisTag.CHEBYSHEV)
    foreign = SubsampleResult(
        indices=[0, 50],
        b=2.0,
        m=2,
        M=100,
        guarantee_constant=801.0,
        margin=0.0,
        tolerance=0.0,
        barrier=0.0,
    )
    with pytest.raises(DomainError):
        verify_guarantee(matrix, foreign)


def test_require_guarantee_raises():
    failing = SubsampleResult(
        indices=[0, 1],
        b=2.0,
        m=1,
        M=4,
        guarantee_constant=801.0,
        margin=-1.0,
        tolerance=1e-12,
        barrier=0.0,
    )
    with pytest.raises(GuaranteeError) as info:
        require_guarantee(failing)
    assert info.value.margin == -1.0


def test_frame_bounds_of_orthonormal_columns():
    q, _ = np.linalg.qr(np.random.default_rng(1).standard_normal((50, 6)))
    indices = enumerate_hyperbolic_cross(1, 5)
    matrix = DesignMatrix(entries=q * np.sqrt(50), basis=BasisTag.CHEBYSHEV, normalized=False, indices=indices)
    bounds = frame_bounds(matrix)
    assert bounds.a_min == pytest.approx(1.0, abs=1e-12)
    assert bounds.b_max == pytest.approx(1.0, abs=1e-12)


def test_frame_bounds_gram_path_matches_svd():
    matrix = cross_matrix(2, 10, seed=7)
    rows = matrix.unnormalized()
    direct = frame_bounds(matrix)
    via_gram = frame_bounds(matrix, gram=rows.T @ rows)
    assert via_gram.a_min == pytest.approx(direct.a_min, rel=1e-8)
    assert via_gram.b_max == pytest.approx(direct.b_max, rel=1e-8)


def test_frame_bounds_with_fewer_rows_than_columns():
    matrix = design_matrix(draw_chebyshev(2, 5, seed=0), enumerate_hyperbolic_cross(2, 4), BasisTag.CHEBYSHEV)
    assert frame_bounds(matrix).a_min == 0.0


@pytest.mark.parametrize(
    "basis, a_band, b_band",
    [
        (BasisTag.CHEBYSHEV, (0.6, 0.9), (1.1, 1.4)),
        (BasisTag.HALF_PERIOD_COSINE, (0.25, 0.5), (0.55, 0.75)),
    ],
)
def test_frame_bounds_of_full_sample(basis, a_band, b_band):
    inside = 0
    for seed in range(10):
        bounds = frame_bounds(cross_matrix(2, 20, seed, basis=basis))
        inside += a_band[0] <= bounds.a_min <= a_band[1] and b_band[0] <= bounds.b_max <= b_band[1]
    assert inside >= 8


def test_uniform_nodes_carry_measure():
    nodes = draw_uniform(2, 300, seed=3)
    selected, result, _ = subsample_nodes(nodes, enumerate_hyperbolic_cross(2, 6), BasisTag.HALF_PERIOD_COSINE, 1.5)
    assert selected.measure == Measure.UNIFORM
    np.testing.assert_array_equal(selected.subset, result.indices)


@pytest.mark.parametrize("selection", ["first", "best"])
def test_final_barrier_is_certified(selection):
    rows = cross_matrix(2, 10, seed=8).unnormalized()
    factor = linalg.cholesky(rows.T @ rows, lower=True)
    whitened = linalg.solve_triangular(factor, rows.T, lower=True).T
    M, m = whitened.shape
    subsampler = BarrierSubsampler(1.5, selection=selection)
    selected, barrier, _ = subsampler.select(whitened, int(np.ceil(1.5 * m)))

    frame = whitened[selected].T @ whitened[selected]
    eigenvalues = linalg.eigvalsh(frame)
    assert eigenvalues[0] > barrier
    epsilon = M / (np.sqrt(1.5) - 1.0)
    assert np.sum(1.0 / (eigenvalues - barrier)) <= epsilon * (1.0 + 1e-9)
