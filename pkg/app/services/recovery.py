"""
Recovery Service

Least-squares fitting of basis coefficients from node samples, evaluation of
the resulting approximant and L2 error measurement, either in coefficient
space (Parseval) or by Monte Carlo integration.
"""
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import linalg

from app.config import settings
from app.exceptions import DomainError, ParameterError, SingularityError
from app.logconf import DEFAULT_LOGGER
from app.schemas.base import NATURAL_ERROR_MEASURE, BasisTag, ErrorMeasure, ErrorMethod
from app.schemas.index_set import MultiIndexSet
from app.schemas.nodes import NodeSet
from app.schemas.recovery import Approximant, ErrorReport, NormComparison
from app.services.bases import design_matrix, evaluate_basis
from app.services.reference_problems import CoefficientOracle
from app.services.sampling import push_forward, substreams

logger = logging.getLogger(DEFAULT_LOGGER)

MIN_MC_POINTS = 100


def least_squares_fit(
    nodes: NodeSet,
    samples: Sequence[float],
    indices: MultiIndexSet,
    basis: BasisTag,
    rank_threshold: Optional[float] = None,
) -> Approximant:
    """
    Coefficients minimizing ||L c - y||_2 for L = [basis_k(x)]_{x, k}.

    Solved by an economic QR factorization of L.

    Args:
        nodes: Sample nodes
        samples: Function values at the nodes, in node order
        indices: Index set
        basis: Basis tag
        rank_threshold: Smallest admissible singular value of the normalized
            design matrix, defaults to settings.RANK_THRESHOLD

    Returns:
        Approximant: Fitted coefficients with the residual norm
    """
    values = np.asarray(samples, dtype=np.float64).reshape(-1)
    if values.size != nodes.count:
        raise DomainError(f"{values.size} samples for {nodes.count} nodes")
    if nodes.count < indices.m:
        raise ParameterError(f"underdetermined system: {nodes.count} nodes for {indices.m} coefficients")
    threshold = settings.RANK_THRESHOLD if rank_threshold is None else rank_threshold

    matrix = design_matrix(nodes, indices, basis, normalized=False).entries
    singular_values = linalg.svdvals(matrix) / math.sqrt(nodes.count)
    if singular_values[-1] <= threshold:
        raise SingularityError(
            f"design matrix is rank deficient: smallest normalized singular value {singular_values[-1]:.3e}",
            smallest=float(singular_values[-1]),
            rank=int(np.count_nonzero(singular_values > threshold)),
        )

    q, r = linalg.qr(matrix, mode="economic")
    coefficients = linalg.solve_triangular(r, q.T @ values)
    residual = float(np.linalg.norm(matrix @ coefficients - values))
    logger.debug("least squares %dx%d, residual %.3e", nodes.count, indices.m, residual)
    return Approximant(indices=indices, coefficients=coefficients, basis=basis, residual_norm=residual)


def evaluate_many(approx: Approximant, points: np.ndarray) -> np.ndarray:
    """sum_k c_k basis_k(x) at every row of points"""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != approx.indices.d:
        raise DomainError(f"points of shape {points.shape} do not match dimension {approx.indices.d}")
    return evaluate_basis(approx.basis, approx.indices, points) @ approx.coefficients


def evaluate_approximant(approx: Approximant, x: Sequence[float]) -> float:
    """sum_k c_k basis_k(x) at a single point"""
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    if point.size != approx.indices.d:
        raise DomainError(f"point has {point.size} coordinates, expected {approx.indices.d}")
    return float(evaluate_many(approx, point[np.newaxis, :])[0])


def l2_error_parseval(
    exact_coeffs: CoefficientOracle,
    approx: Approximant,
    tail_cutoff: Optional[int] = None,
) -> ErrorReport:
    """
    L2 error from coefficients, using orthonormality of the basis.

        error^2 = sum_{k in I} (c_k - f_k)^2 + (||f||^2 - sum_{k in I} f_k^2)

    ||f||^2 comes from the univariate coefficient series truncated at the
    cutoff and tensorized; its remainder bound is part of the report.
    """
    if BasisTag(exact_coeffs.basis) != BasisTag(approx.basis):
        raise DomainError(f"oracle basis {exact_coeffs.basis} differs from approximant basis {approx.basis}")
    cutoff = settings.PARSEVAL_CUTOFF if tail_cutoff is None else tail_cutoff

    exact = exact_coeffs.coefficients(approx.indices)
    mismatch = float(np.sum((approx.coefficients - exact) ** 2))
    tail = max(exact_coeffs.norm_squared(cutoff) - float(np.sum(exact**2)), 0.0)
    return ErrorReport(
        value=math.sqrt(mismatch + tail),
        method=ErrorMethod.PARSEVAL,
        measure=NATURAL_ERROR_MEASURE[BasisTag(approx.basis)],
        tail_cutoff=cutoff,
        remainder_bound=exact_coeffs.remainder_bound(cutoff),
    )


def _mean_square(
    function: Callable[[np.ndarray], np.ndarray],
    measure: ErrorMeasure,
    d: int,
    count: int,
    seed: int,
    chunk: int,
):
    """Monte Carlo mean and standard error of function(y) under the measure"""
    chunks = -(-count // chunk)
    total, total_squares = 0.0, 0.0
    for index, rng in enumerate(substreams(seed, chunks)):
        size = min(chunk, count - index * chunk)
        draws = rng.uniform(-1.0, 1.0, size=(size, d))
        points = push_forward(draws) if measure == ErrorMeasure.CHEBYSHEV_WEIGHTED else draws
        values = np.asarray(function(points), dtype=np.float64)
        total += float(np.sum(values))
        total_squares += float(np.sum(values**2))

    mean = total / count
    variance = max(total_squares / count - mean**2, 0.0)
    volume = 1.0 if measure == ErrorMeasure.CHEBYSHEV_WEIGHTED else 2.0**d
    return volume * mean, volume * math.sqrt(variance / count)


def l2_error_montecarlo(
    f: Callable[[np.ndarray], np.ndarray],
    approx: Approximant,
    measure: ErrorMeasure,
    N: Optional[int] = None,
    seed: Optional[int] = None,
    chunk: Optional[int] = None,
) -> ErrorReport:
    """
    Monte Carlo L2 error of an approximant.

    Args:
        f: Target function mapping (N, d) arrays to (N,) arrays
        approx: Approximant
        measure: Chebyshev-weighted (draws from rho) or Lebesgue (uniform
            draws scaled by the volume 2^d)
        N: Number of draws, at least 100
        seed: Seed of the draws
        chunk: Draws per substream

    Returns:
        ErrorReport: Error value with its delta-method standard error
    """
    count = settings.MC_POINTS if N is None else N
    if count < MIN_MC_POINTS:
        raise ParameterError(f"Monte Carlo needs at least {MIN_MC_POINTS} points, got {count}")
    seed = settings.DEFAULT_SEED if seed is None else seed
    chunk = chunk or settings.MC_CHUNK
    measure = ErrorMeasure(measure)

    def squared_error(points: np.ndarray) -> np.ndarray:
        return (np.asarray(f(points)) - evaluate_many(approx, points)) ** 2

    mean, mean_se = _mean_square(squared_error, measure, approx.indices.d, count, seed, chunk)
    value = math.sqrt(mean)
    standard_error = mean_se / (2.0 * value) if value > 0.0 else 0.0
    logger.debug("Monte Carlo error %.4e +- %.1e (N=%d)", value, standard_error, count)
    return ErrorReport(
        value=value,
        method=ErrorMethod.MONTE_CARLO,
        measure=measure,
        mc_points=count,
        standard_error=standard_error,
        seed=seed,
    )


def norm_domination_ratio(
    g: Callable[[np.ndarray], np.ndarray],
    d: int,
    N: Optional[int] = None,
    seed: Optional[int] = None,
) -> NormComparison:
    """
    Monte Carlo estimates of int |g|^2 d rho and int |g|^2 dx on [-1, 1]^d.

    The first dominates pi^{-d} times the second for every g.
    """
    count = settings.MC_POINTS if N is None else N
    if count < MIN_MC_POINTS:
        raise ParameterError(f"Monte Carlo needs at least {MIN_MC_POINTS} points, got {count}")
    seed = settings.DEFAULT_SEED if seed is None else seed
    weighted_seed, lebesgue_seed = (int(s) for s in np.random.SeedSequence(seed).generate_state(2, np.uint64))

    def squared(points: np.ndarray) -> np.ndarray:
        return np.asarray(g(points), dtype=np.float64) ** 2

    weighted, weighted_se = _mean_square(
        squared, ErrorMeasure.CHEBYSHEV_WEIGHTED, d, count, weighted_seed, settings.MC_CHUNK
    )
    lebesgue, lebesgue_se = _mean_square(squared, ErrorMeasure.LEBESGUE, d, count, lebesgue_seed, settings.MC_CHUNK)
    return NormComparison(weighted=weighted, weighted_se=weighted_se, lebesgue=lebesgue, lebesgue_se=lebesgue_se, d=d)
