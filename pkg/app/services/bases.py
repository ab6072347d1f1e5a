"""
Basis Service

This module evaluates the univariate Chebyshev and half-period cosine bases,
their tensor products, and assembles design matrices over node sets.

    T_k(x) = sqrt(2)^{min(1, k)} cos(k arccos x)          orthonormal in L2(rho)
    V_k(x) = sqrt(2)^{-[k == 0]} cos(pi k (x + 1) / 2)    orthonormal in L2([-1, 1])
"""
import logging
import math
from typing import Sequence

import numpy as np

from app.exceptions import DomainError
from app.logconf import DEFAULT_LOGGER
from app.schemas.base import BasisTag
from app.schemas.frames import DesignMatrix
from app.schemas.index_set import MultiIndexSet, as_multi_index
from app.schemas.nodes import NodeSet

logger = logging.getLogger(DEFAULT_LOGGER)

SQRT2 = math.sqrt(2.0)


def _check_unit_interval(x) -> np.ndarray:
    values = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(values)) or np.any(np.abs(values) > 1.0):
        raise DomainError("basis functions are defined on [-1, 1] only")
    return values


def _check_degree(k: int) -> int:
    k = int(k)
    if k < 0:
        raise DomainError(f"degree must be nonnegative, got {k}")
    return k


def cheb_1d(k: int, x: float) -> float:
    """Normalized Chebyshev polynomial T_k at x"""
    k = _check_degree(k)
    value = float(np.cos(k * np.arccos(_check_unit_interval(x))))
    return SQRT2 * value if k > 0 else value


def hpc_1d(k: int, x: float) -> float:
    """Half-period cosine V_k at x"""
    k = _check_degree(k)
    value = float(np.cos(np.pi * k * (_check_unit_interval(x) + 1.0) / 2.0))
    return value if k > 0 else value / SQRT2


_UNIVARIATE = {
    BasisTag.CHEBYSHEV: cheb_1d,
    BasisTag.HALF_PERIOD_COSINE: hpc_1d,
}


def _tensor(basis: BasisTag, k: Sequence[int], x: Sequence[float]) -> float:
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    index = as_multi_index(k, d=len(point))
    univariate = _UNIVARIATE[BasisTag(basis)]
    value = 1.0
    for k_l, x_l in zip(index, point):
        value *= univariate(k_l, x_l)
    return value


def cheb_tensor(k: Sequence[int], x: Sequence[float]) -> float:
    """eta_k(x) = prod_l T_{k_l}(x_l)"""
    return _tensor(BasisTag.CHEBYSHEV, k, x)


def hpc_tensor(k: Sequence[int], x: Sequence[float]) -> float:
    """psi_k(x) = prod_l V_{k_l}(x_l)"""
    return _tensor(BasisTag.HALF_PERIOD_COSINE, k, x)


def univariate_table(basis: BasisTag, kmax: int, x: np.ndarray) -> np.ndarray:
    """
    Evaluate degrees 0..kmax of a univariate basis at every x.

    Args:
        basis: Basis tag
        kmax: Largest degree
        x: One-dimensional array of points in [-1, 1]

    Returns:
        np.ndarray: Array of shape (len(x), kmax + 1)
    """
    x = _check_unit_interval(x).reshape(-1)
    degrees = np.arange(kmax + 1, dtype=np.float64)
    basis = BasisTag(basis)
    if basis == BasisTag.CHEBYSHEV:
        table = np.cos(np.outer(np.arccos(x), degrees))
        table[:, 1:] *= SQRT2
    else:
        table = np.cos(np.outer(np.pi * (x + 1.0) / 2.0, degrees))
        table[:, 0] /= SQRT2
    return table


def evaluate_basis(basis: BasisTag, indices: MultiIndexSet, points: np.ndarray) -> np.ndarray:
    """
    Evaluate every tensor basis function of an index set at every point.

    Column j holds basis_{k_j}; one univariate table per coordinate is gathered
    and multiplied in, so no basis value is recomputed.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != indices.d:
        raise DomainError(f"points of shape {points.shape} do not match dimension {indices.d}")

    values = np.ones((points.shape[0], indices.m), dtype=np.float64)
    for axis in range(indices.d):
        degrees = indices.indices[:, axis]
        table = univariate_table(basis, int(degrees.max(initial=0)), points[:, axis])
        values *= table[:, degrees]
    return values


def design_matrix(
    nodes: NodeSet,
    indices: MultiIndexSet,
    basis: BasisTag,
    normalized: bool = False,
) -> DesignMatrix:
    """
    Assemble the design matrix [basis_k(x)]_{x in nodes, k in indices}.

    Args:
        nodes: Node set, rows in draw order
        indices: Index set, columns in lexicographic order
        basis: Basis tag
        normalized: Scale entries by (#nodes)^{-1/2}

    Returns:
        DesignMatrix: Dense matrix of shape (#nodes, m)
    """
    if nodes.d != indices.d:
        raise DomainError(f"node dimension {nodes.d} differs from index dimension {indices.d}")

    entries = evaluate_basis(basis, indices, nodes.points)
    if normalized:
        entries /= math.sqrt(nodes.count)
    logger.debug("design matrix %dx%d (%s, normalized=%s)", nodes.count, indices.m, basis, normalized)
    return DesignMatrix(entries=entries, basis=basis, normalized=normalized, indices=indices)
