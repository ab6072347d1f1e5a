"""
Subsampling Service

Constructive selection of n = ceil(b m) out of M frame vectors u_1..u_M in R^m
such that, in the positive semidefinite order,

    (1/M) sum_{i <= M} u_i u_i^T  <=  C(b) / m * sum_{j in J} u_j u_j^T,
    C(b) = 89 (b + 1)^2 / (b - 1)^3,

plus the frame bounds of design matrices before and after selection.

The selection is a one-sided barrier greedy. Vectors are whitened first,
v_i = L^{-1} u_i with sum_i u_i u_i^T = L L^T, so that sum_i v_i v_i^T = I.
Starting from A = 0 and barrier l_0 = -m / eps, every step shifts the barrier
by delta and adds one vector v with

    v^T (A - l'I)^{-2} v / (Phi_l'(A) - Phi_l(A)) - v^T (A - l'I)^{-1} v >= 1,

where Phi_l(A) = tr (A - lI)^{-1} and l' = l + delta. This keeps
lambda_min(A) > l and Phi_l(A) <= eps, so the final barrier certifies
sum_J u_j u_j^T >= l_n sum_i u_i u_i^T.
"""
import logging
import math
import time
from typing import Optional, Tuple, Union

import numpy as np
from scipy import linalg

from app.config import settings
from app.exceptions import DomainError, GuaranteeError, ParameterError, SingularityError
from app.logconf import DEFAULT_LOGGER
from app.schemas.base import BasisTag
from app.schemas.experiment import selection_budget
from app.schemas.frames import DesignMatrix, FrameBounds, SubsampleResult, SubsampleSummary
from app.schemas.index_set import MultiIndexSet
from app.schemas.nodes import NodeSet
from app.services.bases import design_matrix

logger = logging.getLogger(DEFAULT_LOGGER)

SELECTION_RULES = ("first", "best")


def guarantee_constant(b: float) -> float:
    """C(b) = 89 (b + 1)^2 / (b - 1)^3"""
    if b <= 1.0:
        raise ParameterError(f"oversampling factor must exceed 1, got {b}")
    return 89.0 * (b + 1.0) ** 2 / (b - 1.0) ** 3


def frame_bounds(matrix: DesignMatrix, gram: Optional[np.ndarray] = None) -> FrameBounds:
    """
    Extreme singular values of the normalized design matrix.

    Args:
        matrix: Design matrix, normalized or not
        gram: Precomputed unnormalized Gram matrix U^T U, if available

    Returns:
        FrameBounds: a_min and b_max of (#rows)^{-1/2} U
    """
    if matrix.rows == 0 or matrix.cols == 0:
        raise ParameterError("frame bounds of an empty matrix are undefined")

    if gram is not None:
        eigenvalues = linalg.eigvalsh(np.asarray(gram) / matrix.rows)
        a_min = math.sqrt(max(eigenvalues[0], 0.0))
        b_max = math.sqrt(max(eigenvalues[-1], 0.0))
    else:
        singular_values = linalg.svdvals(matrix.normalized_entries())
        b_max = float(singular_values[0])
        # fewer rows than columns leaves a nontrivial kernel
        a_min = float(singular_values[-1]) if matrix.rows >= matrix.cols else 0.0
    return FrameBounds(a_min=a_min, b_max=b_max)


def _frame_vectors(vectors: Union[DesignMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(vectors, DesignMatrix):
        return vectors.unnormalized()
    array = np.asarray(vectors, dtype=np.float64)
    if array.ndim != 2 or array.shape[0] == 0 or array.shape[1] == 0:
        raise ParameterError("frame vectors must form a nonempty two-dimensional array")
    return array


def _whiten(rows: np.ndarray, gram: np.ndarray) -> np.ndarray:
    m = rows.shape[1]
    eigenvalues = linalg.eigvalsh(gram)
    threshold = max(eigenvalues[-1], np.finfo(np.float64).tiny) * m * np.finfo(np.float64).eps
    rank = int(np.count_nonzero(eigenvalues > threshold))
    if rank < m:
        raise SingularityError(
            f"frame vectors span only {rank} of {m} dimensions (rank deficiency {m - rank})",
            smallest=float(eigenvalues[0]),
            rank=rank,
        )
    factor = linalg.cholesky(gram, lower=True)
    return np.ascontiguousarray(linalg.solve_triangular(factor, rows.T, lower=True).T)


def _guarantee_margin(
    rows: np.ndarray,
    selected: np.ndarray,
    constant: float,
    gram: np.ndarray,
) -> Tuple[float, float]:
    M, m = rows.shape
    subset = rows[selected]
    difference = (constant / m) * (subset.T @ subset) - gram / M
    margin = linalg.eigvalsh(difference, subset_by_index=[0, 0])[0]
    b_max_squared = linalg.eigvalsh(gram / M, subset_by_index=[m - 1, m - 1])[0]
    return float(margin), float(settings.GUARANTEE_TOLERANCE * b_max_squared)


class BarrierSubsampler:
    """Lower-barrier greedy selection on whitened frame vectors"""

    def __init__(
        self,
        b: float,
        selection: Optional[str] = None,
        block: Optional[int] = None,
        max_reductions: int = 200,
    ):
        """
        Args:
            b: Oversampling factor, greater than 1
            selection: "first" takes the smallest admissible index, "best" the
                admissible index with the largest barrier quantity
            block: Number of candidates scored per matrix product
            max_reductions: Shift halvings allowed per step
        """
        if b <= 1.0:
            raise ParameterError(f"oversampling factor must exceed 1, got {b}")
        self.b = b
        self.selection = selection or settings.SUBSAMPLE_SELECTION
        if self.selection not in SELECTION_RULES:
            raise ParameterError(f"unknown selection rule {self.selection!r}")
        self.block = block or settings.SUBSAMPLE_BLOCK
        self.max_reductions = max_reductions

    def _resolvent(self, frame: np.ndarray, target: float) -> Optional[np.ndarray]:
        """Lower factor K with (A - l'I)^{-1} = K^T K, or None unless lambda_min(A) > l'"""
        try:
            factor = linalg.cholesky(frame - target * np.eye(frame.shape[0]), lower=True)
        except linalg.LinAlgError:
            return None
        inverse, info = linalg.lapack.dtrtri(factor, lower=1)
        if info != 0:
            return None
        return inverse

    def _pick(
        self,
        whitened: np.ndarray,
        inverse: np.ndarray,
        gap: float,
        available: np.ndarray,
    ) -> Tuple[Optional[int], float, float]:
        candidates = np.flatnonzero(available)
        best, best_score, best_moments = None, -np.inf, (0.0, 0.0)
        for start in range(0, len(candidates), self.block):
            chunk = candidates[start:start + self.block]
            solved = inverse @ whitened[chunk].T
            first_moment = np.einsum("ij,ij->j", solved, solved)
            resolvent = inverse.T @ solved
            second_moment = np.einsum("ij,ij->j", resolvent, resolvent)
            scores = second_moment / gap - first_moment

            admissible = np.flatnonzero(scores >= 1.0)
            if admissible.size == 0:
                continue
            if self.selection == "first":
                j = admissible[0]
                return int(chunk[j]), float(first_moment[j]), float(second_moment[j])
            j = admissible[np.argmax(scores[admissible])]
            if scores[j] > best_score:
                best, best_score = int(chunk[j]), float(scores[j])
                best_moments = (float(first_moment[j]), float(second_moment[j]))
        return best, best_moments[0], best_moments[1]

    def select(self, whitened: np.ndarray, n_target: int) -> Tuple[np.ndarray, float, int]:
        """
        Run the barrier greedy on vectors with sum_i v_i v_i^T = I.

        The potential Phi_l(A) is carried across steps with the rank-one
        update Phi_l'(A + vv^T) = Phi_l'(A) - v^T X^2 v / (1 + v^T X v),
        X = (A - l'I)^{-1}, so every step costs one Cholesky factorization
        and one triangular inverse per tried shift.

        Args:
            whitened: Array of shape (M, m)
            n_target: Number of vectors to select

        Returns:
            Tuple of the sorted selected indices, the final barrier and the
            number of shift halvings
        """
        M, m = whitened.shape
        sqrt_b = math.sqrt(self.b)
        epsilon = M / (sqrt_b - 1.0)
        barrier = -m / epsilon
        base_shift = 1.0 / (M + epsilon)

        frame = np.zeros((m, m))
        # Phi_{l_0}(0) = m / |l_0|
        potential = epsilon
        available = np.ones(M, dtype=bool)
        selected = []
        reductions = 0

        for step in range(min(n_target, M)):
            shift = base_shift
            halvings = 0
            while True:
                inverse = self._resolvent(frame, barrier + shift)
                if inverse is not None:
                    shifted_potential = float(np.einsum("ij,ij->", inverse, inverse))
                    gap = shifted_potential - potential
                    if gap > 0.0:
                        choice, first_moment, second_moment = self._pick(whitened, inverse, gap, available)
                        if choice is not None:
                            break
                if halvings == self.max_reductions:
                    smallest = linalg.eigvalsh(frame, subset_by_index=[0, 0])[0]
                    raise SingularityError(
                        f"no admissible frame vector at step {step}",
                        smallest=float(smallest - barrier),
                    )
                shift /= 2.0
                halvings += 1
            if halvings:
                logger.warning("step %d: barrier shift halved %d times", step, halvings)
                reductions += halvings

            vector = whitened[choice]
            frame += np.outer(vector, vector)
            available[choice] = False
            selected.append(choice)
            barrier += shift
            potential = shifted_potential - second_moment / (1.0 + first_moment)
            logger.debug("step %d: selected %d, barrier %.6g", step, choice, barrier)

        return np.sort(np.array(selected, dtype=np.int64)), barrier, reductions


def bss_subsample(
    vectors: Union[DesignMatrix, np.ndarray],
    b: float,
    selection: Optional[str] = None,
    block: Optional[int] = None,
    gram: Optional[np.ndarray] = None,
) -> SubsampleResult:
    """
    Select ceil(b m) rows of an unnormalized frame preserving the lower bound.

    Args:
        vectors: M x m frame vectors (rows of an unnormalized design matrix)
        b: Oversampling factor, greater than 1 + 1/m
        selection: Selection rule, "first" or "best"
        block: Candidate block size for the scan
        gram: Precomputed U^T U

    Returns:
        SubsampleResult: Sorted row indices with the verified margin
    """
    rows = _frame_vectors(vectors)
    M, m = rows.shape
    if b <= 1.0 + 1.0 / m:
        raise ParameterError(f"oversampling factor must exceed 1 + 1/m = {1.0 + 1.0 / m:.6g}, got {b}")
    n_target = selection_budget(b, m)
    if M < n_target:
        raise ParameterError(f"need at least ceil(b m) = {n_target} vectors, got M = {M}")

    started = time.perf_counter()
    gram = rows.T @ rows if gram is None else np.asarray(gram)
    whitened = _whiten(rows, gram)
    subsampler = BarrierSubsampler(b, selection=selection, block=block)
    if n_target == M:
        # whitened frame operator of the full set is the identity
        selected, barrier, reductions = np.arange(M, dtype=np.int64), 1.0, 0
    else:
        selected, barrier, reductions = subsampler.select(whitened, n_target)
    del whitened

    constant = guarantee_constant(b)
    margin, tolerance = _guarantee_margin(rows, selected, constant, gram)
    result = SubsampleResult(
        indices=selected,
        b=b,
        m=m,
        M=M,
        guarantee_constant=constant,
        margin=margin,
        tolerance=tolerance,
        barrier=barrier,
        shift_reductions=reductions,
        selection=subsampler.selection,
    )
    logger.info(
        "subsampled %d of %d vectors (m=%d, b=%g) in %.2fs, margin %.3e",
        result.n, M, m, b, time.perf_counter() - started, margin,
    )
    if not result.satisfied:
        logger.error("lower frame bound guarantee violated: margin %.3e < -%.3e", margin, tolerance)
    return result


def verify_guarantee(full: DesignMatrix, result: SubsampleResult) -> float:
    """
    Smallest eigenvalue of C/m G_J - 1/M G_M for unnormalized Gram matrices.

    Nonnegative up to result.tolerance exactly when the subsample keeps the
    lower frame bound with constant result.guarantee_constant.
    """
    rows = full.unnormalized()
    if full.cols != result.m:
        raise DomainError(f"subsample was computed for m={result.m}, matrix has {full.cols} columns")
    if result.n and (result.indices.min() < 0 or result.indices.max() >= full.rows):
        raise DomainError(f"selected indices exceed the {full.rows} rows of the frame")
    margin, _ = _guarantee_margin(rows, result.indices, result.guarantee_constant, rows.T @ rows)
    return margin


def require_guarantee(result: SubsampleResult) -> SubsampleResult:
    """Raise GuaranteeError unless the margin is within tolerance"""
    if not result.satisfied:
        raise GuaranteeError(
            f"subsample of n={result.n} violates the lower frame bound: "
            f"margin {result.margin:.3e} below -{result.tolerance:.3e}",
            margin=result.margin,
            tolerance=result.tolerance,
        )
    return result


def subsample_nodes(
    nodes: NodeSet,
    indices: MultiIndexSet,
    basis: BasisTag,
    b: float,
    selection: Optional[str] = None,
) -> Tuple[NodeSet, SubsampleResult, SubsampleSummary]:
    """
    Subsample a node set for an index set and report frame bounds before and after.

    Args:
        nodes: Node set to subsample
        indices: Index set spanning the recovery space
        basis: Basis tag
        b: Oversampling factor
        selection: Selection rule

    Returns:
        Tuple of the selected node set, the subsample result and a summary
    """
    full = design_matrix(nodes, indices, basis, normalized=False)
    gram = full.entries.T @ full.entries
    before = frame_bounds(full, gram=gram)
    result = bss_subsample(full, b, selection=selection, gram=gram)

    selected = nodes.restrict(result.indices)
    after = frame_bounds(design_matrix(selected, indices, basis, normalized=True))
    summary = SubsampleSummary(
        m=indices.m,
        M=nodes.count,
        n=result.n,
        b=b,
        guarantee_constant=result.guarantee_constant,
        margin=result.margin,
        a_min_before=before.a_min,
        b_max_before=before.b_max,
        a_min_after=after.a_min,
        b_max_after=after.b_max,
        indices=result.indices.tolist(),
    )
    logger.info(
        "frame bounds (%.3f, %.3f) -> (%.3f, %.3f)",
        before.a_min, before.b_max, after.a_min, after.b_max,
    )
    return selected, result, summary
