"""
Reference Problems Service

The tensor-product test function f(x) = prod_l B_2(x_l), where B_2 is a cutout
of a piecewise quadratic B-spline,

    B_2(x) = -x^2/4 - x/2 + 1/2    on [-1, 0]
    B_2(x) =  x^2/8 - x/2 + 1/2    on (0, 1],

its exact expansion coefficients in the Chebyshev and half-period cosine bases,
the cosine periodization and the quadrature rules used to cross-check them.
"""
import logging
import math
from typing import Callable, Dict, Mapping, Protocol, Sequence, Tuple

import numpy as np

from app.exceptions import DomainError, ParameterError
from app.logconf import DEFAULT_LOGGER
from app.schemas.base import BasisTag
from app.schemas.index_set import MultiIndex, MultiIndexSet, as_multi_index
from app.services.bases import univariate_table

logger = logging.getLogger(DEFAULT_LOGGER)

SQRT2 = math.sqrt(2.0)

# B_2 tail amplitude in the Chebyshev series
CHEB_TAIL = 3.0 / (2.0 * math.pi * SQRT2)
# Bound on |k^2 c_k| for the half-period cosine series
HPC_TAIL = 6.0 / math.pi**3 + 1.0 / math.pi**2

MIN_TAIL_CUTOFF = 8

VectorFunction = Callable[[np.ndarray], np.ndarray]


def bspline_b2(x):
    """
    Evaluate B_2 at x (scalar or array) in [-1, 1].

    x = 0 belongs to the left piece; both pieces give 1/2 there.
    """
    values = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(values)) or np.any(np.abs(values) > 1.0):
        raise DomainError("B_2 is defined on [-1, 1] only")
    left = -values**2 / 4.0 - values / 2.0 + 0.5
    right = values**2 / 8.0 - values / 2.0 + 0.5
    result = np.where(values <= 0.0, left, right)
    return float(result) if result.ndim == 0 else result


def test_function(x):
    """
    f(x) = prod_l B_2(x_l).

    Accepts a single point of shape (d,) or a batch of shape (N, d).
    """
    points = np.asarray(x, dtype=np.float64)
    values = np.prod(bspline_b2(points), axis=-1)
    return float(values) if np.ndim(values) == 0 else values


# not a pytest test when imported into test modules
test_function.__test__ = False


def _sin_half_pi(k: np.ndarray) -> np.ndarray:
    return np.array([0.0, 1.0, 0.0, -1.0])[np.asarray(k) % 4]


def b2_cheb_coeffs(kmax: int) -> np.ndarray:
    """Chebyshev coefficients of B_2 for degrees 0..kmax"""
    if kmax < 0:
        raise DomainError(f"degree must be nonnegative, got {kmax}")
    coeffs = np.zeros(kmax + 1)
    head = [15.0 / 32.0, -(math.pi - 1.0) / (2.0 * math.pi * SQRT2), -1.0 / (32.0 * SQRT2)]
    coeffs[: min(3, kmax + 1)] = head[: kmax + 1]
    if kmax >= 3:
        k = np.arange(3, kmax + 1, dtype=np.int64)
        kf = k.astype(np.float64)
        coeffs[3:] = -CHEB_TAIL * _sin_half_pi(k) / (kf * (kf * kf - 4.0))
    return coeffs


def b2_hpc_coeffs(kmax: int) -> np.ndarray:
    """Half-period cosine coefficients of B_2 for degrees 0..kmax"""
    if kmax < 0:
        raise DomainError(f"degree must be nonnegative, got {kmax}")
    coeffs = np.zeros(kmax + 1)
    coeffs[0] = 23.0 / (24.0 * SQRT2)
    if kmax >= 1:
        k = np.arange(1, kmax + 1, dtype=np.int64)
        kf = k.astype(np.float64)
        alternating = np.where(k % 2 == 0, 1.0, -1.0)
        coeffs[1:] = 6.0 * _sin_half_pi(k) / (math.pi**3 * kf**3) - alternating / (math.pi**2 * kf**2)
    return coeffs


def b2_cheb_coeff(k: int) -> float:
    """Coefficient of T_k in the expansion of B_2"""
    return float(b2_cheb_coeffs(int(k))[-1])


def b2_hpc_coeff(k: int) -> float:
    """Coefficient of V_k in the expansion of B_2"""
    return float(b2_hpc_coeffs(int(k))[-1])


_COEFFS = {
    BasisTag.CHEBYSHEV: b2_cheb_coeffs,
    BasisTag.HALF_PERIOD_COSINE: b2_hpc_coeffs,
}


def tensor_coeff(k: Sequence[int], basis: BasisTag) -> float:
    """Coefficient of the tensor basis function k in the expansion of f"""
    index = as_multi_index(k)
    table = _COEFFS[BasisTag(basis)](max(index))
    return float(np.prod(table[list(index)]))


def tail_remainder(basis: BasisTag, cutoff: int) -> float:
    """
    Upper bound on sum_{k > cutoff} c_k^2 for the univariate B_2 series.

    Chebyshev coefficients vanish for even k >= 4 and decay like k^{-3}; the
    half-period cosine coefficients decay like k^{-2}.
    """
    if cutoff < MIN_TAIL_CUTOFF:
        raise ParameterError(f"tail cutoff must be at least {MIN_TAIL_CUTOFF}, got {cutoff}")
    K = float(cutoff)
    if BasisTag(basis) == BasisTag.CHEBYSHEV:
        return CHEB_TAIL**2 / (5.0 * K**5 * (1.0 - 4.0 / K**2) ** 2)
    return HPC_TAIL**2 / (3.0 * K**3)


def periodize_cos(f: VectorFunction) -> VectorFunction:
    """Return g with g(x) = f(cos(pi x_1), ..., cos(pi x_d))"""

    def periodized(x):
        return f(np.cos(np.pi * np.asarray(x, dtype=np.float64)))

    return periodized


def _tensor_grid(nodes: np.ndarray, d: int) -> np.ndarray:
    mesh = np.meshgrid(*([nodes] * d), indexing="ij")
    return np.stack([axis.reshape(-1) for axis in mesh], axis=-1)


def fourier_coeff(g: VectorFunction, k: Sequence[int], grid: int) -> complex:
    """
    2^{-d} int_{[-1,1]^d} g(x) exp(-pi i k.x) dx by the equispaced trapezoid rule.

    Args:
        g: 2-periodic function mapping (N, d) arrays to (N,) arrays
        k: Integer frequency vector, entries may be negative
        grid: Points per dimension, at least 4 max|k_l| + 4

    Returns:
        complex: The Fourier coefficient
    """
    frequency = np.array([int(entry) for entry in k], dtype=np.int64)
    if frequency.size == 0:
        raise DomainError("frequency must have at least one component")
    required = 4 * int(np.abs(frequency).max()) + 4
    if grid < required:
        raise ParameterError(f"grid of {grid} points per dimension is too coarse, need {required}")

    nodes = -1.0 + 2.0 * np.arange(grid) / grid
    points = _tensor_grid(nodes, frequency.size)
    phase = np.exp(-1j * np.pi * (points @ frequency))
    return complex(np.mean(np.asarray(g(points)) * phase))


def gauss_chebyshev(count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes cos((2i+1) pi / (2N)) and equal weights 1/N for the normalized arcsine measure"""
    nodes = np.cos((2.0 * np.arange(count) + 1.0) * np.pi / (2.0 * count))
    return nodes, np.full(count, 1.0 / count)


def chebyshev_inner_product(f: VectorFunction, k: Sequence[int], nodes: int = 4096) -> float:
    """<f, eta_k> in L2(rho) by tensor Gauss-Chebyshev quadrature"""
    index = as_multi_index(k)
    points_1d, weights_1d = gauss_chebyshev(nodes)
    d = len(index)
    points = _tensor_grid(points_1d, d)
    weights = np.prod(_tensor_grid(weights_1d, d), axis=-1)
    basis = np.ones(points.shape[0])
    for axis, degree in enumerate(index):
        basis *= univariate_table(BasisTag.CHEBYSHEV, degree, points[:, axis])[:, degree]
    return float(np.sum(weights * np.asarray(f(points)) * basis))


def _gauss_legendre_halves(count: int) -> Tuple[np.ndarray, np.ndarray]:
    # composite rule on [-1, 0] and [0, 1]; B_2 is polynomial on each half
    nodes, weights = np.polynomial.legendre.leggauss(count)
    left, right = (nodes - 1.0) / 2.0, (nodes + 1.0) / 2.0
    return np.concatenate([left, right]), np.concatenate([weights, weights]) / 2.0


def lebesgue_inner_product_1d(f: Callable, k: int, nodes: int = 200) -> float:
    """int_{-1}^{1} f(x) V_k(x) dx by composite Gauss-Legendre quadrature"""
    points, weights = _gauss_legendre_halves(nodes)
    basis = univariate_table(BasisTag.HALF_PERIOD_COSINE, int(k), points)[:, int(k)]
    return float(np.sum(weights * np.asarray(f(points)) * basis))


def b2_norm_squared(basis: BasisTag) -> float:
    """
    Squared L2 norm of B_2 in the measure the basis is orthonormal against.

    Chebyshev: (1/pi) int_0^pi B_2(cos t)^2 dt, split at t = pi/2 where the
    spline changes piece. Half-period cosine: int_{-1}^{1} B_2(x)^2 dx.
    """
    if BasisTag(basis) == BasisTag.CHEBYSHEV:
        nodes, weights = np.polynomial.legendre.leggauss(64)
        quarter = math.pi / 4.0
        total = 0.0
        for center in (quarter, 3.0 * quarter):
            angles = center + quarter * nodes
            total += quarter * np.sum(weights * bspline_b2(np.cos(angles)) ** 2)
        return float(total / math.pi)
    points, weights = _gauss_legendre_halves(8)
    return float(np.sum(weights * bspline_b2(points) ** 2))


class CoefficientOracle(Protocol):
    """Exact expansion coefficients of a function in an orthonormal tensor basis"""

    basis: BasisTag
    d: int

    def coefficient(self, k: Sequence[int]) -> float: ...

    def coefficients(self, indices: MultiIndexSet) -> np.ndarray: ...

    def norm_squared(self, cutoff: int) -> float: ...

    def remainder_bound(self, cutoff: int) -> float: ...


class B2TensorOracle:
    """Coefficients of f = B_2 tensor ... tensor B_2 in d variables"""

    def __init__(self, basis: BasisTag, d: int):
        if d < 1:
            raise DomainError(f"dimension must be at least 1, got {d}")
        self.basis = BasisTag(basis)
        self.d = d
        self._series: Dict[int, float] = {}

    def coefficient(self, k: Sequence[int]) -> float:
        return tensor_coeff(as_multi_index(k, self.d), self.basis)

    def coefficients(self, indices: MultiIndexSet) -> np.ndarray:
        if indices.d != self.d:
            raise DomainError(f"index set has dimension {indices.d}, oracle has {self.d}")
        table = _COEFFS[self.basis](int(indices.indices.max(initial=0)))
        return np.prod(table[indices.indices], axis=1)

    def _univariate_norm(self, cutoff: int) -> float:
        if cutoff not in self._series:
            self._series[cutoff] = float(np.sum(_COEFFS[self.basis](cutoff) ** 2))
        return self._series[cutoff]

    def norm_squared(self, cutoff: int) -> float:
        """Tensorized truncated Parseval sum (sum_{k <= cutoff} c_k^2)^d"""
        tail_remainder(self.basis, cutoff)
        return self._univariate_norm(cutoff) ** self.d

    def remainder_bound(self, cutoff: int) -> float:
        """Bound on the squared norm missed by norm_squared"""
        s = self._univariate_norm(cutoff)
        return (s + tail_remainder(self.basis, cutoff)) ** self.d - s**self.d


class ExpansionOracle:
    """Coefficients of a finite expansion sum_k a_k basis_k"""

    def __init__(self, basis: BasisTag, d: int, terms: Mapping[Sequence[int], float]):
        self.basis = BasisTag(basis)
        self.d = d
        self.terms: Dict[MultiIndex, float] = {
            as_multi_index(k, d): float(value) for k, value in terms.items()
        }

    def coefficient(self, k: Sequence[int]) -> float:
        return self.terms.get(as_multi_index(k, self.d), 0.0)

    def coefficients(self, indices: MultiIndexSet) -> np.ndarray:
        return np.array([self.terms.get(k, 0.0) for k in indices.as_tuples()])

    def norm_squared(self, cutoff: int) -> float:
        return float(sum(value**2 for value in self.terms.values()))

    def remainder_bound(self, cutoff: int) -> float:
        return 0.0

    def __call__(self, x) -> np.ndarray:
        """Evaluate the expansion at a batch of points of shape (N, d)"""
        points = np.atleast_2d(np.asarray(x, dtype=np.float64))
        values = np.zeros(points.shape[0])
        for k, value in self.terms.items():
            term = np.full(points.shape[0], value)
            for axis, degree in enumerate(k):
                term *= univariate_table(self.basis, degree, points[:, axis])[:, degree]
            values += term
        return values
