"""
Sampling Service

Seeded random node sets on [-1, 1]^d and the oversampled node budget.

Chebyshev nodes are produced by pushing uniform draws through cos(pi * U), so
both measures share one generator path and one seed convention.
"""
import logging
import math
from typing import List, Optional

import numpy as np

from app.config import settings
from app.exceptions import DomainError, ParameterError
from app.logconf import DEFAULT_LOGGER
from app.schemas.base import Measure
from app.schemas.nodes import SEED_LIMIT, NodeSet

logger = logging.getLogger(DEFAULT_LOGGER)


def oversampled_budget(m: int, factor: Optional[float] = None) -> int:
    """
    Node budget M = ceil(4 m ln m) for an index set of size m.

    Args:
        m: Cardinality of the index set, at least 2
        factor: Leading constant, defaults to settings.BUDGET_FACTOR

    Returns:
        int: Number of random nodes to draw
    """
    if m < 2:
        raise DomainError(f"budget needs m >= 2 (log m must be positive), got {m}")
    factor = settings.BUDGET_FACTOR if factor is None else factor
    return int(math.ceil(factor * m * math.log(m)))


def make_rng(seed: int) -> np.random.Generator:
    """Generator for a 64-bit seed"""
    if not 0 <= int(seed) < SEED_LIMIT:
        raise ParameterError(f"seed must lie in [0, 2**64), got {seed}")
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def _check_shape(d: int, M: int):
    if d < 1:
        raise ParameterError(f"dimension must be at least 1, got {d}")
    if M < 1:
        raise ParameterError(f"node count must be at least 1, got {M}")


def uniform_draws(d: int, M: int, seed: int) -> np.ndarray:
    """M x d array of i.i.d. uniform draws on [-1, 1]"""
    _check_shape(d, M)
    return make_rng(seed).uniform(-1.0, 1.0, size=(M, d))


def push_forward(uniform: np.ndarray) -> np.ndarray:
    """Map uniform draws on [-1, 1] to the Chebyshev (arcsine) measure"""
    return np.cos(np.pi * np.asarray(uniform, dtype=np.float64))


def draw_uniform(d: int, M: int, seed: int) -> NodeSet:
    """M i.i.d. uniform points on [-1, 1]^d"""
    points = uniform_draws(d, M, seed)
    return NodeSet(d=d, points=points, measure=Measure.UNIFORM, seed=seed)


def draw_chebyshev(d: int, M: int, seed: int) -> NodeSet:
    """M i.i.d. points from the product Chebyshev measure"""
    points = push_forward(uniform_draws(d, M, seed))
    return NodeSet(d=d, points=points, measure=Measure.CHEBYSHEV, seed=seed)


def draw_nodes(measure: Measure, d: int, M: int, seed: int) -> NodeSet:
    """Dispatch on the measure tag"""
    measure = Measure(measure)
    logger.debug("drawing %d %s nodes in d=%d (seed=%d)", M, measure.value, d, seed)
    if measure == Measure.CHEBYSHEV:
        return draw_chebyshev(d, M, seed)
    return draw_uniform(d, M, seed)


def substreams(seed: int, count: int) -> List[np.random.Generator]:
    """Independent generators for chunked Monte Carlo work"""
    if not 0 <= int(seed) < SEED_LIMIT:
        raise ParameterError(f"seed must lie in [0, 2**64), got {seed}")
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [np.random.default_rng(child) for child in children]


def cell_seed(seed: int, *key: int) -> int:
    """Deterministic 64-bit seed for one cell of an experiment grid"""
    state = np.random.SeedSequence([int(seed), *(int(k) for k in key)]).generate_state(1, np.uint64)
    return int(state[0])
