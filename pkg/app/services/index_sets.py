"""
Index Set Service.

Enumeration of hyperbolic cross frequency sets

    Lambda_{d,R} = {k in N_0^d : prod_l max(1, k_l) <= R}

by recursive descent over the coordinates. The remaining budget is carried as
an integer (R // max(1, k_l)), so the product condition is tested exactly.
"""
import logging
from typing import Iterator, List, Tuple

import numpy as np

from app.exceptions import DomainError
from app.logconf import DEFAULT_LOGGER
from app.schemas.index_set import MultiIndexSet

logger = logging.getLogger(DEFAULT_LOGGER)


def _descend(d: int, budget: int) -> Iterator[Tuple[int, ...]]:
    if d == 0:
        yield ()
        return
    for k in range(budget + 1):
        # prod max(1, k_l) <= budget  <=>  prod of the rest <= budget // max(1, k)
        for tail in _descend(d - 1, budget // max(1, k)):
            yield (k,) + tail


def enumerate_hyperbolic_cross(d: int, R: int) -> MultiIndexSet:
    """
    Enumerate the hyperbolic cross Lambda_{d,R} in lexicographic order.

    Args:
        d: Dimension, at least 1
        R: Radius, at least 1

    Returns:
        MultiIndexSet with m = #Lambda_{d,R}
    """
    if d < 1:
        raise DomainError(f"dimension must be at least 1, got {d}")
    if R < 1:
        raise DomainError(f"radius must be at least 1, got {R}")

    rows: List[Tuple[int, ...]] = list(_descend(d, R))
    indices = np.array(rows, dtype=np.int64).reshape(len(rows), d)
    logger.debug("hyperbolic cross d=%d R=%d has m=%d", d, R, len(rows))
    return MultiIndexSet(d=d, R=R, indices=indices, m=len(rows))


def hyperbolic_cross_size(d: int, R: int) -> int:
    """Cardinality of Lambda_{d,R} without materializing the indices"""
    if d < 1 or R < 1:
        raise DomainError(f"dimension and radius must be at least 1, got d={d}, R={R}")
    stack = [(d, R)]
    count = 0
    while stack:
        remaining, budget = stack.pop()
        if remaining == 0:
            count += 1
            continue
        for k in range(budget + 1):
            stack.append((remaining - 1, budget // max(1, k)))
    return count


def is_downward_closed(index_set: MultiIndexSet) -> bool:
    """Whether k in the set implies every componentwise smaller k' is too"""
    members = set(index_set.as_tuples())
    for k in members:
        for j, entry in enumerate(k):
            if entry > 0 and k[:j] + (entry - 1,) + k[j + 1:] not in members:
                return False
    return True
