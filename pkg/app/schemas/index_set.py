"""
Index set schemas

Frequency multi-indices and hyperbolic cross index sets.
"""
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.exceptions import DomainError
from app.schemas.base import ArraySchema, BaseSchema

MultiIndex = Tuple[int, ...]


def as_multi_index(k: Sequence[int], d: Optional[int] = None) -> MultiIndex:
    """Validate a frequency multi-index and return it as a tuple"""
    index = tuple(int(entry) for entry in k)
    if len(index) == 0:
        raise DomainError("multi-index must have at least one component")
    if any(entry < 0 for entry in index):
        raise DomainError(f"multi-index {index} has negative components")
    if d is not None and len(index) != d:
        raise DomainError(f"multi-index {index} has length {len(index)}, expected {d}")
    return index


class MultiIndexSet(ArraySchema):
    """Hyperbolic cross {k in N_0^d : prod max(1, k_l) <= R} in lexicographic order"""

    d: int = Field(..., ge=1)
    R: int = Field(..., ge=1)
    indices: np.ndarray
    m: int

    @field_validator("indices", mode="before")
    @classmethod
    def coerce_indices(cls, v):
        array = np.array(v, dtype=np.int64)
        if array.ndim != 2:
            raise ValueError("indices must be a two-dimensional array")
        if np.any(array < 0):
            raise ValueError("indices must be nonnegative")
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_shape(self):
        if self.indices.shape != (self.m, self.d):
            raise ValueError(f"indices of shape {self.indices.shape} do not match m={self.m}, d={self.d}")
        return self

    def __len__(self) -> int:
        return self.m

    def as_tuples(self) -> List[MultiIndex]:
        return [tuple(int(k) for k in row) for row in self.indices]

    def positions(self) -> Dict[MultiIndex, int]:
        """Map each multi-index to its column in design matrices"""
        return {k: j for j, k in enumerate(self.as_tuples())}


class IndexSetResponse(BaseSchema):
    """Schema for hyperbolic cross responses"""

    d: int
    R: int
    m: int
    indices: Optional[List[List[int]]] = None


class BudgetResponse(BaseSchema):
    """Schema for the oversampled node budget"""

    m: int
    M: int
