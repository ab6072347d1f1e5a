"""
Frame schemas

Design matrices, frame bounds and the outcome of constructive subsampling.
"""
from typing import List, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.schemas.base import ArraySchema, BaseSchema, BasisTag, Measure
from app.schemas.index_set import MultiIndexSet


class DesignMatrix(ArraySchema):
    """Entry (i, j) is basis_{k_j}(x^i), scaled by rows^{-1/2} when normalized"""

    entries: np.ndarray
    basis: BasisTag
    normalized: bool
    indices: MultiIndexSet

    @field_validator("entries", mode="before")
    @classmethod
    def coerce_entries(cls, v):
        # takes ownership of float64 arrays instead of copying them
        array = np.asarray(v, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError("entries must be a two-dimensional array")
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_columns(self):
        if self.entries.shape[1] != self.indices.m:
            raise ValueError("column count must equal the cardinality of the index set")
        return self

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def unnormalized(self) -> np.ndarray:
        if self.normalized:
            return self.entries * np.sqrt(self.rows)
        return np.asarray(self.entries)

    def normalized_entries(self) -> np.ndarray:
        if self.normalized:
            return np.asarray(self.entries)
        return self.entries / np.sqrt(self.rows)


class FrameBounds(ArraySchema):
    """Extreme singular values of a normalized design matrix"""

    a_min: float = Field(..., ge=0.0)
    b_max: float = Field(..., ge=0.0)

    @model_validator(mode="after")
    def check_order(self):
        if self.a_min > self.b_max * (1.0 + 1e-12):
            raise ValueError("a_min must not exceed b_max")
        return self


class SubsampleResult(ArraySchema):
    """Selected rows J of a frame and the verified lower-bound margin"""

    indices: np.ndarray
    b: float
    m: int = Field(..., ge=1)
    M: int = Field(..., ge=1)
    guarantee_constant: float
    margin: float
    tolerance: float = Field(..., ge=0.0)
    barrier: float
    shift_reductions: int = 0
    selection: str = "first"

    @field_validator("indices", mode="before")
    @classmethod
    def coerce_indices(cls, v):
        array = np.array(v, dtype=np.int64).reshape(-1)
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_indices(self):
        if len(np.unique(self.indices)) != len(self.indices):
            raise ValueError("selected indices must be distinct")
        if np.any(self.indices < 0) or np.any(self.indices >= self.M):
            raise ValueError("selected indices out of range")
        return self

    @property
    def n(self) -> int:
        return int(len(self.indices))

    @property
    def satisfied(self) -> bool:
        return self.margin >= -self.tolerance


class SubsampleRequest(BaseSchema):
    """Schema for subsampling a posted node set"""

    points: List[List[float]]
    measure: Measure = Measure.CHEBYSHEV
    seed: int = 0
    radius: int = Field(..., ge=1)
    basis: BasisTag = BasisTag.CHEBYSHEV
    b: float = Field(1.1, gt=1.0)


class SubsampleSummary(BaseSchema):
    """Schema for subsampling responses and metadata records"""

    m: int
    M: int
    n: int
    b: float
    guarantee_constant: float
    margin: float
    a_min_before: float
    b_max_before: float
    a_min_after: float
    b_max_after: float
    indices: Optional[List[int]] = None
