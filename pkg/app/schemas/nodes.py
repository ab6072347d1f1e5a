"""
Node set schemas

Sample points in [-1, 1]^d together with their measure, seed and, for
subsampled sets, the parent set and selected row indices.
"""
from typing import List, Optional, Sequence

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.schemas.base import ArraySchema, BaseSchema, Measure

SEED_LIMIT = 2**64


class NodeSet(ArraySchema):
    """Points in draw order; row i is x^i"""

    d: int = Field(..., ge=1)
    points: np.ndarray
    measure: Measure
    seed: int = Field(..., ge=0, lt=SEED_LIMIT)
    parent: Optional["NodeSet"] = None
    subset: Optional[np.ndarray] = None

    @field_validator("points", mode="before")
    @classmethod
    def coerce_points(cls, v):
        array = np.array(v, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError("points must be a two-dimensional array")
        if not np.all(np.isfinite(array)) or np.any(np.abs(array) > 1.0):
            raise ValueError("every coordinate must lie in [-1, 1]")
        array.flags.writeable = False
        return array

    @field_validator("subset", mode="before")
    @classmethod
    def coerce_subset(cls, v):
        if v is None:
            return None
        array = np.array(v, dtype=np.int64).reshape(-1)
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_consistency(self):
        if self.points.shape[1] != self.d:
            raise ValueError(f"points have {self.points.shape[1]} coordinates, expected d={self.d}")
        if (self.parent is None) != (self.subset is None):
            raise ValueError("parent and subset must be given together")
        if self.parent is not None:
            if self.parent.d != self.d:
                raise ValueError("parent node set has a different dimension")
            if len(np.unique(self.subset)) != len(self.subset):
                raise ValueError("subset indices must be distinct")
            if np.any(self.subset < 0) or np.any(self.subset >= self.parent.count):
                raise ValueError("subset indices out of range of the parent node set")
            if not np.array_equal(self.parent.points[self.subset], self.points):
                raise ValueError("points must equal the parent's points at the subset indices")
        return self

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    def restrict(self, indices: Sequence[int]) -> "NodeSet":
        """Order-preserving restriction to the given rows"""
        selected = np.asarray(indices, dtype=np.int64)
        return NodeSet(
            d=self.d,
            points=self.points[selected],
            measure=self.measure,
            seed=self.seed,
            parent=self,
            subset=selected,
        )


NodeSet.model_rebuild()


class NodeSampleRequest(BaseSchema):
    """Schema for drawing a random node set"""

    measure: Measure = Measure.CHEBYSHEV
    dim: int = Field(..., ge=1, le=10)
    count: int = Field(..., ge=1, le=200_000)
    seed: int = Field(..., ge=0, lt=SEED_LIMIT)


class NodeSetResponse(BaseSchema):
    """Schema for node set responses"""

    d: int
    measure: Measure
    seed: int
    count: int
    points: List[List[float]]
    subset: Optional[List[int]] = None

    @classmethod
    def from_nodes(cls, nodes: NodeSet) -> "NodeSetResponse":
        return cls(
            d=nodes.d,
            measure=nodes.measure,
            seed=nodes.seed,
            count=nodes.count,
            points=nodes.points.tolist(),
            subset=None if nodes.subset is None else nodes.subset.tolist(),
        )
