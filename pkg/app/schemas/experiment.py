"""
Experiment schemas

This module provides Pydantic models for experiment configuration, the flat
per-cell result record and the persisted run response.
"""
import math
from typing import List, Optional

from pydantic import Field, field_validator, model_validator

from app.config import settings
from app.schemas.base import ArraySchema, BaseSchema, BasisTag, ErrorMethod, IDMixin, TimestampMixin
from app.schemas.nodes import NodeSet


def selection_budget(b: float, m: int) -> int:
    """ceil(b*m), robust to b*m landing a rounding error above an integer"""
    return math.ceil(b * m - 1e-9)


class ExperimentConfig(BaseSchema):
    """Configuration of a frame-bound demo or an error sweep"""

    d: int = Field(..., ge=1, le=8)
    radii: List[int] = Field(..., min_length=1)
    b: float = Field(default_factory=lambda: settings.OVERSAMPLING_FACTOR, gt=1.0)
    basis: BasisTag = BasisTag.CHEBYSHEV
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0)
    repeats: int = Field(default_factory=lambda: settings.DEFAULT_REPEATS, ge=1)
    expected_rate: float = Field(default_factory=lambda: settings.EXPECTED_RATE, gt=0.0)
    error_method: ErrorMethod = ErrorMethod.PARSEVAL
    selection: str = Field(default_factory=lambda: settings.SUBSAMPLE_SELECTION, pattern="^(first|best)$")

    @field_validator("radii")
    @classmethod
    def check_radii(cls, v):
        if any(r < 1 for r in v):
            raise ValueError("radii must be positive")
        if any(later <= earlier for earlier, later in zip(v, v[1:])):
            raise ValueError("radii must be strictly ascending")
        return v


RECORD_COLUMNS = [
    "d", "R", "m", "M", "n", "b", "basis", "error_method", "error",
    "a_before", "b_before", "a_after", "b_after", "seed", "ms",
]


class ExperimentRecord(BaseSchema):
    """One (d, R, seed) cell of an experiment"""

    d: int
    R: int
    m: int
    M: int
    n: int
    b: float
    basis: BasisTag
    error_method: Optional[ErrorMethod] = None
    error: Optional[float] = None
    a_before: float
    b_before: float
    a_after: float
    b_after: float
    seed: int
    ms: float = 0.0

    @model_validator(mode="after")
    def check_sizes(self):
        if self.n > selection_budget(self.b, self.m):
            raise ValueError(f"n={self.n} exceeds ceil(b*m)={selection_budget(self.b, self.m)}")
        return self

    def to_row(self) -> dict:
        row = self.model_dump(mode="json")
        return {column: ("" if row[column] is None else row[column]) for column in RECORD_COLUMNS}


class FrameBoundArm(ArraySchema):
    """One arm of the frame-bound demonstration: record plus both node sets"""

    record: ExperimentRecord
    nodes: NodeSet
    selected: NodeSet


class SweepRequest(ExperimentConfig):
    """Schema for requesting an error sweep over the API"""

    radii: List[int] = Field(..., min_length=1, max_length=12)


class ExperimentRun(ExperimentRecord, IDMixin, TimestampMixin):
    """Schema for persisted experiment runs"""

    kind: str


class SweepResponse(BaseSchema):
    """Schema for the outcome of an error sweep"""

    runs: List[ExperimentRun]
    failures: List[dict] = []
    slope: Optional[float] = None
    expected_slope: Optional[float] = None
