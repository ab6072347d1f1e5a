"""
Recovery schemas

This module provides the approximant and error report types.
"""
from typing import List, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.schemas.base import ArraySchema, BaseSchema, BasisTag, ErrorMeasure, ErrorMethod
from app.schemas.index_set import MultiIndexSet


class Approximant(ArraySchema):
    """f ~ sum_k c_k basis_k with coefficients in index-set order"""

    indices: MultiIndexSet
    coefficients: np.ndarray
    basis: BasisTag
    residual_norm: Optional[float] = None

    @field_validator("coefficients", mode="before")
    @classmethod
    def coerce_coefficients(cls, v):
        array = np.array(v, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(array)):
            raise ValueError("coefficients must be finite")
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_length(self):
        if len(self.coefficients) != self.indices.m:
            raise ValueError(
                f"{len(self.coefficients)} coefficients for an index set of size {self.indices.m}"
            )
        return self


class ErrorReport(ArraySchema):
    """L2 error of an approximant"""

    value: float = Field(..., ge=0.0)
    method: ErrorMethod
    measure: ErrorMeasure
    # Monte Carlo metadata
    mc_points: Optional[int] = None
    standard_error: Optional[float] = None
    seed: Optional[int] = None
    # Parseval metadata
    tail_cutoff: Optional[int] = None
    remainder_bound: Optional[float] = None

    @model_validator(mode="after")
    def check_metadata(self):
        if self.method == ErrorMethod.MONTE_CARLO and (self.mc_points is None or self.standard_error is None):
            raise ValueError("Monte Carlo reports need mc_points and standard_error")
        if self.method == ErrorMethod.PARSEVAL and self.tail_cutoff is None:
            raise ValueError("Parseval reports need tail_cutoff")
        return self


class NormComparison(ArraySchema):
    """Monte Carlo estimates of the squared L2 norms of g in both measures"""

    weighted: float
    weighted_se: float
    lebesgue: float
    lebesgue_se: float
    d: int


class RecoveryResult(BaseSchema):
    """Schema for the JSON written by the recover command"""

    d: int
    R: int
    m: int
    n: int
    basis: BasisTag
    function: str
    error: float
    error_method: ErrorMethod
    error_measure: ErrorMeasure
    standard_error: Optional[float] = None
    mc_points: Optional[int] = None
    tail_cutoff: Optional[int] = None
    remainder_bound: Optional[float] = None
    residual_norm: Optional[float] = None
    coefficients: Optional[List[float]] = None


class CoefficientTable(BaseSchema):
    """Schema for univariate B_2 coefficients of one basis"""

    basis: BasisTag
    kmax: int
    coefficients: List[float]
