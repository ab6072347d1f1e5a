"""
Base Pydantic schemas

This module provides base Pydantic models for schema validation and the
enumerations shared by the numerical domain types.
"""
from datetime import datetime
from enum import Enum
from typing import Generic, List, Optional, TypeVar

from pydantic import BaseModel, ConfigDict, Field


class BasisTag(str, Enum):
    """Univariate basis used in the tensor product"""

    CHEBYSHEV = "cheb"
    HALF_PERIOD_COSINE = "hpc"


class Measure(str, Enum):
    """Sampling measure on [-1, 1]^d"""

    CHEBYSHEV = "chebyshev"
    UNIFORM = "uniform"


class ErrorMethod(str, Enum):
    """How an L2 error was computed"""

    PARSEVAL = "parseval"
    MONTE_CARLO = "mc"


class ErrorMeasure(str, Enum):
    """Measure of the L2 norm an error is reported in"""

    CHEBYSHEV_WEIGHTED = "chebyshev_weighted"
    LEBESGUE = "lebesgue"


# The measure each basis is orthonormal against
NATURAL_MEASURE = {
    BasisTag.CHEBYSHEV: Measure.CHEBYSHEV,
    BasisTag.HALF_PERIOD_COSINE: Measure.UNIFORM,
}

NATURAL_ERROR_MEASURE = {
    BasisTag.CHEBYSHEV: ErrorMeasure.CHEBYSHEV_WEIGHTED,
    BasisTag.HALF_PERIOD_COSINE: ErrorMeasure.LEBESGUE,
}


class BaseSchema(BaseModel):
    """Base schema with common configuration"""

    model_config = ConfigDict(
        from_attributes=True,  # Allow ORM model conversion
        populate_by_name=True,
    )


class ArraySchema(BaseModel):
    """Immutable domain type that carries numpy arrays"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class TimestampMixin(BaseSchema):
    """Mixin for created_at and updated_at fields"""

    created_at: Optional[datetime] = None
    updated_at: Optional[datetime] = None


class IDMixin(BaseSchema):
    """Mixin for ID field"""

    id: int


# Generic type for item models
T = TypeVar("T")


class PaginatedResponse(BaseModel, Generic[T]):
    """Generic model for paginated responses"""

    items: List[T]
    total: int
    skip: int = 0
    limit: int = Field(100, ge=1)

    model_config = ConfigDict(from_attributes=True, populate_by_name=True)


class ResponseModel(BaseSchema):
    """Standard response wrapper for API responses"""

    success: bool = True
    message: str = "Operation successful"


class ErrorResponse(ResponseModel):
    """Error response model"""

    success: bool = False
    message: str
    error_code: Optional[str] = None
    details: Optional[dict] = None
