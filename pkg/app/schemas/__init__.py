"""
Schemas package

This package contains Pydantic models for the numerical domain types and for
request and response validation.
"""
from app.schemas.base import (
    BaseSchema,
    ArraySchema,
    IDMixin,
    TimestampMixin,
    PaginatedResponse,
    ResponseModel,
    ErrorResponse,
    BasisTag,
    Measure,
    ErrorMethod,
    ErrorMeasure,
)
from app.schemas.index_set import (
    MultiIndex,
    MultiIndexSet,
    as_multi_index,
    IndexSetResponse,
    BudgetResponse,
)
from app.schemas.nodes import NodeSet, NodeSampleRequest, NodeSetResponse
from app.schemas.frames import (
    DesignMatrix,
    FrameBounds,
    SubsampleResult,
    SubsampleRequest,
    SubsampleSummary,
)
from app.schemas.recovery import Approximant, CoefficientTable, ErrorReport, NormComparison, RecoveryResult
from app.schemas.experiment import (
    ExperimentConfig,
    ExperimentRecord,
    ExperimentRun,
    FrameBoundArm,
    SweepRequest,
    SweepResponse,
    RECORD_COLUMNS,
    selection_budget,
)

# For convenience when importing schemas
__all__ = [
    # Base
    "BaseSchema", "ArraySchema", "IDMixin", "TimestampMixin", "PaginatedResponse",
    "ResponseModel", "ErrorResponse", "BasisTag", "Measure", "ErrorMethod", "ErrorMeasure",

    # Index sets
    "MultiIndex", "MultiIndexSet", "as_multi_index", "IndexSetResponse", "BudgetResponse",

    # Nodes
    "NodeSet", "NodeSampleRequest", "NodeSetResponse",

    # Frames
    "DesignMatrix", "FrameBounds", "SubsampleResult", "SubsampleRequest", "SubsampleSummary",

    # Recovery
    "Approximant", "CoefficientTable", "ErrorReport", "NormComparison", "RecoveryResult",

    # Experiments
    "ExperimentConfig", "ExperimentRecord", "ExperimentRun", "FrameBoundArm", "SweepRequest", "SweepResponse",
    "RECORD_COLUMNS", "selection_budget",
]
