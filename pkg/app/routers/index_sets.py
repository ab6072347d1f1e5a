"""
Index set router.

This module provides API endpoints for hyperbolic cross index sets and the
oversampled node budget.
"""
from fastapi import APIRouter, HTTPException, Query, status

from app.schemas.index_set import BudgetResponse, IndexSetResponse
from app.services.index_sets import enumerate_hyperbolic_cross, hyperbolic_cross_size
from app.services.sampling import oversampled_budget

router = APIRouter(
    prefix="/index-sets",
    tags=["index sets"],
    responses={404: {"description": "Not found"}},
)

MAX_INDICES = 200_000


@router.get("/hyperbolic-cross", response_model=IndexSetResponse)
def read_hyperbolic_cross(
    dim: int = Query(..., ge=1, le=6),
    radius: int = Query(..., ge=1, le=1000),
    include_indices: bool = False,
):
    """
    Get the size (and optionally the members) of a hyperbolic cross.
    """
    if hyperbolic_cross_size(dim, radius) > MAX_INDICES:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"Index sets are limited to {MAX_INDICES} members",
        )
    index_set = enumerate_hyperbolic_cross(dim, radius)
    return IndexSetResponse(
        d=index_set.d,
        R=index_set.R,
        m=index_set.m,
        indices=index_set.indices.tolist() if include_indices else None,
    )


@router.get("/budget", response_model=BudgetResponse)
def read_budget(m: int = Query(..., ge=2)):
    """
    Get the oversampled node budget M = ceil(4 m ln m).
    """
    return BudgetResponse(m=m, M=oversampled_budget(m))
