"""
Node router.

This module provides API endpoints for drawing random node sets and for
subsampling posted node sets.
"""
from fastapi import APIRouter, HTTPException, status
from pydantic import ValidationError

from app.schemas.nodes import NodeSampleRequest, NodeSet, NodeSetResponse
from app.schemas.frames import SubsampleRequest, SubsampleSummary
from app.services.index_sets import enumerate_hyperbolic_cross
from app.services.sampling import draw_nodes
from app.services.subsampling import subsample_nodes

router = APIRouter(
    prefix="/nodes",
    tags=["nodes"],
    responses={404: {"description": "Not found"}},
)

MAX_SUBSAMPLE_NODES = 20_000


@router.post("/sample", response_model=NodeSetResponse)
def sample_nodes(request: NodeSampleRequest):
    """
    Draw a seeded random node set from the Chebyshev or uniform measure.
    """
    nodes = draw_nodes(request.measure, request.dim, request.count, request.seed)
    return NodeSetResponse.from_nodes(nodes)


@router.post("/subsample", response_model=SubsampleSummary)
def subsample(request: SubsampleRequest):
    """
    Subsample posted nodes for a hyperbolic cross and report frame bounds.
    """
    if not request.points or len(request.points) > MAX_SUBSAMPLE_NODES:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"Between 1 and {MAX_SUBSAMPLE_NODES} points are required",
        )
    try:
        nodes = NodeSet(
            d=len(request.points[0]),
            points=request.points,
            measure=request.measure,
            seed=request.seed,
        )
    except (ValidationError, ValueError) as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"Invalid node set: {exc}")

    index_set = enumerate_hyperbolic_cross(nodes.d, request.radius)
    _, _, summary = subsample_nodes(nodes, index_set, request.basis, request.b)
    return summary
