"""
Experiment router.

This module provides API endpoints for running the frame-bound demonstration
and error sweeps, and for browsing and deleting persisted runs.
"""
from typing import List, Optional

from fastapi import APIRouter, Depends, HTTPException, Query, status
from sqlalchemy.orm import Session

from app.database import get_db
from app.exceptions import ParameterError
from app.models.experiment import ExperimentRun as ExperimentRunModel
from app.schemas.base import BasisTag, PaginatedResponse
from app.schemas.experiment import ExperimentConfig, ExperimentRun, SweepRequest, SweepResponse
from app.services.experiments import ExperimentRunner, aggregate_medians, expected_slope, fit_decay_rate

router = APIRouter(
    prefix="/experiments",
    tags=["experiments"],
    responses={404: {"description": "Not found"}},
)


@router.post("/frame-bounds", response_model=List[ExperimentRun], status_code=status.HTTP_201_CREATED)
def run_frame_bounds(config: ExperimentConfig, db: Session = Depends(get_db)):
    """
    Run the frame-bound demonstration for both bases and store the records.
    """
    arms = ExperimentRunner(selection=config.selection).run_frame_bound_demo(config)
    rows = [
        ExperimentRunModel.from_record(arm.record, kind="frame_bounds", selected=arm.selected.subset.tolist())
        for arm in arms
    ]
    return ExperimentRunModel.create_many(db, rows)


@router.post("/sweep", response_model=SweepResponse, status_code=status.HTTP_201_CREATED)
def run_sweep(request: SweepRequest, db: Session = Depends(get_db)):
    """
    Run an error sweep over the posted radii and store the records.
    """
    runner = ExperimentRunner(selection=request.selection)
    records = runner.run_error_sweep(request)
    kind = "cheb_sweep" if request.basis == BasisTag.CHEBYSHEV else "cosine_sweep"
    runs = ExperimentRunModel.create_many(db, [ExperimentRunModel.from_record(r, kind=kind) for r in records])

    medians = aggregate_medians(records)
    try:
        slope = fit_decay_rate(medians)
        reference = expected_slope(request.basis, request.d, medians[0].n, medians[-1].n)
    except ParameterError:
        slope, reference = None, None
    return SweepResponse(
        runs=[ExperimentRun.model_validate(run) for run in runs],
        failures=runner.failures,
        slope=slope,
        expected_slope=reference,
    )


@router.get("/runs", response_model=PaginatedResponse[ExperimentRun])
def read_runs(
    kind: Optional[str] = None,
    skip: int = Query(0, ge=0),
    limit: int = Query(100, ge=1, le=1000),
    db: Session = Depends(get_db),
):
    """
    Get stored experiment runs, optionally filtered by kind.
    """
    items = ExperimentRunModel.get_all(db, skip=skip, limit=limit, kind=kind)
    total = ExperimentRunModel.count(db, kind=kind)
    return PaginatedResponse[ExperimentRun](
        items=[ExperimentRun.model_validate(item) for item in items],
        total=total,
        skip=skip,
        limit=limit,
    )


@router.get("/runs/{run_id}", response_model=ExperimentRun)
def read_run(run_id: int, db: Session = Depends(get_db)):
    """
    Get a stored experiment run by ID.
    """
    run = ExperimentRunModel.get(db, run_id)
    if run is None:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail="Experiment run not found")
    return run


@router.delete("/runs/{run_id}", status_code=status.HTTP_204_NO_CONTENT)
def delete_run(run_id: int, db: Session = Depends(get_db)):
    """
    Delete a stored experiment run.
    """
    if not ExperimentRunModel.delete(db, run_id):
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail="Experiment run not found")
