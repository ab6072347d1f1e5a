"""
Coefficient router.

This module exposes the exact univariate expansion coefficients of the
reference spline for auditing.
"""
from fastapi import APIRouter, Query

from app.schemas.base import BasisTag
from app.schemas.recovery import CoefficientTable
from app.services.reference_problems import b2_cheb_coeffs, b2_hpc_coeffs

router = APIRouter(
    prefix="/coefficients",
    tags=["coefficients"],
    responses={404: {"description": "Not found"}},
)


@router.get("/{basis}", response_model=CoefficientTable)
def read_coefficients(basis: BasisTag, kmax: int = Query(10, ge=0, le=100_000)):
    """
    Get the coefficients of degrees 0..kmax in the chosen basis.
    """
    table = b2_cheb_coeffs(kmax) if basis == BasisTag.CHEBYSHEV else b2_hpc_coeffs(kmax)
    return CoefficientTable(basis=basis, kmax=kmax, coefficients=table.tolist())
