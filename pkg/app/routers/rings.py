"""
Rings Router - ring construction and unimodularity endpoints
"""
from fastapi import APIRouter, HTTPException

from app.models.ring import BezoutRequest, BezoutResponse, RingInfo, RingRequest
from app.services.engine_service import get_engine_service

router = APIRouter()


@router.post("/rings/describe", response_model=RingInfo)
def describe_ring(body: RingRequest):
    """
    Build a ring handle and report its capabilities.

    Finite rings also report their size and unit group.
    """
    try:
        return get_engine_service().describe_ring(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/rings/bezout", response_model=BezoutResponse)
def bezout(body: BezoutRequest):
    """
    Test a tuple for unimodularity.

    Returns coefficients c with sum c_i x_i = 1 when the tuple generates the unit ideal.
    """
    try:
        return get_engine_service().bezout(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
