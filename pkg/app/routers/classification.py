"""
Classification Router - finite ring and single matrix classification
"""
from fastapi import APIRouter, HTTPException

from app.models.classification import (
    MatrixClassificationPayload,
    RingClassReportPayload,
    SweepRequest,
    SweepResponse,
)
from app.models.extension import ExtensionRequest
from app.models.ring import RingRequest
from app.services.engine_service import get_engine_service
from app.services.errors import InvariantViolation

router = APIRouter()


@router.post("/classification/ring", response_model=RingClassReportPayload)
def classify_ring(body: RingRequest):
    """
    Classify a finite ring.

    Checks stable range one, fsr 1.5 and asr 1, then decides every unimodular
    2x2 matrix for the Pi2, E2 and SE2 flags. Reports the first counterexample.
    """
    try:
        return get_engine_service().classify_ring(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except InvariantViolation as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.post("/classification/matrix", response_model=MatrixClassificationPayload)
def classify_matrix(body: ExtensionRequest):
    """Unimodularity, fullness and extendability of one matrix."""
    try:
        return get_engine_service().classify_matrix(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except InvariantViolation as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.post("/classification/sweep", response_model=SweepResponse)
def sweep(body: SweepRequest):
    """Classify Z/n for every n in [start, stop]."""
    try:
        return get_engine_service().sweep(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except InvariantViolation as e:
        raise HTTPException(status_code=500, detail=str(e))
