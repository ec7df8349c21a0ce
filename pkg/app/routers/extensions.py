"""
Extensions Router - simple extension and extension endpoints
"""
from fastapi import APIRouter, HTTPException

from app.models.extension import (
    ExtensionOutcomePayload,
    ExtensionRequest,
    ReduceRequest,
    ReduceResponse,
)
from app.services.engine_service import get_engine_service
from app.services.errors import InvariantViolation

router = APIRouter()


@router.post("/extensions/simple", response_model=ExtensionOutcomePayload)
def simply_extend(body: ExtensionRequest):
    """
    Decide whether a unimodular 2x2 matrix has an SL3-extension with (3,3) entry zero.

    Returns one of:
    - **simple**: the extension, its certificate (e, f, s, t) and characteristic polynomial
    - **not_extendable**: a fullness or exhaustive-search witness
    - **undecided**: the search bound that was exhausted
    """
    service = get_engine_service()
    try:
        return service.simply_extend(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except InvariantViolation as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.post("/extensions/extend", response_model=ExtensionOutcomePayload)
def extend(body: ExtensionRequest):
    """
    Decide whether a unimodular 2x2 matrix is the upper-left block of an SL3 matrix.

    The outcome is **simple** whenever a zero-corner extension was found on the way.
    """
    service = get_engine_service()
    try:
        return service.extend(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except InvariantViolation as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.post("/extensions/reduce", response_model=ReduceResponse)
def reduce_matrix(body: ReduceRequest):
    """
    Reduce a matrix modulo an element (its determinant by default).
    """
    try:
        return get_engine_service().reduce(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
