"""
Enumeration Router - nu values of integer matrices
"""
from fastapi import APIRouter, HTTPException

from app.models.enumeration import NuRequest, NuSamplePayload
from app.services.engine_service import get_engine_service

router = APIRouter()


@router.post("/enumeration/nu", response_model=NuSamplePayload)
def nu(body: NuRequest):
    """
    Enumerate the certificates (e, f, s, t) of height <= bound of an integer matrix.

    Returns the certificates in lexicographic order and the distinct values det(A) + es + ft.
    """
    try:
        return get_engine_service().nu(body)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
