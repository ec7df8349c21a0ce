"""
Pydantic models for nu enumeration
"""
from typing import List

from pydantic import BaseModel, Field

from app.models.matrix import MatrixPayload


class NuRequest(BaseModel):
    """Integer matrix and the height bound on (e, f, s, t)."""
    matrix: MatrixPayload
    bound: int = Field(..., ge=1, description="Height bound for e, f, s and t")


class NuSamplePayload(BaseModel):
    matrix: MatrixPayload
    bound: int
    count: int = Field(..., description="Number of certificates of height <= bound")
    values: List[int] = Field(..., description="Distinct nu values, ascending")
    gamma: List[List[int]] = Field(..., description="Certificates (e, f, s, t) in lexicographic order")
