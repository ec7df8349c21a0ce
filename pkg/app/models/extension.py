"""
Pydantic models for extension requests and outcomes
"""
from typing import List, Optional

from pydantic import BaseModel, Field

from app.models.matrix import MatrixPayload
from app.models.ring import ElementValue


class CertificatePayload(BaseModel):
    """(e, f, s, t) with a(es) + b(et) + c(fs) + d(ft) = 1."""
    e: ElementValue
    f: ElementValue
    s: ElementValue
    t: ElementValue
    via_transpose: bool = Field(False, description="Obtained from a certificate of the transpose")


class DivisorCasePayload(BaseModel):
    divisor: ElementValue
    reason: str


class WitnessPayload(BaseModel):
    """Proof object for a determinant-zero or exhausted decision."""
    mode: str = Field(..., description="full-proof, factorization or exhaustive")
    column: Optional[List[ElementValue]] = Field(None, description="Column of a factorization")
    row: Optional[List[ElementValue]] = Field(None, description="Row of a factorization")
    pivot: Optional[List[int]] = Field(None, description="0-based position of the pivot entry")
    divisors: List[ElementValue] = Field(default_factory=list, description="Divisors of the pivot up to units")
    cases: List[DivisorCasePayload] = Field(default_factory=list)
    searched: int = Field(0, description="Pairs examined by an exhaustive search")
    modulus: Optional[ElementValue] = Field(None, description="Set when the witness lives modulo det(A)")


class CharPolyPayload(BaseModel):
    """chi(x) = x^3 - trace x^2 + nu x - det."""
    trace: ElementValue
    nu: ElementValue
    det: ElementValue


class ExtensionOutcomePayload(BaseModel):
    """Decision for one matrix with its construction or proof."""
    status: str = Field(..., description="simple, extendable, not_extendable or undecided")
    route: str = Field("", description="Pipeline stage that decided")
    matrix: MatrixPayload
    extension: Optional[List[List[ElementValue]]] = Field(None, description="The 3x3 extension, row-major")
    certificate: Optional[CertificatePayload] = None
    char_poly: Optional[CharPolyPayload] = None
    witness: Optional[WitnessPayload] = None
    bound: Optional[int] = Field(None, description="Search height exhausted (undecided only)")


class ExtensionRequest(BaseModel):
    """A matrix and an optional search height."""
    matrix: MatrixPayload
    bound: Optional[int] = Field(None, ge=1, description="Height bound for the (e, f) search")


class ReduceRequest(BaseModel):
    matrix: MatrixPayload
    modulus: Optional[ElementValue] = Field(None, description="Generator of the ideal; defaults to det(A)")


class ReduceResponse(BaseModel):
    matrix: MatrixPayload
    modulus: ElementValue
