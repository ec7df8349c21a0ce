"""
Pydantic models for ring and matrix classification
"""
from typing import List, Optional

from pydantic import BaseModel, Field

from app.models.extension import ExtensionOutcomePayload
from app.models.matrix import MatrixPayload
from app.models.ring import ElementValue, RingDescriptor


class CounterexamplePayload(BaseModel):
    predicate: str = Field(..., description="First failing flag")
    witness: List[ElementValue] = Field(..., description="Failing tuple or matrix entries, row-major")


class RingClassReportPayload(BaseModel):
    """Stable range and extension classes of a finite ring."""
    ring: RingDescriptor
    size: int
    sr1: bool
    fsr15: bool
    asr1: bool
    pi2: bool
    e2: bool
    se2: bool
    counterexample: Optional[CounterexamplePayload] = None
    matrices_checked: int = Field(0, description="Unimodular 2x2 matrices decided")


class MatrixClassificationPayload(BaseModel):
    matrix: MatrixPayload
    unimodular: bool
    det: ElementValue
    det_is_unit: bool
    non_full: Optional[bool] = Field(None, description="Column times row (determinant zero only)")
    extendable: Optional[bool] = None
    simply_extendable: Optional[bool] = None
    outcome: Optional[ExtensionOutcomePayload] = None


class SweepRequest(BaseModel):
    """Classify Z/n for start <= n <= stop."""
    start: int = Field(..., ge=2)
    stop: int = Field(..., ge=2)


class SweepResponse(BaseModel):
    reports: List[RingClassReportPayload]
    total: int
