"""
Pydantic models for matrices over a ring
"""
from typing import List

from pydantic import BaseModel, Field, field_validator

from app.models.ring import ElementValue, RingDescriptor


class MatrixPayload(BaseModel):
    """A 2x2 matrix over a ring, row-major."""
    ring: RingDescriptor
    rows: List[List[ElementValue]] = Field(..., description="Two rows of two entries")

    @field_validator("rows")
    @classmethod
    def check_shape(cls, rows):
        if len(rows) != 2 or any(len(row) != 2 for row in rows):
            raise ValueError("A 2x2 matrix needs two rows of two entries")
        return rows
