"""
Pydantic models for ring descriptors and ring-level requests
"""
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, Field

# Elements travel as decimal strings (ints accepted on input) or as
# two-component lists for localizations and quadratic orders.
Scalar = Union[int, str]
ElementValue = Union[Scalar, List[Scalar]]


class IntegersDescriptor(BaseModel):
    """The ring of integers."""
    kind: Literal["Z"] = "Z"


class IntegersModNDescriptor(BaseModel):
    """Residues modulo n."""
    kind: Literal["Zmod"] = "Zmod"
    n: int = Field(..., ge=2, description="Modulus n >= 2")


class LocalizedIntegersDescriptor(BaseModel):
    """Integers with m inverted."""
    kind: Literal["Zloc"] = "Zloc"
    m: int = Field(..., ge=2, description="Inverted integer m >= 2")


class QuadraticOrderDescriptor(BaseModel):
    """Z[theta] with theta^2 = -q."""
    kind: Literal["Zquad"] = "Zquad"
    q: int = Field(..., ge=1, description="theta^2 = -q, q >= 1")


BaseRingDescriptor = Annotated[
    Union[IntegersDescriptor, QuadraticOrderDescriptor],
    Field(discriminator="kind"),
]


class QuotientRingDescriptor(BaseModel):
    """Finite quotient of Z or Z[theta] by the ideal of one or more generators."""
    kind: Literal["Quot"] = "Quot"
    base: BaseRingDescriptor
    modulus: ElementValue = Field(..., description="Nonzero generator of the ideal, in base element format")
    extra_moduli: List[ElementValue] = Field(
        default_factory=list,
        description="Further ideal generators (quotients of quotients)"
    )


RingDescriptor = Annotated[
    Union[
        IntegersDescriptor,
        IntegersModNDescriptor,
        LocalizedIntegersDescriptor,
        QuadraticOrderDescriptor,
        QuotientRingDescriptor,
    ],
    Field(discriminator="kind"),
]


class RingRequest(BaseModel):
    """Request body carrying a ring descriptor."""
    ring: RingDescriptor


class RingInfo(BaseModel):
    """Capabilities of a constructed ring."""
    ring: RingDescriptor
    finite: bool = Field(..., description="Whether the ring is finite")
    size: Optional[int] = Field(None, description="Number of elements (finite rings)")
    bezout: bool = Field(..., description="Bezout certificates available")
    divisor_enumeration: bool = Field(..., description="Divisors up to units can be listed")
    gcd: bool = Field(..., description="gcd available")
    stable_range_bound: int = Field(..., description="Known upper bound for the stable range")
    units: Optional[List[ElementValue]] = Field(None, description="Unit group (finite rings only)")


class BezoutRequest(BaseModel):
    """Unimodularity test for a tuple of elements."""
    ring: RingDescriptor
    elements: List[ElementValue] = Field(..., min_length=1, description="The tuple to test")


class BezoutResponse(BaseModel):
    """Bezout certificate, if the tuple is unimodular."""
    unimodular: bool
    coefficients: Optional[List[ElementValue]] = Field(
        None, description="Coefficients c with sum c_i x_i = 1"
    )
