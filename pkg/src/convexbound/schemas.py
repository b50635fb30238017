"""Pydantic request/response models for the HTTP service and CLI client."""

from __future__ import annotations

from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field


class IntervalIn(BaseModel):
    """Interval bounds; strings may use constant arithmetic such as '2*pi'."""
    lo: Union[float, str]
    hi: Union[float, str]


class IntervalOut(BaseModel):
    lo: float
    hi: float


class ParseRequest(BaseModel):
    text: str


class ParseResponse(BaseModel):
    formatted: str


class WitnessOut(BaseModel):
    kind: str
    x: float
    y: Optional[float] = None
    k: Optional[float] = None
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    value: Optional[float] = None


class CertificateOut(BaseModel):
    verdict: str
    method: Optional[str] = None
    witness: Optional[WitnessOut] = None


class CheckRequest(BaseModel):
    expr: str
    interval: IntervalIn


class CheckResponse(BaseModel):
    expr: str
    interval: IntervalOut
    convex: CertificateOut
    nonnegative: CertificateOut


class BoundsRequest(BaseModel):
    u: str
    v: str
    interval: IntervalIn
    tol: float = Field(default=1e-10, gt=0)


class BoundsOut(BaseModel):
    midpoint_lower: float
    endpoint_upper: float
    product_endpoint: float
    cs_endpoint: float
    mean_integral: float


class BoundsResponse(BaseModel):
    u: str
    v: str
    interval: IntervalOut
    bounds: BoundsOut


class VerifyRequest(BaseModel):
    u: str
    v: str
    interval: IntervalIn
    tol: float = Field(default=1e-10, gt=0)


class VerifyResponse(BaseModel):
    interval: IntervalOut
    u: str
    v: str
    certificates: Dict[str, CertificateOut]
    bounds: BoundsOut
    margins: Dict[str, float]
    theorem_holds: Optional[bool]
    notes: List[str]


class StressRequest(BaseModel):
    trials: int = Field(ge=1)
    interval: IntervalIn
    seed: int = 0


class StressResponse(BaseModel):
    trials: int
    seed: int
    interval: IntervalOut
    theorem_violations: int
    eq2_failures_found: int
    nonconvex_products_found: int
    worst_margin: float
    example_witnesses: List[dict]
    integral_cs_min_margin: float
    lemma_violations: int
    errors: int


class ErrorDetail(BaseModel):
    kind: str  # parse | domain | precondition | budget | generation
    message: str
