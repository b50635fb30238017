"""FastAPI service wrapping the core toolkit.

The handler bodies live in plain ``do_*`` functions so the CLI can call them
in-process; the HTTP layer only translates toolkit errors into 400 responses.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import expr as ex
from .convexity import certify_convex, certify_nonnegative
from .errors import (BudgetExceededError, DomainError, GenerationError,
                     ParseError, PreconditionError, ToolkitError)
from .explorer import stress_theorem
from .hadamard import (cs_endpoint_bound, hadamard_bounds,
                       product_endpoint_bound, verify_theorem)
from .intervals import Interval
from .quadrature import mean_value
from .schemas import (BoundsRequest, BoundsResponse, CheckRequest, CheckResponse,
                      ParseRequest, ParseResponse, StressRequest, StressResponse,
                      VerifyRequest, VerifyResponse)

app = FastAPI(title="convexbound",
              description="Convexity certification and product-bound verification "
                          "for univariate functions on an interval.")


def _error_kind(err: ToolkitError) -> str:
    if isinstance(err, ParseError):
        return "parse"
    if isinstance(err, DomainError):
        return "domain"
    if isinstance(err, PreconditionError):
        return "precondition"
    if isinstance(err, BudgetExceededError):
        return "budget"
    if isinstance(err, GenerationError):
        return "generation"
    return "error"


def _interval(spec) -> Interval:
    def side(v):
        if isinstance(v, str):
            return ex.parse_constant(v)
        return float(v)

    lo = side(spec.lo)
    hi = side(spec.hi)
    try:
        return Interval(lo, hi)
    except ValueError as err:
        raise PreconditionError(str(err)) from None


def do_parse(req: ParseRequest) -> ParseResponse:
    return ParseResponse(formatted=ex.format_expr(ex.parse(req.text)))


def do_check(req: CheckRequest) -> CheckResponse:
    iv = _interval(req.interval)
    e = ex.parse(req.expr)
    return CheckResponse(
        expr=req.expr,
        interval={"lo": iv.lo, "hi": iv.hi},
        convex=certify_convex(e, iv).to_dict(),
        nonnegative=certify_nonnegative(e, iv).to_dict(),
    )


def do_bounds(req: BoundsRequest) -> BoundsResponse:
    iv = _interval(req.interval)
    u = ex.parse(req.u)
    v = ex.parse(req.v)
    product = ex.Mul(u, v)
    lower, upper = hadamard_bounds(product, iv)
    return BoundsResponse(
        u=req.u, v=req.v, interval={"lo": iv.lo, "hi": iv.hi},
        bounds={
            "midpoint_lower": lower,
            "endpoint_upper": upper,
            "product_endpoint": product_endpoint_bound(u, v, iv),
            "cs_endpoint": cs_endpoint_bound(u, v, iv),
            "mean_integral": mean_value(product, iv, req.tol),
        },
    )


def do_verify(req: VerifyRequest) -> VerifyResponse:
    iv = _interval(req.interval)
    u = ex.parse(req.u)
    v = ex.parse(req.v)
    report = verify_theorem(u, v, iv, quad_tol=req.tol)
    return VerifyResponse(**report.to_dict())


def do_stress(req: StressRequest) -> StressResponse:
    iv = _interval(req.interval)
    summary = stress_theorem(req.trials, iv, req.seed)
    return StressResponse(**summary.to_dict())


def _wrap(fn, req):
    try:
        return fn(req)
    except ToolkitError as err:
        raise HTTPException(status_code=400,
                            detail={"kind": _error_kind(err), "message": str(err)})


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/parse", response_model=ParseResponse)
def parse_endpoint(req: ParseRequest):
    return _wrap(do_parse, req)


@app.post("/check", response_model=CheckResponse)
def check_endpoint(req: CheckRequest):
    return _wrap(do_check, req)


@app.post("/bounds", response_model=BoundsResponse)
def bounds_endpoint(req: BoundsRequest):
    return _wrap(do_bounds, req)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest):
    return _wrap(do_verify, req)


@app.post("/stress", response_model=StressResponse)
def stress_endpoint(req: StressRequest):
    return _wrap(do_stress, req)
