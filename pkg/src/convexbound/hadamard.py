"""Bound computation and verification of the product inequality chain.

For a pair of nonnegative convex functions u, v on [a, b] the mean integral
of u*v is bounded by the Cauchy-Schwarz combination of the endpoint values.
This module computes every bound, certifies the premises, and assembles a
serializable report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import expr as ex
from .convexity import Certificate, certify_convex, certify_nonnegative, DISPROVED
from .errors import PreconditionError, ToolkitError
from .intervals import Interval
from .quadrature import DEFAULT_TOL, integrate

REL_TOL = 1e-9


def _tol(bound: float, quad_err: float = 0.0) -> float:
    return max(1e-9, 1e-9 * abs(bound)) + quad_err


def hadamard_bounds(f: ex.Expr, iv: Interval) -> Tuple[float, float]:
    """(midpoint value, endpoint average). The classic sandwich for convex f;
    no convexity check is done here."""
    lower = ex.evaluate(f, iv.midpoint)
    upper = 0.5 * (ex.evaluate(f, iv.lo) + ex.evaluate(f, iv.hi))
    return lower, upper


def product_endpoint_bound(u: ex.Expr, v: ex.Expr, iv: Interval) -> float:
    """(u(a)v(a) + u(b)v(b)) / 2 — valid only when u*v is itself convex."""
    ua, ub = ex.evaluate(u, iv.lo), ex.evaluate(u, iv.hi)
    va, vb = ex.evaluate(v, iv.lo), ex.evaluate(v, iv.hi)
    return 0.5 * (ua * va + ub * vb)


def cs_endpoint_bound(u: ex.Expr, v: ex.Expr, iv: Interval) -> float:
    """sqrt(u(a)^2 + u(b)^2) * sqrt(v(a)^2 + v(b)^2) / 2."""
    ua, ub = ex.evaluate(u, iv.lo), ex.evaluate(u, iv.hi)
    va, vb = ex.evaluate(v, iv.lo), ex.evaluate(v, iv.hi)
    return 0.5 * math.sqrt(ua * ua + ub * ub) * math.sqrt(va * va + vb * vb)


@dataclass(frozen=True)
class BoundSet:
    midpoint_lower: float
    endpoint_upper: float
    product_endpoint: float
    cs_endpoint: float
    mean_integral: float

    def to_dict(self):
        return {
            "midpoint_lower": self.midpoint_lower,
            "endpoint_upper": self.endpoint_upper,
            "product_endpoint": self.product_endpoint,
            "cs_endpoint": self.cs_endpoint,
            "mean_integral": self.mean_integral,
        }


def margins_from_bounds(b: BoundSet) -> Dict[str, float]:
    """Per-inequality slack, recomputable from the bound set alone."""
    return {
        "hadamard_lower": b.mean_integral - b.midpoint_lower,
        "hadamard_upper": b.endpoint_upper - b.mean_integral,
        "product_endpoint": b.product_endpoint - b.mean_integral,
        "endpoint_cs": b.cs_endpoint - b.product_endpoint,
        "theorem": b.cs_endpoint - b.mean_integral,
    }


@dataclass
class BoundReport:
    interval: Interval
    u_text: str
    v_text: str
    certificates: Dict[str, Certificate]
    bound_set: BoundSet
    theorem_holds: Optional[bool]  # None when premises are unverified
    margins: Dict[str, float]
    notes: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "interval": {"lo": self.interval.lo, "hi": self.interval.hi},
            "u": self.u_text,
            "v": self.v_text,
            "certificates": {k: c.to_dict() for k, c in self.certificates.items()},
            "bounds": self.bound_set.to_dict(),
            "margins": dict(self.margins),
            "theorem_holds": self.theorem_holds,
            "notes": list(self.notes),
        }


def verify_theorem(u: ex.Expr, v: ex.Expr, iv: Interval,
                   quad_tol: float = DEFAULT_TOL,
                   max_pieces: int = 2 ** 14) -> BoundReport:
    """Certify the premises, compute every bound for (u, v, [a,b]) and
    compare the mean integral of u*v against them."""
    certs = {
        "u_convex": certify_convex(u, iv, max_pieces),
        "u_nonneg": certify_nonnegative(u, iv, max_pieces),
        "v_convex": certify_convex(v, iv, max_pieces),
        "v_nonneg": certify_nonnegative(v, iv, max_pieces),
    }
    product = ex.Mul(u, v)
    certs["product_convex"] = certify_convex(product, iv, max_pieces)

    notes: List[str] = []
    width = iv.hi - iv.lo
    try:
        res = integrate(product, iv, quad_tol * width)
        mean = res.value / width
        quad_err = res.error_estimate / width
    except ToolkitError as err:
        notes.append(f"quadrature failed: {err}")
        mean = math.nan
        quad_err = math.inf

    lower, upper = hadamard_bounds(product, iv)
    pe = product_endpoint_bound(u, v, iv)
    cs = cs_endpoint_bound(u, v, iv)
    bounds = BoundSet(lower, upper, pe, cs, mean)
    margins = margins_from_bounds(bounds)

    premises = [k for k in ("u_convex", "u_nonneg", "v_convex", "v_nonneg")
                if not certs[k].proved]
    if math.isnan(mean):
        theorem_holds: Optional[bool] = None
    elif premises:
        theorem_holds = None
        notes.append("theorem not applicable: unverified premises ("
                     + ", ".join(premises) + ")")
        if mean <= cs + _tol(cs, quad_err):
            notes.append("numeric comparison alone: mean integral <= cs endpoint bound")
    else:
        theorem_holds = mean <= cs + _tol(cs, quad_err)
        if not theorem_holds:
            notes.append("theorem violated numerically; this signals a toolkit bug")

    pc = certs["product_convex"]
    notes.append("product endpoint bound is valid only under product convexity; "
                 f"product convexity certificate: {pc.verdict}")
    if not math.isnan(mean) and mean > pe + _tol(pe, quad_err):
        notes.append(f"product endpoint bound violated: mean integral {mean:.6g} "
                     f"> bound {pe:.6g} (product convexity: {pc.verdict})")

    return BoundReport(iv, ex.format_expr(u), ex.format_expr(v), certs,
                       bounds, theorem_holds, margins, notes)


def check_integral_cs(u: ex.Expr, v: ex.Expr, iv: Interval,
                      quad_tol: float = DEFAULT_TOL) -> float:
    """Margin of the integral Cauchy-Schwarz inequality:
    integral(u^2) * integral(v^2) - integral(u*v)^2, expected >= -tol."""
    iu2 = integrate(ex.Mul(u, u), iv, quad_tol).value
    iv2 = integrate(ex.Mul(v, v), iv, quad_tol).value
    iuv = integrate(ex.Mul(u, v), iv, quad_tol).value
    return iu2 * iv2 - iuv * iuv


@dataclass(frozen=True)
class ChainMargins:
    u_square: float
    v_square: float
    product: float

    def to_dict(self):
        return {"u_square": self.u_square, "v_square": self.v_square,
                "product": self.product}


def check_squares_chain(u: ex.Expr, v: ex.Expr, iv: Interval,
                        quad_tol: float = DEFAULT_TOL,
                        max_pieces: int = 2 ** 14) -> ChainMargins:
    """Margins of the endpoint bounds for u^2 and v^2 (each convex by the
    square-of-nonnegative-convex lemma) plus their product form."""
    for name, e in (("u", u), ("v", v)):
        if not certify_convex(e, iv, max_pieces).proved:
            raise PreconditionError(f"{name} lacks a proved convexity certificate")
        if not certify_nonnegative(e, iv, max_pieces).proved:
            raise PreconditionError(f"{name} lacks a proved nonnegativity certificate")

    width = iv.hi - iv.lo
    mean_u2 = integrate(ex.Mul(u, u), iv, quad_tol * width).value / width
    mean_v2 = integrate(ex.Mul(v, v), iv, quad_tol * width).value / width
    ua2 = ex.evaluate(u, iv.lo) ** 2
    ub2 = ex.evaluate(u, iv.hi) ** 2
    va2 = ex.evaluate(v, iv.lo) ** 2
    vb2 = ex.evaluate(v, iv.hi) ** 2
    m_u = 0.5 * (ua2 + ub2) - mean_u2
    m_v = 0.5 * (va2 + vb2) - mean_v2
    m_p = 0.25 * (ua2 + ub2) * (va2 + vb2) - mean_u2 * mean_v2
    return ChainMargins(m_u, m_v, m_p)
