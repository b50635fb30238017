"""Closed intervals and sound interval-arithmetic enclosures.

The enclosure engine works elementwise on numpy arrays of interval bounds so
that adaptive bisection can evaluate a whole generation of pieces in one
recursive pass over the tree.  Every primitive operation widens its result by
a small relative amount so floating-point rounding cannot break the
enclosure-soundness invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import DomainError

_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi

_WIDEN_REL = 1e-14
_WIDEN_ABS = 1e-300
# sin/cos use float multiples of pi for critical points; absorb that slop
_TRIG_PAD = 1e-12


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval bounds must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class IntervalValue:
    lo: float
    hi: float

    def contains(self, v: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= v <= self.hi + slack


def _widen(lo: np.ndarray, hi: np.ndarray):
    return (lo - np.abs(lo) * _WIDEN_REL - _WIDEN_ABS,
            hi + np.abs(hi) * _WIDEN_REL + _WIDEN_ABS)


def _mul_iv(alo, ahi, blo, bhi):
    p1 = alo * blo
    p2 = alo * bhi
    p3 = ahi * blo
    p4 = ahi * bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return lo, hi


def _recip_iv(blo, bhi):
    if np.any((blo <= 0.0) & (bhi >= 0.0)):
        raise DomainError("denominator enclosure contains zero")
    return 1.0 / bhi, 1.0 / blo


def _sin_range(lo, hi):
    # A critical point pi/2 + 2*pi*k (max) or -pi/2 + 2*pi*k (min) inside
    # the interval pins the bound at +/-1; otherwise sin is monotone and
    # the endpoint values bound the range.
    def has_crit(offset):
        k = np.ceil((lo - offset) / _TWO_PI)
        return offset + _TWO_PI * k <= hi

    slo, shi = np.sin(lo), np.sin(hi)
    hi_r = np.where(has_crit(_HALF_PI), 1.0, np.maximum(slo, shi))
    lo_r = np.where(has_crit(-_HALF_PI), -1.0, np.minimum(slo, shi))
    return lo_r - _TRIG_PAD, hi_r + _TRIG_PAD


def _pow_int_iv(lo, hi, n: int):
    if n == 0:
        return np.ones_like(lo), np.ones_like(hi)
    if n < 0:
        rlo, rhi = _recip_iv(lo, hi)
        return _pow_int_iv(rlo, rhi, -n)
    if n % 2 == 1:
        return np.power(lo, float(n)), np.power(hi, float(n))
    # even power
    abs_lo = np.abs(lo)
    abs_hi = np.abs(hi)
    big = np.maximum(abs_lo, abs_hi)
    small = np.minimum(abs_lo, abs_hi)
    contains0 = (lo <= 0.0) & (hi >= 0.0)
    lo_r = np.where(contains0, 0.0, np.power(small, float(n)))
    hi_r = np.power(big, float(n))
    return lo_r, hi_r


def _clamp_small_neg(lo, tol=1e-9):
    return np.where((lo < 0.0) & (lo > -tol), 0.0, lo)


def enclose(e: "ex.Expr", los: np.ndarray, his: np.ndarray):
    """Sound elementwise enclosure of e over each [los[i], his[i]]."""
    if isinstance(e, ex.Const):
        v = np.full(los.shape, e.value)
        return v.copy(), v.copy()
    if isinstance(e, ex.Var):
        return los.copy(), his.copy()
    if isinstance(e, ex.Neg):
        alo, ahi = enclose(e.arg, los, his)
        return -ahi, -alo
    if isinstance(e, ex.Add):
        alo, ahi = enclose(e.left, los, his)
        blo, bhi = enclose(e.right, los, his)
        return _widen(alo + blo, ahi + bhi)
    if isinstance(e, ex.Sub):
        alo, ahi = enclose(e.left, los, his)
        blo, bhi = enclose(e.right, los, his)
        return _widen(alo - bhi, ahi - blo)
    if isinstance(e, ex.Mul):
        alo, ahi = enclose(e.left, los, his)
        blo, bhi = enclose(e.right, los, his)
        return _widen(*_mul_iv(alo, ahi, blo, bhi))
    if isinstance(e, ex.Div):
        alo, ahi = enclose(e.left, los, his)
        blo, bhi = enclose(e.right, los, his)
        rlo, rhi = _recip_iv(blo, bhi)
        return _widen(*_mul_iv(alo, ahi, rlo, rhi))
    if isinstance(e, ex.Pow):
        blo, bhi = enclose(e.base, los, his)
        if e.integer:
            return _widen(*_pow_int_iv(blo, bhi, int(e.exponent)))
        blo = _clamp_small_neg(blo)
        if np.any(blo < 0.0):
            raise DomainError("fractional power of enclosure with negative base")
        p = e.exponent
        if p >= 0.0:
            return _widen(np.power(blo, p), np.power(bhi, p))
        if np.any(blo <= 0.0):
            raise DomainError("negative fractional power of enclosure touching zero")
        return _widen(np.power(bhi, p), np.power(blo, p))
    if isinstance(e, ex.Max):
        alo, ahi = enclose(e.left, los, his)
        blo, bhi = enclose(e.right, los, his)
        return np.maximum(alo, blo), np.maximum(ahi, bhi)
    if isinstance(e, ex.Call):
        alo, ahi = enclose(e.arg, los, his)
        name = e.name
        if name == "sin":
            return _sin_range(alo, ahi)
        if name == "cos":
            return _sin_range(alo + _HALF_PI, ahi + _HALF_PI)
        if name == "exp":
            lo_r, hi_r = np.exp(alo), np.exp(ahi)
            if np.any(~np.isfinite(hi_r)):
                raise DomainError("exp overflow in enclosure")
            return _widen(lo_r, hi_r)
        if name == "log":
            if np.any(alo <= 0.0):
                raise DomainError("log of enclosure touching non-positive values")
            return _widen(np.log(alo), np.log(ahi))
        if name == "sqrt":
            alo = _clamp_small_neg(alo)
            if np.any(alo < 0.0):
                raise DomainError("sqrt of enclosure with negative values")
            return _widen(np.sqrt(alo), np.sqrt(ahi))
        if name == "abs":
            contains0 = (alo <= 0.0) & (ahi >= 0.0)
            lo_r = np.where(contains0, 0.0, np.minimum(np.abs(alo), np.abs(ahi)))
            hi_r = np.maximum(np.abs(alo), np.abs(ahi))
            return lo_r, hi_r
    raise TypeError(f"not an expression node: {e!r}")


def eval_interval(e: "ex.Expr", iv: Interval) -> IntervalValue:
    """Sound enclosure of {e(x) : x in iv}."""
    lo, hi = enclose(e, np.array([iv.lo]), np.array([iv.hi]))
    return IntervalValue(float(lo[0]), float(hi[0]))


def prove_lower_bound(e: "ex.Expr", iv: Interval, tol: float, max_pieces: int):
    """Adaptive bisection proof that e >= -tol on iv.

    Returns ("proved", None), ("negative", (lo, hi)) with a piece whose
    enclosure is entirely below -tol, or ("unknown", None) when the piece
    budget runs out.
    """
    los = np.array([iv.lo])
    his = np.array([iv.hi])
    used = 1
    while los.size:
        elo, ehi = enclose(e, los, his)
        neg = ehi < -tol
        if neg.any():
            i = int(np.nonzero(neg)[0][0])
            return "negative", (float(los[i]), float(his[i]))
        unresolved = elo < -tol
        if not unresolved.any():
            return "proved", None
        n_split = int(unresolved.sum())
        if used + 2 * n_split > max_pieces:
            return "unknown", None
        used += 2 * n_split
        lo_u = los[unresolved]
        hi_u = his[unresolved]
        mid = 0.5 * (lo_u + hi_u)
        los = np.concatenate([lo_u, mid])
        his = np.concatenate([mid, hi_u])
    return "proved", None
