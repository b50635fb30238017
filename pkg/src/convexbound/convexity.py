"""Certify or refute convexity and nonnegativity on an interval.

Proofs come from a structural rule calculus over the tree (cheap, syntactic)
or from sound interval enclosures of the value / second derivative; sampling
can only disprove, producing a replayable witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import expr as ex
from .errors import DomainError, PreconditionError
from .intervals import Interval, prove_lower_bound

PROVED = "proved"
DISPROVED = "disproved"
UNKNOWN = "unknown"

REL_TOL = 1e-9

_SCAN_POINTS = 2049
_DEFAULT_MAX_PIECES = 2 ** 14
_FALSIFY_SAMPLES = 4000


@dataclass(frozen=True)
class MidpointViolation:
    x: float
    y: float
    k: float
    lhs: float
    rhs: float

    def to_dict(self):
        return {"kind": "midpoint_violation", "x": self.x, "y": self.y,
                "k": self.k, "lhs": self.lhs, "rhs": self.rhs}


@dataclass(frozen=True)
class NegativeSecondDerivative:
    x: float
    value: float

    def to_dict(self):
        return {"kind": "negative_second_derivative", "x": self.x, "value": self.value}


@dataclass(frozen=True)
class NegativeValue:
    x: float
    value: float

    def to_dict(self):
        return {"kind": "negative_value", "x": self.x, "value": self.value}


Witness = Union[MidpointViolation, NegativeSecondDerivative, NegativeValue]


@dataclass(frozen=True)
class Certificate:
    verdict: str  # proved | disproved | unknown
    method: Optional[str] = None
    witness: Optional[Witness] = None

    @property
    def proved(self) -> bool:
        return self.verdict == PROVED

    def to_dict(self):
        d = {"verdict": self.verdict, "method": self.method}
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        return d


@dataclass(frozen=True)
class LemmaSummary:
    violations: int
    max_slack: float

    def to_dict(self):
        return {"violations": self.violations, "max_slack": self.max_slack}


def _tol_for(*vals: float) -> float:
    m = 1.0
    for v in vals:
        a = abs(v)
        if a > m:
            m = a
    return REL_TOL * m


# ---------------------------------------------------------------------------
# Structural rule calculus
# ---------------------------------------------------------------------------

def _const_of(e: ex.Expr):
    if isinstance(e, ex.Const):
        return e.value
    if isinstance(e, ex.Neg) and isinstance(e.arg, ex.Const):
        return -e.arg.value
    return None


def _is_affine(e: ex.Expr) -> bool:
    if isinstance(e, (ex.Const, ex.Var)):
        return True
    if isinstance(e, ex.Neg):
        return _is_affine(e.arg)
    if isinstance(e, (ex.Add, ex.Sub)):
        return _is_affine(e.left) and _is_affine(e.right)
    if isinstance(e, ex.Mul):
        if _const_of(e.left) is not None:
            return _is_affine(e.right)
        if _const_of(e.right) is not None:
            return _is_affine(e.left)
        return False
    if isinstance(e, ex.Div):
        c = _const_of(e.right)
        return c is not None and c != 0.0 and _is_affine(e.left)
    return False


class _Rules:
    """One certification call's memoized structural analysis."""

    def __init__(self, iv: Interval):
        self.iv = iv
        self.convex_memo: dict = {}
        self.nonneg_memo: dict = {}

    def convex(self, e: ex.Expr) -> Optional[str]:
        if e in self.convex_memo:
            return self.convex_memo[e]
        self.convex_memo[e] = None  # guard against pathological recursion
        r = self._convex(e)
        self.convex_memo[e] = r
        return r

    def _convex(self, e: ex.Expr) -> Optional[str]:
        if _is_affine(e):
            return "affine"
        if isinstance(e, ex.Pow) and e.integer and e.exponent >= 2:
            n = int(e.exponent)
            if n % 2 == 0 and _is_affine(e.base):
                return "even_power_affine"
            if self.convex(e.base) and self.nonneg(e.base):
                # the square-of-nonnegative-convex lemma (and its n >= 2
                # extension through monotone composition)
                return "square_nonneg_convex" if n == 2 else "power_nonneg_convex"
            return None
        if isinstance(e, ex.Mul):
            if e.left == e.right and self.convex(e.left) and self.nonneg(e.left):
                return "square_nonneg_convex"
            for c_side, f_side in ((e.left, e.right), (e.right, e.left)):
                c = _const_of(c_side)
                if c is not None and c >= 0.0 and self.convex(f_side):
                    return "nonneg_scale"
            return None
        if isinstance(e, ex.Max):
            if self.convex(e.left) and self.convex(e.right):
                return "max"
            return None
        if isinstance(e, ex.Add):
            if self.convex(e.left) and self.convex(e.right):
                return "sum"
            return None
        if isinstance(e, ex.Sub):
            if self.convex(e.left) and _is_affine(e.right):
                return "sum"
            return None
        if isinstance(e, ex.Div):
            c = _const_of(e.right)
            if c is not None and c > 0.0 and self.convex(e.left):
                return "nonneg_scale"
            return None
        if isinstance(e, ex.Call):
            if e.name == "exp" and _is_affine(e.arg):
                return "exp_affine"
            if e.name == "abs" and _is_affine(e.arg):
                return "abs_affine"
        return None

    def nonneg(self, e: ex.Expr) -> Optional[str]:
        if e in self.nonneg_memo:
            return self.nonneg_memo[e]
        self.nonneg_memo[e] = None
        r = self._nonneg(e)
        self.nonneg_memo[e] = r
        return r

    def _nonneg(self, e: ex.Expr) -> Optional[str]:
        if _is_affine(e):
            # affine is nonnegative on [a,b] iff both endpoint values are
            try:
                va = ex.evaluate(e, self.iv.lo)
                vb = ex.evaluate(e, self.iv.hi)
            except DomainError:
                return None
            return "affine_endpoints" if va >= 0.0 and vb >= 0.0 else None
        if isinstance(e, ex.Pow):
            if e.integer:
                n = int(e.exponent)
                if n % 2 == 0:
                    return "even_power"
                if n > 0 and self.nonneg(e.base):
                    return "odd_power_nonneg"
                return None
            return "real_power_domain"  # defined only for nonnegative bases
        if isinstance(e, ex.Mul):
            if e.left == e.right:
                return "square"
            if self.nonneg(e.left) and self.nonneg(e.right):
                return "product"
            return None
        if isinstance(e, ex.Div):
            if self.nonneg(e.left) and self.nonneg(e.right):
                return "ratio"
            return None
        if isinstance(e, ex.Add):
            if self.nonneg(e.left) and self.nonneg(e.right):
                return "sum"
            return None
        if isinstance(e, ex.Max):
            if self.nonneg(e.left) or self.nonneg(e.right):
                return "max"
            return None
        if isinstance(e, ex.Call):
            if e.name in ("exp", "sqrt", "abs"):
                return e.name
        return None


# ---------------------------------------------------------------------------
# Scanning helpers (disproof only)
# ---------------------------------------------------------------------------

def _refine_min(e: ex.Expr, lo: float, hi: float, x0: float, rounds: int = 5) -> float:
    """Zoom a sampling window around x0 towards the local minimum of e."""
    w = (hi - lo) / (_SCAN_POINTS - 1)
    x = x0
    for _ in range(rounds):
        a = max(lo, x - w)
        b = min(hi, x + w)
        xs = np.linspace(a, b, 65)
        try:
            ys = ex.eval_array(e, xs)
        except DomainError:
            return x
        x = float(xs[int(np.argmin(ys))])
        w = (b - a) / 32.0
    return x


def _scan_min(e: ex.Expr, iv: Interval):
    """(argmin, min, tol) of e over a dense grid; DomainError propagates."""
    xs = np.linspace(iv.lo, iv.hi, _SCAN_POINTS)
    ys = ex.eval_array(e, xs)
    i = int(np.argmin(ys))
    tol = REL_TOL * max(1.0, float(np.max(np.abs(ys))))
    return float(xs[i]), float(ys[i]), tol


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def certify_nonnegative(e: ex.Expr, iv: Interval,
                        max_pieces: int = _DEFAULT_MAX_PIECES) -> Certificate:
    rules = _Rules(iv)
    rule = rules.nonneg(e)
    if rule:
        return Certificate(PROVED, f"structural:{rule}")

    x0, vmin, tol = _scan_min(e, iv)
    if vmin < -tol:
        x = _refine_min(e, iv.lo, iv.hi, x0)
        v = ex.evaluate(e, x)
        if v < -tol:
            return Certificate(DISPROVED, "sampling", NegativeValue(x, v))

    try:
        status, piece = prove_lower_bound(e, iv, tol, max_pieces)
    except DomainError:
        status, piece = "unknown", None
    if status == "proved":
        return Certificate(PROVED, "interval_enclosure")
    if status == "negative":
        x = 0.5 * (piece[0] + piece[1])
        v = ex.evaluate(e, x)
        if v < -tol:
            return Certificate(DISPROVED, "sampling", NegativeValue(x, v))
    return Certificate(UNKNOWN, None)


def certify_convex(e: ex.Expr, iv: Interval,
                   max_pieces: int = _DEFAULT_MAX_PIECES) -> Certificate:
    rules = _Rules(iv)
    rule = rules.convex(e)
    if rule:
        return Certificate(PROVED, f"structural:{rule}")

    if ex.is_differentiable(e):
        d2 = ex.second_derivative(e)
        try:
            x0, vmin, tol = _scan_min(d2, iv)
        except DomainError:
            d2 = None
        if d2 is not None:
            if vmin < -tol:
                x = _refine_min(d2, iv.lo, iv.hi, x0)
                v = ex.evaluate(d2, x)
                if v < -tol:
                    return Certificate(DISPROVED, "sampling",
                                       NegativeSecondDerivative(x, v))
            try:
                status, piece = prove_lower_bound(d2, iv, tol, max_pieces)
            except DomainError:
                status, piece = "unknown", None
            if status == "proved":
                return Certificate(PROVED, "interval_second_derivative")
            if status == "negative":
                x = 0.5 * (piece[0] + piece[1])
                v = ex.evaluate(d2, x)
                if v < -tol:
                    return Certificate(DISPROVED, "sampling",
                                       NegativeSecondDerivative(x, v))

    w = falsify_convexity(e, iv, _FALSIFY_SAMPLES, seed=0)
    if w is not None:
        return Certificate(DISPROVED, "sampling", w)
    return Certificate(UNKNOWN, None)


def falsify_convexity(e: ex.Expr, iv: Interval, samples: int,
                      seed: int) -> Optional[Witness]:
    """Search for a midpoint-convexity violation; deterministic per seed."""
    if samples < 1:
        raise PreconditionError("samples must be >= 1")
    # fixed probes first: the endpoint midpoint pair, then a coarse grid
    grid = np.linspace(iv.lo, iv.hi, 9)
    gx, gy = np.meshgrid(grid, grid)
    gx = gx.ravel()
    gy = gy.ravel()
    ks = np.array([0.25, 0.5, 0.75])
    fixed_x = np.concatenate([[iv.lo], np.repeat(gx, ks.size)])
    fixed_y = np.concatenate([[iv.hi], np.repeat(gy, ks.size)])
    fixed_k = np.concatenate([[0.5], np.tile(ks, gx.size)])

    rng = np.random.default_rng(seed)
    rx = rng.uniform(iv.lo, iv.hi, samples)
    ry = rng.uniform(iv.lo, iv.hi, samples)
    rk = rng.uniform(0.0, 1.0, samples)

    xs = np.concatenate([fixed_x, rx])
    ys = np.concatenate([fixed_y, ry])
    kk = np.concatenate([fixed_k, rk])
    mids = kk * xs + (1.0 - kk) * ys

    fx = ex.eval_array(e, xs)
    fy = ex.eval_array(e, ys)
    fm = ex.eval_array(e, mids)
    rhs = kk * fx + (1.0 - kk) * fy
    tol = REL_TOL * np.maximum(1.0, np.maximum(np.abs(fm), np.abs(rhs)))
    bad = np.nonzero(fm - rhs > tol)[0]
    if bad.size == 0:
        return None
    i = int(bad[0])
    x, y, k = float(xs[i]), float(ys[i]), float(kk[i])
    lhs = ex.evaluate(e, k * x + (1.0 - k) * y)
    r = k * ex.evaluate(e, x) + (1.0 - k) * ex.evaluate(e, y)
    return MidpointViolation(x, y, k, lhs, r)


def witness_violation(e: ex.Expr, w: Witness) -> float:
    """Replay a witness through scalar evaluation; positive means it holds up."""
    if isinstance(w, MidpointViolation):
        lhs = ex.evaluate(e, w.k * w.x + (1.0 - w.k) * w.y)
        rhs = w.k * ex.evaluate(e, w.x) + (1.0 - w.k) * ex.evaluate(e, w.y)
        return lhs - rhs
    if isinstance(w, NegativeSecondDerivative):
        return -ex.evaluate(ex.second_derivative(e), w.x)
    if isinstance(w, NegativeValue):
        return -ex.evaluate(e, w.x)
    raise TypeError(f"not a witness: {w!r}")


def check_lemma_pointwise(u: ex.Expr, iv: Interval, trials: int,
                          seed: int) -> LemmaSummary:
    """Check the square-of-nonnegative-convex proof-chain inequalities
    pointwise at seeded random (x, y, k) triples.

    Requires u to carry proved nonnegativity and convexity certificates.
    """
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    if not certify_nonnegative(u, iv).proved:
        raise PreconditionError("u must have a proved nonnegativity certificate")
    if not certify_convex(u, iv).proved:
        raise PreconditionError("u must have a proved convexity certificate")

    rng = np.random.default_rng(seed)
    xs = rng.uniform(iv.lo, iv.hi, trials)
    ys = rng.uniform(iv.lo, iv.hi, trials)
    ks = rng.uniform(0.0, 1.0, trials)
    ux = ex.eval_array(u, xs)
    uy = ex.eval_array(u, ys)
    um = ex.eval_array(u, ks * xs + (1.0 - ks) * ys)

    violations = 0
    max_slack = 0.0
    pairs = (
        (2.0 * ux * uy, ux ** 2 + uy ** 2),                       # 2ab <= a^2+b^2
        ((ks * ux + (1.0 - ks) * uy) ** 2,
         ks * ux ** 2 + (1.0 - ks) * uy ** 2),                    # squared mix
        (um ** 2, ks * ux ** 2 + (1.0 - ks) * uy ** 2),           # convexity of u^2
    )
    for lhs, rhs in pairs:
        tol = REL_TOL * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        violations += int(np.count_nonzero(lhs > rhs + tol))
        slack = float(np.max(rhs - lhs))
        if slack > max_slack:
            max_slack = slack
    return LemmaSummary(violations, max_slack)
