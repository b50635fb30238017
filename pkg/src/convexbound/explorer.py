"""Seeded random generation of nonnegative convex functions and stress
campaigns over the product-bound theorem.

Every campaign is deterministic: trial i draws from a generator seeded with
(campaign seed, i), so summaries are byte-for-byte reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import expr as ex
from .convexity import (DISPROVED, Witness, certify_convex,
                        certify_nonnegative, check_lemma_pointwise)
from .errors import GenerationError, PreconditionError, ToolkitError
from .hadamard import (check_integral_cs, cs_endpoint_bound, product_endpoint_bound,
                       verify_theorem)
from .intervals import Interval
from .quadrature import mean_value

FAMILIES = ("nonneg_quadratic", "squared_affine", "exp_affine",
            "max_affine_offset", "scaled_sum")

_COEFF_RANGE = 4.0
_EXP_ARG_CAP = 13.0  # keeps generated magnitudes below 1e6
_GEN_ATTEMPTS = 40
_GEN_MAX_PIECES = 2 ** 10
_STRESS_MAX_PIECES = 2 ** 9


def _affine_expr(p: float, q: float) -> ex.Expr:
    return ex.Add(ex.Mul(ex.Const(p), ex.X), ex.Const(q))


def _draw(family: str, iv: Interval, rng: np.random.Generator) -> ex.Expr:
    if family == "nonneg_quadratic":
        a = float(rng.uniform(0.1, _COEFF_RANGE))
        c = float(rng.uniform(-_COEFF_RANGE, _COEFF_RANGE))
        b = float(rng.uniform(0.0, _COEFF_RANGE))
        shifted = ex.Sub(ex.X, ex.Const(c))
        return ex.Add(ex.Mul(ex.Const(a), ex.Pow(shifted, 2.0, True)), ex.Const(b))
    if family == "squared_affine":
        p = float(rng.uniform(0.2, _COEFF_RANGE)) * (1.0 if rng.random() < 0.5 else -1.0)
        q = float(rng.uniform(-_COEFF_RANGE, _COEFF_RANGE))
        return ex.Pow(_affine_expr(p, q), 2.0, True)
    if family == "exp_affine":
        p = float(rng.uniform(-_COEFF_RANGE, _COEFF_RANGE))
        q = float(rng.uniform(-_COEFF_RANGE, _COEFF_RANGE))
        m = max(abs(p * iv.lo + q), abs(p * iv.hi + q))
        if m > _EXP_ARG_CAP:
            s = _EXP_ARG_CAP / m
            p *= s
            q *= s
        return ex.Call("exp", _affine_expr(p, q))
    if family == "max_affine_offset":
        p1, q1, p2, q2 = (float(rng.uniform(-_COEFF_RANGE, _COEFF_RANGE))
                          for _ in range(4))
        lo_val = max(p1 * iv.lo + q1, p2 * iv.lo + q2)
        hi_val = max(p1 * iv.hi + q1, p2 * iv.hi + q2)
        m = min(lo_val, hi_val)
        if p1 != p2:
            xc = (q2 - q1) / (p1 - p2)
            if iv.lo < xc < iv.hi:
                m = min(m, p1 * xc + q1)
        offset = 0.01 - m if m < 0.01 else 0.0
        return ex.Add(ex.Max(_affine_expr(p1, q1), _affine_expr(p2, q2)),
                      ex.Const(offset))
    if family == "scaled_sum":
        base = FAMILIES[:4]
        f1 = _draw(base[int(rng.integers(len(base)))], iv, rng)
        f2 = _draw(base[int(rng.integers(len(base)))], iv, rng)
        c1 = float(rng.uniform(0.0, 3.0))
        c2 = float(rng.uniform(0.0, 3.0))
        return ex.Add(ex.Mul(ex.Const(c1), f1), ex.Mul(ex.Const(c2), f2))
    raise PreconditionError(f"unknown family {family!r}")


def _certified(e: ex.Expr, iv: Interval) -> bool:
    return (certify_convex(e, iv, _GEN_MAX_PIECES).proved
            and certify_nonnegative(e, iv, _GEN_MAX_PIECES).proved)


def gen_convex(family: str, iv: Interval, seed: int) -> ex.Expr:
    """Draw one certified nonnegative convex function of the given family."""
    if family not in FAMILIES:
        raise PreconditionError(f"unknown family {family!r}")
    for attempt in range(_GEN_ATTEMPTS):
        rng = np.random.default_rng((seed, attempt))
        e = _draw(family, iv, rng)
        if _certified(e, iv):
            return e
    raise GenerationError(
        f"family {family!r} failed certification {_GEN_ATTEMPTS} times (seed {seed})")


def _draw_certified(iv: Interval, rng: np.random.Generator) -> ex.Expr:
    for _ in range(_GEN_ATTEMPTS):
        family = FAMILIES[int(rng.integers(len(FAMILIES)))]
        e = _draw(family, iv, rng)
        if _certified(e, iv):
            return e
    raise GenerationError("random pair generation exhausted its retry budget")


def generate_pair(iv: Interval, seed: int, index: int) -> Tuple[ex.Expr, ex.Expr]:
    """The (u, v) pair used by campaign trial `index`; deterministic."""
    rng = np.random.default_rng((seed, index))
    u = _draw_certified(iv, rng)
    v = _draw_certified(iv, rng)
    return u, v


@dataclass
class CampaignSummary:
    trials: int
    seed: int
    interval: Interval
    theorem_violations: int
    eq2_failures_found: int
    nonconvex_products_found: int
    worst_margin: float
    example_witnesses: List[dict] = field(default_factory=list)
    integral_cs_min_margin: float = math.inf
    lemma_violations: int = 0
    errors: int = 0

    def to_dict(self):
        return {
            "trials": self.trials,
            "seed": self.seed,
            "interval": {"lo": self.interval.lo, "hi": self.interval.hi},
            "theorem_violations": self.theorem_violations,
            "eq2_failures_found": self.eq2_failures_found,
            "nonconvex_products_found": self.nonconvex_products_found,
            "worst_margin": self.worst_margin,
            "example_witnesses": list(self.example_witnesses),
            "integral_cs_min_margin": self.integral_cs_min_margin,
            "lemma_violations": self.lemma_violations,
            "errors": self.errors,
        }


def stress_theorem(trials: int, iv: Interval, seed: int,
                   lemma_trials: int = 32) -> CampaignSummary:
    """Generate `trials` certified pairs, verify the theorem on each, and
    collect side statistics on the integral Cauchy-Schwarz margin and the
    pointwise lemma suite."""
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    summary = CampaignSummary(trials=trials, seed=seed, interval=iv,
                              theorem_violations=0, eq2_failures_found=0,
                              nonconvex_products_found=0, worst_margin=math.inf)
    for i in range(trials):
        try:
            u, v = generate_pair(iv, seed, i)
            rep = verify_theorem(u, v, iv, max_pieces=_STRESS_MAX_PIECES)
        except ToolkitError:
            summary.errors += 1
            continue
        margin = rep.margins["theorem"]
        if margin < summary.worst_margin:
            summary.worst_margin = margin
        if rep.theorem_holds is False:
            summary.theorem_violations += 1
        pc = rep.certificates["product_convex"]
        if pc.verdict == DISPROVED:
            summary.nonconvex_products_found += 1
            if len(summary.example_witnesses) < 5 and pc.witness is not None:
                summary.example_witnesses.append({
                    "u": rep.u_text, "v": rep.v_text,
                    "witness": pc.witness.to_dict(),
                })
            pe = rep.bound_set.product_endpoint
            mean = rep.bound_set.mean_integral
            if mean > pe + max(1e-9, 1e-9 * abs(pe)):
                summary.eq2_failures_found += 1
        csm = check_integral_cs(u, v, iv)
        if csm < summary.integral_cs_min_margin:
            summary.integral_cs_min_margin = csm
        if lemma_trials > 0:
            summary.lemma_violations += check_lemma_pointwise(
                u, iv, lemma_trials, seed=i).violations
    return summary


@dataclass(frozen=True)
class NonconvexProduct:
    u: ex.Expr
    v: ex.Expr
    interval: Interval
    witness: Witness

    def to_dict(self):
        return {
            "u": ex.format_expr(self.u),
            "v": ex.format_expr(self.v),
            "interval": {"lo": self.interval.lo, "hi": self.interval.hi},
            "witness": self.witness.to_dict(),
        }


_EX_U = ex.parse("x^2")
_EX_V = ex.parse("(1-x)^2")
_EX_IV = Interval(0.0, 1.0)


def find_nonconvex_product(trials: int, iv: Interval,
                           seed: int) -> List[NonconvexProduct]:
    """Pairs of certified convex functions whose product is disproved convex.
    Trial zero is the fixed pair x^2, (1-x)^2 on [0, 1]."""
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    out: List[NonconvexProduct] = []
    c0 = certify_convex(ex.Mul(_EX_U, _EX_V), _EX_IV)
    if c0.verdict == DISPROVED and c0.witness is not None:
        out.append(NonconvexProduct(_EX_U, _EX_V, _EX_IV, c0.witness))
    for i in range(1, trials):
        try:
            u, v = generate_pair(iv, seed, i)
        except ToolkitError:
            continue
        c = certify_convex(ex.Mul(u, v), iv, _STRESS_MAX_PIECES)
        if c.verdict == DISPROVED and c.witness is not None:
            out.append(NonconvexProduct(u, v, iv, c.witness))
    return out


@dataclass(frozen=True)
class ProductBoundFailure:
    """An instance where the endpoint product bound fails because the
    product is not convex, while the Cauchy-Schwarz bound still holds."""
    u: ex.Expr
    v: ex.Expr
    interval: Interval
    mean_integral: float
    product_endpoint: float
    cs_endpoint: float
    witness: Optional[Witness]

    @property
    def eq4_margin(self) -> float:
        return self.cs_endpoint - self.mean_integral

    def to_dict(self):
        return {
            "u": ex.format_expr(self.u),
            "v": ex.format_expr(self.v),
            "interval": {"lo": self.interval.lo, "hi": self.interval.hi},
            "mean_integral": self.mean_integral,
            "product_endpoint": self.product_endpoint,
            "cs_endpoint": self.cs_endpoint,
            "eq4_margin": self.eq4_margin,
            "witness": self.witness.to_dict() if self.witness else None,
        }


def falsify_eq2(trials: int, iv: Interval, seed: int) -> List[ProductBoundFailure]:
    """Among pairs with non-convex product, report those whose mean integral
    exceeds the endpoint product bound. Trial zero is the fixed pair
    x^2, (1-x)^2 on [0, 1]."""
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    out: List[ProductBoundFailure] = []

    def consider(u, v, interval):
        c = certify_convex(ex.Mul(u, v), interval, _STRESS_MAX_PIECES)
        if c.verdict != DISPROVED:
            return
        mean = mean_value(ex.Mul(u, v), interval)
        pe = product_endpoint_bound(u, v, interval)
        if mean > pe + max(1e-9, 1e-9 * abs(pe)):
            cs = cs_endpoint_bound(u, v, interval)
            out.append(ProductBoundFailure(u, v, interval, mean, pe, cs, c.witness))

    consider(_EX_U, _EX_V, _EX_IV)
    for i in range(1, trials):
        try:
            u, v = generate_pair(iv, seed, i)
            consider(u, v, iv)
        except ToolkitError:
            continue
    return out
