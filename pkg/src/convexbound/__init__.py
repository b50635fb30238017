"""Convexity certification and Hadamard-type product-bound verification
for univariate real functions on a closed interval."""

from .errors import (BudgetExceededError, DomainError, GenerationError,
                     NonDifferentiableError, ParseError, PreconditionError,
                     ToolkitError)
from .expr import (differentiate, evaluate, format_expr, parse, parse_constant,
                   second_derivative)
from .intervals import Interval, IntervalValue, eval_interval
from .convexity import (Certificate, LemmaSummary, MidpointViolation,
                        NegativeSecondDerivative, NegativeValue, Witness,
                        certify_convex, certify_nonnegative,
                        check_lemma_pointwise, falsify_convexity,
                        witness_violation, PROVED, DISPROVED, UNKNOWN)
from .quadrature import IntegralResult, integrate, mean_value
from .hadamard import (BoundReport, BoundSet, ChainMargins, check_integral_cs,
                       check_squares_chain, cs_endpoint_bound, hadamard_bounds,
                       margins_from_bounds, product_endpoint_bound,
                       verify_theorem)
from .explorer import (FAMILIES, CampaignSummary, NonconvexProduct,
                       ProductBoundFailure, falsify_eq2, find_nonconvex_product,
                       gen_convex, generate_pair, stress_theorem)

__version__ = "0.1.0"
