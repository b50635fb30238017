"""Independent numerical oracles used to freeze expected test values.

These deliberately avoid the package's own quadrature: Romberg integration
is a fixed-grid composite trapezoid scheme with Richardson extrapolation.
"""

import math


def romberg(f, a, b, levels=18, tol=1e-13):
    """Romberg integration of a callable on [a, b]."""
    h = b - a
    table = [[0.5 * h * (f(a) + f(b))]]
    for i in range(1, levels):
        h *= 0.5
        n = 2 ** (i - 1)
        s = sum(f(a + (2 * j - 1) * h) for j in range(1, n + 1))
        row = [0.5 * table[i - 1][0] + h * s]
        for k in range(1, i + 1):
            factor = 4.0 ** k
            row.append((factor * row[k - 1] - table[i - 1][k - 1]) / (factor - 1.0))
        table.append(row)
        if i > 3 and abs(row[-1] - table[i - 1][-1]) < tol * max(1.0, abs(row[-1])):
            return row[-1]
    return table[-1][-1]


def finite_diff(f, x, h):
    """Central finite difference derivative."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


# Frozen before the build from an independent high-precision computation
# (and reproducible with romberg above): integral of (sin x + 8)/x over
# [pi, 2*pi].
SINX_PLUS8_OVER_X_INTEGRAL = 5.1113919686297248

# Exact-antiderivative corpus for quadrature honesty checks:
# (expression text, lo, hi, exact integral)
EXACT_INTEGRALS = [
    ("x^4", 0.0, 1.0, 1.0 / 5.0),
    ("x^2*(1-x)^2", 0.0, 1.0, 1.0 / 30.0),
    ("sin(x)", 0.0, math.pi, 2.0),
    ("cos(x)", 0.0, math.pi / 2.0, 1.0),
    ("exp(x)", 0.0, 1.0, math.e - 1.0),
    ("1/x", 1.0, 2.0, math.log(2.0)),
    ("x", 0.0, 2.0, 2.0),
    ("sqrt(x)", 0.0, 1.0, 2.0 / 3.0),
    ("log(x)", 1.0, math.e, 1.0),
    ("x^3-2*x+1", -1.0, 2.0, 3.75),
]
