"""Expression trees for univariate real functions.

Grammar (whitespace insignificant)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := unary ("^" unary)?          -- right operand must be constant
    unary  := "-" unary | atom
    atom   := NUMBER | "x" | "pi" | FUNC "(" expr ")"
            | "max" "(" expr "," expr ")" | "(" expr ")"
    FUNC   := "sin"|"cos"|"exp"|"log"|"sqrt"|"abs"

Trees are immutable values; no simplification or constant folding happens
at parse time, so ``parse(format_expr(e))`` reproduces ``e`` structurally.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, NonDifferentiableError, ParseError


# ---------------------------------------------------------------------------
# AST nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    """base ** exponent.

    ``integer`` records whether the exponent is an integer; integer powers
    are defined for negative bases, real powers require a nonnegative base.
    """

    base: "Expr"
    exponent: float
    integer: bool


@dataclass(frozen=True)
class Max:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str  # one of sin cos exp log sqrt abs
    arg: "Expr"


Expr = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow, Max, Call]

X = Var()

_FUNC_NAMES = ("sin", "cos", "exp", "log", "sqrt", "abs")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self._skip_ws()

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        """Return (kind, value, offset) without consuming."""
        if self.pos >= len(self.text):
            return ("end", "", self.pos)
        ch = self.text[self.pos]
        if ch.isdigit() or ch == ".":
            m = _NUMBER_RE.match(self.text, self.pos)
            if m:
                return ("number", m.group(), self.pos)
        m = _IDENT_RE.match(self.text, self.pos)
        if m:
            return ("ident", m.group(), self.pos)
        if ch in "+-*/^(),":
            return ("op", ch, self.pos)
        raise ParseError(f"unexpected character {ch!r}", self.pos)

    def next(self):
        tok = self.peek()
        self.pos += len(tok[1])
        self._skip_ws()
        return tok


class _Parser:
    def __init__(self, text: str):
        if not text or not text.strip():
            raise ParseError("empty expression", 0)
        self.toks = _Tokenizer(text)

    def parse(self) -> Expr:
        e = self._expr()
        kind, val, off = self.toks.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}, expected operator or end of input", off)
        return e

    def _expect_op(self, op: str, what: str):
        kind, val, off = self.toks.peek()
        if kind != "op" or val != op:
            got = repr(val) if val else "end of input"
            raise ParseError(f"expected {what}, got {got}", off)
        self.toks.next()

    def _expr(self) -> Expr:
        e = self._term()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val in "+-":
                self.toks.next()
                rhs = self._term()
                e = Add(e, rhs) if val == "+" else Sub(e, rhs)
            else:
                return e

    def _term(self) -> Expr:
        e = self._factor()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val in "*/":
                self.toks.next()
                rhs = self._factor()
                e = Mul(e, rhs) if val == "*" else Div(e, rhs)
            else:
                return e

    def _factor(self) -> Expr:
        base = self._unary()
        kind, val, off = self.toks.peek()
        if kind == "op" and val == "^":
            self.toks.next()
            exp_tree = self._unary()
            v = _const_value(exp_tree)
            if v is None:
                raise ParseError("exponent must be a constant expression", off)
            return Pow(base, float(v), float(v).is_integer())
        return base

    def _unary(self) -> Expr:
        kind, val, _ = self.toks.peek()
        if kind == "op" and val == "-":
            self.toks.next()
            return Neg(self._unary())
        return self._atom()

    def _atom(self) -> Expr:
        kind, val, off = self.toks.peek()
        if kind == "number":
            self.toks.next()
            return Const(float(val))
        if kind == "ident":
            self.toks.next()
            if val == "x":
                return X
            if val == "pi":
                return Const(math.pi)
            if val == "max":
                self._expect_op("(", "'(' after max")
                a = self._expr()
                self._expect_op(",", "',' between max arguments")
                b = self._expr()
                self._expect_op(")", "')'")
                return Max(a, b)
            if val in _FUNC_NAMES:
                self._expect_op("(", f"'(' after {val}")
                a = self._expr()
                self._expect_op(")", "')'")
                return Call(val, a)
            raise ParseError(f"unknown identifier {val!r}", off)
        if kind == "op" and val == "(":
            self.toks.next()
            e = self._expr()
            self._expect_op(")", "')'")
            return e
        got = repr(val) if val else "end of input"
        raise ParseError(f"expected number, 'x', 'pi', function call or '(', got {got}", off)


def parse(text: str) -> Expr:
    """Parse expression text into a tree. Raises ParseError with offset."""
    return _Parser(text).parse()


def _const_value(e: Expr):
    """Value of a variable-free subtree, or None if it mentions x."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return None
    if isinstance(e, Neg):
        v = _const_value(e.arg)
        return None if v is None else -v
    if isinstance(e, (Add, Sub, Mul, Div)):
        a = _const_value(e.left)
        b = _const_value(e.right)
        if a is None or b is None:
            return None
        try:
            if isinstance(e, Add):
                return a + b
            if isinstance(e, Sub):
                return a - b
            if isinstance(e, Mul):
                return a * b
            return a / b
        except ZeroDivisionError:
            return None
    if isinstance(e, Pow):
        v = _const_value(e.base)
        if v is None:
            return None
        try:
            return evaluate(e, 0.0)
        except DomainError:
            return None
    if isinstance(e, Call):
        v = _const_value(e.arg)
        if v is None:
            return None
        try:
            return evaluate(e, 0.0)
        except DomainError:
            return None
    if isinstance(e, Max):
        a = _const_value(e.left)
        b = _const_value(e.right)
        if a is None or b is None:
            return None
        return max(a, b)
    return None


def parse_constant(text: str) -> float:
    """Parse a constant expression such as ``2*pi`` into a float."""
    e = parse(text)
    v = _const_value(e)
    if v is None:
        raise ParseError("expected a constant expression without x", 0)
    return float(v)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(e: Expr, x: float) -> float:
    """Evaluate at a point in 64-bit floating point, with domain checks."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(x)
    if isinstance(e, Add):
        return evaluate(e.left, x) + evaluate(e.right, x)
    if isinstance(e, Sub):
        return evaluate(e.left, x) - evaluate(e.right, x)
    if isinstance(e, Mul):
        return evaluate(e.left, x) * evaluate(e.right, x)
    if isinstance(e, Div):
        den = evaluate(e.right, x)
        if den == 0.0:
            raise DomainError(f"division by zero at x={x!r}")
        return evaluate(e.left, x) / den
    if isinstance(e, Neg):
        return -evaluate(e.arg, x)
    if isinstance(e, Pow):
        b = evaluate(e.base, x)
        p = e.exponent
        if e.integer:
            n = int(p)
            if b == 0.0 and n < 0:
                raise DomainError(f"zero base with negative exponent at x={x!r}")
            try:
                return float(b) ** n
            except OverflowError:
                raise DomainError(f"overflow in power at x={x!r}") from None
        if b < 0.0:
            raise DomainError(f"fractional power of negative base {b!r} at x={x!r}")
        if b == 0.0 and p < 0:
            raise DomainError(f"zero base with negative exponent at x={x!r}")
        return math.pow(b, p)
    if isinstance(e, Max):
        return max(evaluate(e.left, x), evaluate(e.right, x))
    if isinstance(e, Call):
        a = evaluate(e.arg, x)
        name = e.name
        if name == "sin":
            return math.sin(a)
        if name == "cos":
            return math.cos(a)
        if name == "exp":
            try:
                return math.exp(a)
            except OverflowError:
                raise DomainError(f"exp overflow at x={x!r}") from None
        if name == "log":
            if a <= 0.0:
                raise DomainError(f"log of non-positive value {a!r} at x={x!r}")
            return math.log(a)
        if name == "sqrt":
            if a < 0.0:
                raise DomainError(f"sqrt of negative value {a!r} at x={x!r}")
            return math.sqrt(a)
        if name == "abs":
            return abs(a)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Symbolic differentiation
# ---------------------------------------------------------------------------

_ZERO = Const(0.0)
_ONE = Const(1.0)


def _is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0.0


def _is_one(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 1.0


def _add(a: Expr, b: Expr) -> Expr:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_zero(b):
        return a
    if _is_zero(a):
        return Neg(b)
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_zero(a) or _is_zero(b):
        return _ZERO
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return Mul(a, b)


def _pow(base: Expr, p: float, integer: bool) -> Expr:
    if integer and p == 1.0:
        return base
    if p == 0.0:
        return _ONE
    return Pow(base, p, integer)


def is_differentiable(e: Expr) -> bool:
    """True when the tree has no kinked nodes (max, abs)."""
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, Neg):
        return is_differentiable(e.arg)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return is_differentiable(e.left) and is_differentiable(e.right)
    if isinstance(e, Pow):
        return is_differentiable(e.base)
    if isinstance(e, Max):
        return False
    if isinstance(e, Call):
        return e.name != "abs" and is_differentiable(e.arg)
    return False


def differentiate(e: Expr) -> Expr:
    """Exact symbolic derivative with respect to x."""
    if isinstance(e, Const):
        return _ZERO
    if isinstance(e, Var):
        return _ONE
    if isinstance(e, Neg):
        d = differentiate(e.arg)
        return _ZERO if _is_zero(d) else Neg(d)
    if isinstance(e, Add):
        return _add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Sub):
        return _sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Mul):
        da = differentiate(e.left)
        db = differentiate(e.right)
        return _add(_mul(da, e.right), _mul(e.left, db))
    if isinstance(e, Div):
        da = differentiate(e.left)
        db = differentiate(e.right)
        num = _sub(_mul(da, e.right), _mul(e.left, db))
        return Div(num, Pow(e.right, 2.0, True))
    if isinstance(e, Pow):
        db = differentiate(e.base)
        if e.exponent == 0.0 or _is_zero(db):
            return _ZERO
        inner = _mul(Const(e.exponent), _pow(e.base, e.exponent - 1.0, e.integer))
        return _mul(inner, db)
    if isinstance(e, Max):
        raise NonDifferentiableError("max node is not differentiable")
    if isinstance(e, Call):
        da = differentiate(e.arg)
        if e.name == "sin":
            return _mul(Call("cos", e.arg), da)
        if e.name == "cos":
            return Neg(_mul(Call("sin", e.arg), da))
        if e.name == "exp":
            return _mul(e, da)
        if e.name == "log":
            return Div(da, e.arg)
        if e.name == "sqrt":
            return Div(da, _mul(Const(2.0), e))
        if e.name == "abs":
            raise NonDifferentiableError("abs node is not differentiable")
    raise TypeError(f"not an expression node: {e!r}")


def second_derivative(e: Expr) -> Expr:
    return differentiate(differentiate(e))


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------

def _fmt_const(v: float) -> str:
    if v < 0:
        return "(-" + repr(-v) + ")"
    return repr(v)


def format_expr(e: Expr) -> str:
    """Fully parenthesized text; parse(format_expr(e)) equals e structurally."""
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return f"(-{format_expr(e.arg)})"
    if isinstance(e, Add):
        return f"({format_expr(e.left)}+{format_expr(e.right)})"
    if isinstance(e, Sub):
        return f"({format_expr(e.left)}-{format_expr(e.right)})"
    if isinstance(e, Mul):
        return f"({format_expr(e.left)}*{format_expr(e.right)})"
    if isinstance(e, Div):
        return f"({format_expr(e.left)}/{format_expr(e.right)})"
    if isinstance(e, Pow):
        if e.integer:
            exp_s = str(int(e.exponent))
        else:
            exp_s = repr(e.exponent)
        return f"({format_expr(e.base)}^{exp_s})"
    if isinstance(e, Max):
        return f"max({format_expr(e.left)},{format_expr(e.right)})"
    if isinstance(e, Call):
        return f"{e.name}({format_expr(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Compiled vectorized evaluation (internal fast path)
# ---------------------------------------------------------------------------

_NP_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

_COMPILE_CACHE: dict = {}


def _compile(e: Expr) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(e, Const):
        v = e.value

        def f(x, v=v):
            return np.full(np.shape(x), v)

        return f
    if isinstance(e, Var):
        return lambda x: x
    if isinstance(e, Neg):
        fa = _compile(e.arg)
        return lambda x: -fa(x)
    if isinstance(e, Add):
        fa, fb = _compile(e.left), _compile(e.right)
        return lambda x: fa(x) + fb(x)
    if isinstance(e, Sub):
        fa, fb = _compile(e.left), _compile(e.right)
        return lambda x: fa(x) - fb(x)
    if isinstance(e, Mul):
        fa, fb = _compile(e.left), _compile(e.right)
        return lambda x: fa(x) * fb(x)
    if isinstance(e, Div):
        fa, fb = _compile(e.left), _compile(e.right)
        return lambda x: fa(x) / fb(x)
    if isinstance(e, Pow):
        fa = _compile(e.base)
        p = e.exponent
        return lambda x: np.power(fa(x), p)
    if isinstance(e, Max):
        fa, fb = _compile(e.left), _compile(e.right)
        return lambda x: np.maximum(fa(x), fb(x))
    if isinstance(e, Call):
        fa = _compile(e.arg)
        fn = _NP_FUNCS[e.name]
        return lambda x: fn(fa(x))
    raise TypeError(f"not an expression node: {e!r}")


def compiled(e: Expr) -> Callable[[np.ndarray], np.ndarray]:
    f = _COMPILE_CACHE.get(e)
    if f is None:
        if len(_COMPILE_CACHE) > 4096:
            _COMPILE_CACHE.clear()
        f = _compile(e)
        _COMPILE_CACHE[e] = f
    return f


def eval_array(e: Expr, xs) -> np.ndarray:
    """Vectorized evaluation; raises DomainError if any value is non-finite."""
    xs = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        ys = compiled(e)(xs)
    ys = np.asarray(ys, dtype=float)
    if ys.shape != xs.shape:
        ys = np.broadcast_to(ys, xs.shape)
    bad = ~np.isfinite(ys)
    if bad.any():
        x_bad = float(np.atleast_1d(xs)[np.atleast_1d(bad)][0])
        raise DomainError(f"evaluation left the domain near x={x_bad!r}")
    return ys
