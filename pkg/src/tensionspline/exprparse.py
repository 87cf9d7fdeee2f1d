"""Scalar expressions in ``x`` and ``eps``.

Coefficient functions and exact solutions in problem files are written in a
small arithmetic language::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

so ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.  Legal names are the
variables ``x`` and ``eps``, the constants ``pi`` and ``e``, and the one-argument
functions in :data:`FUNCTIONS`.  There is no implicit multiplication.

Parsed trees are immutable and evaluation is a pure function of the tree and
the two bindings.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import EvalError, ExprSyntaxError, UnknownIdentifier

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Const",
    "Neg",
    "BinOp",
    "Call",
    "FUNCTIONS",
    "parse",
    "evaluate",
    "evaluate_many",
    "to_source",
]

VARIABLES = ("x", "eps")
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}

# exponents up to this magnitude are expanded into repeated multiplication
MAX_INTEGER_POWER = 64


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Neg, BinOp, Call]


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(
                f"unexpected character {source[pos]!r}", pos, source
            )
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, text, pos = self.peek()
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"expected {expected}, found {found}", pos, self.source)

    def expect(self, text):
        if self.peek()[1] != text or self.peek()[0] == "end":
            self.fail(repr(text))
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "name":
            self.advance()
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text in VARIABLES:
                return Var(text)
            if text in CONSTANTS:
                return Const(text)
            raise UnknownIdentifier(f"unknown identifier {text!r}", pos, self.source)
        if (kind, text) == ("op", "("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("number, name or '('")


def parse(source: str) -> Expr:
    """Parse expression text into an immutable syntax tree.

    Raises :class:`ExprSyntaxError` with the offending position for malformed
    input and :class:`UnknownIdentifier` for names outside the language.
    """
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0, source)
    return _Parser(source).parse()


def _power(base, exponent, node):
    if exponent == int(exponent) and abs(exponent) <= MAX_INTEGER_POWER:
        k = int(abs(exponent))
        result = 1.0
        factor = base
        # binary exponentiation; same multiplication order for equal inputs
        while k:
            if k & 1:
                result *= factor
            factor *= factor
            k >>= 1
        if exponent < 0:
            if result == 0.0:
                raise EvalError(f"{to_source(node)}: zero base {base!r} to negative power")
            result = 1.0 / result
        return result
    if base > 0.0:
        try:
            return math.exp(exponent * math.log(base))
        except OverflowError:
            raise EvalError(f"{to_source(node)}: overflow in {base!r}^{exponent!r}") from None
    if base == 0.0 and exponent > 0.0:
        return 0.0
    raise EvalError(
        f"{to_source(node)}: base {base!r} with non-integer exponent {exponent!r}"
    )


def _eval(node, x, eps):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x if node.name == "x" else eps
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.operand, x, eps)
    if isinstance(node, BinOp):
        left = _eval(node.left, x, eps)
        right = _eval(node.right, x, eps)
        op = node.op
        if op == "+":
            value = left + right
        elif op == "-":
            value = left - right
        elif op == "*":
            value = left * right
        elif op == "/":
            if right == 0.0:
                raise EvalError(f"{to_source(node)}: division by zero")
            value = left / right
        else:
            value = _power(left, right, node)
    elif isinstance(node, Call):
        arg = _eval(node.arg, x, eps)
        if node.func == "log" and arg <= 0.0:
            raise EvalError(f"{to_source(node)}: log of non-positive value {arg!r}")
        if node.func == "sqrt" and arg < 0.0:
            raise EvalError(f"{to_source(node)}: sqrt of negative value {arg!r}")
        try:
            value = FUNCTIONS[node.func](arg)
        except (OverflowError, ValueError) as exc:
            raise EvalError(f"{to_source(node)}: {exc} for argument {arg!r}") from None
    else:
        raise TypeError(f"not an expression node: {node!r}")
    if not math.isfinite(value):
        raise EvalError(f"{to_source(node)}: non-finite result {value!r}")
    return value


def evaluate(expr: Expr, x: float, eps: float) -> float:
    """Evaluate ``expr`` with the variables bound to ``x`` and ``eps``.

    Undefined or non-finite intermediate values raise :class:`EvalError`
    naming the subexpression, never a silent NaN.
    """
    return _eval(expr, float(x), float(eps))


def evaluate_many(expr: Expr, xs, eps: float):
    """Evaluate at each point of ``xs``; returns a float64 array."""
    import numpy as np

    eps = float(eps)
    return np.array([_eval(expr, float(x), eps) for x in xs], dtype=np.float64)


def to_source(expr: Expr) -> str:
    """Render a tree back to text that parses to an equivalent tree.

    Output is fully parenthesised and literals use ``repr`` so re-parsing
    reproduces every value bit for bit.
    """
    if isinstance(expr, Num):
        text = repr(expr.value)
        return f"(-{text[1:]})" if expr.value < 0 or text.startswith("-") else text
    if isinstance(expr, (Var, Const)):
        return expr.name
    if isinstance(expr, Neg):
        return f"(-{to_source(expr.operand)})"
    if isinstance(expr, BinOp):
        return f"({to_source(expr.left)} {expr.op} {to_source(expr.right)})"
    if isinstance(expr, Call):
        return f"{expr.func}({to_source(expr.arg)})"
    raise TypeError(f"not an expression node: {expr!r}")
