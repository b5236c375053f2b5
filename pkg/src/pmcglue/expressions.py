"""Recursive-descent parser and evaluator for curvature-function expressions.

Grammar (caret binds tightest, right-associative; unary minus next; then
* / ; then + -):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := number | ident | ident '(' expr ')' | '(' expr ')'

The only variables are the four rotation-invariant quantities p0, rho,
N0, Nrho, so every representable function is automatically invariant
under rotations fixing the x0-axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExprSyntaxError

VARIABLES = ("p0", "rho", "N0", "Nrho")
FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "abs")

_BIN_OPS = {"+", "-", "*", "/", "^"}


@dataclass(frozen=True)
class Lit:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


@dataclass(frozen=True)
class PMCExpr:
    """Expression tree over the invariant variables."""

    root: object
    source: str = ""


class _Scanner:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def take(self) -> str:
        c = self.peek()
        self.pos += 1
        return c

    def error(self, msg: str):
        raise ExprSyntaxError(msg, self.pos)


def _parse_number(sc: _Scanner):
    start = sc.pos
    src = sc.src
    i = sc.pos
    while i < len(src) and (src[i].isdigit() or src[i] == "."):
        i += 1
    if i < len(src) and src[i] in "eE":
        j = i + 1
        if j < len(src) and src[j] in "+-":
            j += 1
        if j < len(src) and src[j].isdigit():
            while j < len(src) and src[j].isdigit():
                j += 1
            i = j
    text = src[start:i]
    try:
        value = float(text)
    except ValueError:
        sc.error(f"bad number {text!r}")
    sc.pos = i
    return Lit(value)


def _parse_ident(sc: _Scanner):
    start = sc.pos
    src = sc.src
    i = sc.pos
    while i < len(src) and (src[i].isalnum() or src[i] == "_"):
        i += 1
    name = src[start:i]
    sc.pos = i
    if name in VARIABLES:
        return Var(name)
    if name in FUNCTIONS:
        sc.skip_ws()
        if sc.peek() != "(":
            sc.error(f"function {name!r} needs an argument list")
        sc.take()
        arg = _parse_expr(sc)
        if sc.peek() != ")":
            sc.error("expected ')'")
        sc.take()
        return Call(name, arg)
    sc.pos = start
    sc.error(f"unknown identifier {name!r}")


def _parse_base(sc: _Scanner):
    c = sc.peek()
    if c == "(":
        sc.take()
        node = _parse_expr(sc)
        if sc.peek() != ")":
            sc.error("expected ')'")
        sc.take()
        return node
    if c.isdigit() or c == ".":
        sc.skip_ws()
        return _parse_number(sc)
    if c.isalpha() or c == "_":
        sc.skip_ws()
        return _parse_ident(sc)
    sc.error("expected a number, identifier or '('")


def _parse_factor(sc: _Scanner):
    if sc.peek() == "-":
        sc.take()
        return Neg(_parse_factor(sc))
    node = _parse_base(sc)
    if sc.peek() == "^":
        sc.take()
        return BinOp("^", node, _parse_factor(sc))
    return node


def _parse_term(sc: _Scanner):
    node = _parse_factor(sc)
    while sc.peek() in ("*", "/"):
        op = sc.take()
        node = BinOp(op, node, _parse_factor(sc))
    return node


def _parse_expr(sc: _Scanner):
    node = _parse_term(sc)
    while sc.peek() in ("+", "-"):
        op = sc.take()
        node = BinOp(op, node, _parse_term(sc))
    return node


def parse_pmc(source: str) -> PMCExpr:
    """Parse ``source`` into an expression tree.

    Raises ExprSyntaxError (with byte offset) on malformed input.
    """
    sc = _Scanner(source)
    if sc.peek() == "":
        sc.error("empty expression")
    root = _parse_expr(sc)
    sc.skip_ws()
    if sc.pos != len(sc.src):
        sc.error(f"trailing input {sc.src[sc.pos:]!r}")
    return PMCExpr(root, source)


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _print_node(node, parent_prec: int) -> str:
    if isinstance(node, Lit):
        v = node.value
        if v == int(v) and abs(v) < 1e16:
            return str(int(v))
        return repr(v)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({_print_node(node.arg, 0)})"
    if isinstance(node, Neg):
        inner = _print_node(node.arg, _PRECEDENCE["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PRECEDENCE["neg"] else text
    if isinstance(node, BinOp):
        prec = _PRECEDENCE[node.op]
        # left-assoc except ^: tighten the opposite side
        if node.op == "^":
            left = _print_node(node.left, prec + 1)
            right = _print_node(node.right, prec)
        else:
            left = _print_node(node.left, prec)
            right = _print_node(node.right, prec + 1)
        text = f"{left} {node.op} {right}" if node.op in "+-" else f"{left}{node.op}{right}"
        return f"({text})" if parent_prec > prec else text
    raise TypeError(f"not an expression node: {node!r}")


def print_pmc(expr: PMCExpr) -> str:
    """Render a tree back to source; parse(print(e)) is structurally equal to e."""
    return _print_node(expr.root, 0)


def _as_array(x):
    return np.asarray(x, dtype=float)


def eval_expr(expr: PMCExpr, env: dict) -> np.ndarray | float:
    """Evaluate on scalars or numpy arrays of the invariant variables.

    ``env`` maps each of p0, rho, N0, Nrho to a scalar or array.
    Raises DomainError for log/sqrt of negatives, division by zero, or
    fractional powers of negatives.
    """
    return _eval(expr.root, env)


def _eval(node, env):
    if isinstance(node, Lit):
        return node.value
    if isinstance(node, Var):
        return _as_array(env[node.name])
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, Call):
        a = _eval(node.arg, env)
        if node.func == "sin":
            return np.sin(a)
        if node.func == "cos":
            return np.cos(a)
        if node.func == "exp":
            return np.exp(a)
        if node.func == "abs":
            return np.abs(a)
        if node.func == "log":
            if np.any(_as_array(a) <= 0):
                raise DomainError("log of a non-positive value")
            return np.log(a)
        if node.func == "sqrt":
            if np.any(_as_array(a) < 0):
                raise DomainError("sqrt of a negative value")
            return np.sqrt(a)
        raise TypeError(f"unknown function {node.func!r}")
    if isinstance(node, BinOp):
        left = _eval(node.left, env)
        right = _eval(node.right, env)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if np.any(_as_array(right) == 0):
                raise DomainError("division by zero")
            return left / right
        if node.op == "^":
            lv = _as_array(left)
            rv = _as_array(right)
            frac = rv != np.floor(rv)
            if np.any((lv < 0) & frac):
                raise DomainError("fractional power of a negative value")
            with np.errstate(divide="raise", invalid="raise"):
                try:
                    return np.power(left, right)
                except FloatingPointError as exc:
                    raise DomainError(f"power evaluation failed: {exc}") from exc
        raise TypeError(f"unknown operator {node.op!r}")
    raise TypeError(f"not an expression node: {node!r}")


def expr_constants_only(expr: PMCExpr) -> bool:
    """True if no variable occurs (useful for quick F == const checks)."""

    def walk(node):
        if isinstance(node, Var):
            return False
        if isinstance(node, Neg):
            return walk(node.arg)
        if isinstance(node, Call):
            return walk(node.arg)
        if isinstance(node, BinOp):
            return walk(node.left) and walk(node.right)
        return True

    return walk(expr.root)


def eval_expr_scalar(expr: PMCExpr, **vars) -> float:
    env = {name: vars.get(name, 0.0) for name in VARIABLES}
    out = _eval(expr.root, env)
    return float(out) if np.ndim(out) == 0 else float(np.asarray(out))


def structurally_equal(a: PMCExpr, b: PMCExpr) -> bool:
    return _eq(a.root, b.root)


def _eq(x, y) -> bool:
    if type(x) is not type(y):
        return False
    if isinstance(x, Lit):
        return x.value == y.value or (math.isnan(x.value) and math.isnan(y.value))
    if isinstance(x, Var):
        return x.name == y.name
    if isinstance(x, Neg):
        return _eq(x.arg, y.arg)
    if isinstance(x, Call):
        return x.func == y.func and _eq(x.arg, y.arg)
    if isinstance(x, BinOp):
        return x.op == y.op and _eq(x.left, y.left) and _eq(x.right, y.right)
    return False
