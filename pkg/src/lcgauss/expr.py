"""Scalar expression language in the variables u and v.

Profile curves and immersion components are written in a small language
with the grammar

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

so ^ binds tighter than unary minus (``-u^2`` is ``-(u^2)``), which
binds tighter than * and /, which bind tighter than + and -.  ^ is
right associative, everything else left associative.  Function
application always requires parentheses.

Expressions are immutable trees; evaluation is pure; differentiation is
exact and symbolic.  Powers with a non-integer exponent require a
positive base at evaluation time; integer exponents are evaluated by
repeated multiplication and therefore accept any base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from .errors import DomainError, ParseError

__all__ = [
    "Expr", "Const", "Var", "Unary", "Binary",
    "parse", "evaluate", "differentiate", "simplify", "render",
    "compile_expr", "const",
]

UNARY_FUNCTIONS = (
    "sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt",
    "arcsin", "arccos", "arctan", "arcsinh", "arccosh",
)
VARIABLES = ("u", "v")
NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}

KNOWN_IDENTIFIERS = tuple(sorted(UNARY_FUNCTIONS + VARIABLES + tuple(NAMED_CONSTANTS)))


@dataclass(frozen=True)
class Const:
    value: float

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Unary:
    op: str            # a function name or "neg"
    arg: "Expr"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Binary:
    op: str            # one of + - * / ^
    left: "Expr"
    right: "Expr"

    def __str__(self):
        return render(self)


Expr = Union[Const, Var, Unary, Binary]


def const(value: float) -> Expr:
    """Constant node; negative values become neg(positive) so every tree
    prints to text the parser maps back to the identical tree."""
    v = float(value)
    if v == 0.0:
        return Const(0.0)
    if v < 0.0:
        return Unary("neg", Const(-v))
    return Const(v)


# ---------------------------------------------------------------------------
# lexer / parser

_OPS = "+-*/^()"


def _lex(text: str) -> list[tuple[str, str, int]]:
    """Tokens as (kind, text, offset); kinds: num, ident, op, end."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            toks.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            toks.append(("num", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(i, f"unexpected character {c!r}",
                         frozenset({"number", "identifier", "operator"}))
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, message, expected):
        raise ParseError(self.peek()[2], message, frozenset(expected))

    def parse_expr(self):
        node = self.parse_term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.advance()[1]
            node = Binary(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.advance()[1]
            node = Binary(op, node, self.parse_factor())
        return node

    def parse_factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Unary("neg", self.parse_factor())
        node = self.parse_base()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            node = Binary("^", node, self.parse_factor())
        return node

    def parse_base(self):
        kind, text, offset = self.peek()
        if kind == "num":
            self.advance()
            return Const(float(text))
        if kind == "ident":
            self.advance()
            if self.peek()[:2] == ("op", "("):
                if text not in UNARY_FUNCTIONS:
                    raise ParseError(
                        offset,
                        f"unknown function {text!r}; known names: "
                        + ", ".join(KNOWN_IDENTIFIERS),
                        frozenset(UNARY_FUNCTIONS))
                self.advance()
                arg = self.parse_expr()
                self.expect(")")
                return Unary(text, arg)
            if text in VARIABLES:
                return Var(text)
            if text in NAMED_CONSTANTS:
                return Const(NAMED_CONSTANTS[text])
            raise ParseError(
                offset,
                f"unknown identifier {text!r}; known names: "
                + ", ".join(KNOWN_IDENTIFIERS),
                frozenset(KNOWN_IDENTIFIERS))
        if (kind, text) == ("op", "("):
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            return node
        self.fail(f"expected a number, name or '(', got {text!r}" if text
                  else "unexpected end of input",
                  {"number", "identifier", "("})

    def expect(self, op):
        if self.peek()[:2] != ("op", op):
            self.fail(f"expected {op!r}", {op})
        self.advance()


def parse(text: str) -> Expr:
    """Parse expression text; raises ParseError with a byte offset."""
    p = _Parser(_lex(text))
    node = p.parse_expr()
    if p.peek()[0] != "end":
        p.fail(f"trailing input {p.peek()[1]!r}", {"end of input"})
    return node


# ---------------------------------------------------------------------------
# evaluation

def _ipow(x: float, n: int) -> float:
    if n < 0:
        if x == 0.0:
            raise ZeroDivisionError("zero raised to a negative power")
        return 1.0 / _ipow(x, -n)
    r, b = 1.0, x
    while n:
        if n & 1:
            r *= b
        n >>= 1
        if n:
            b *= b
    return r


def _pow_float(x: float, y: float) -> float:
    """Power with the language's semantics: integer exponents by repeated
    multiplication (any base), fractional exponents need base > 0."""
    n = round(y)
    if y == n and abs(n) <= 2 ** 31:
        return _ipow(x, int(n))
    if x <= 0.0:
        raise ValueError("fractional power of a non-positive base")
    return math.pow(x, y)


_UNARY_EVAL: dict[str, Callable[[float], float]] = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "sinh": math.sinh, "cosh": math.cosh, "tanh": math.tanh,
    "exp": math.exp, "arctan": math.atan, "arcsinh": math.asinh,
    "neg": lambda x: -x,
}


def _apply_unary(op: str, x: float, node: Expr) -> float:
    if op == "sqrt":
        if x < 0.0:
            raise DomainError(render(node), f"sqrt of negative value {x:.6g}")
        return math.sqrt(x)
    if op == "log":
        if x <= 0.0:
            raise DomainError(render(node), f"log of non-positive value {x:.6g}")
        return math.log(x)
    if op == "arccosh":
        if x < 1.0:
            raise DomainError(render(node), f"arccosh below 1: {x:.6g}")
        return math.acosh(x)
    if op == "arcsin":
        if abs(x) > 1.0:
            raise DomainError(render(node), f"arcsin outside [-1,1]: {x:.6g}")
        return math.asin(x)
    if op == "arccos":
        if abs(x) > 1.0:
            raise DomainError(render(node), f"arccos outside [-1,1]: {x:.6g}")
        return math.acos(x)
    fn = _UNARY_EVAL[op]
    try:
        return fn(x)
    except (ValueError, OverflowError) as exc:
        raise DomainError(render(node), f"{op} failed: {exc}") from exc


def evaluate(e: Expr, u: float, v: float) -> float:
    """Evaluate at (u, v); DomainError names the offending sub-expression."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return u if e.name == "u" else v
    if isinstance(e, Unary):
        val = _apply_unary(e.op, evaluate(e.arg, u, v), e)
    else:
        a = evaluate(e.left, u, v)
        b = evaluate(e.right, u, v)
        op = e.op
        try:
            if op == "+":
                val = a + b
            elif op == "-":
                val = a - b
            elif op == "*":
                val = a * b
            elif op == "/":
                if b == 0.0:
                    raise ZeroDivisionError("division by zero")
                val = a / b
            else:
                val = _pow_float(a, b)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(render(e), str(exc)) from exc
    if not math.isfinite(val):
        raise DomainError(render(e), "non-finite result")
    return val


# ---------------------------------------------------------------------------
# compiled fast path (used for grid evaluation; falls back to evaluate()
# for error attribution)

_COMPILE_NS = {name: _UNARY_EVAL.get(name) for name in _UNARY_EVAL}
_COMPILE_NS.update({
    "sqrt": math.sqrt, "log": math.log, "arcsin": math.asin,
    "arccos": math.acos, "arccosh": math.acosh, "_pow": _pow_float,
})


def _pysrc(e: Expr) -> str:
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{_pysrc(e.arg)})"
        return f"{e.op}({_pysrc(e.arg)})"
    if e.op == "^":
        return f"_pow({_pysrc(e.left)}, {_pysrc(e.right)})"
    return f"({_pysrc(e.left)} {e.op} {_pysrc(e.right)})"


def compile_expr(e: Expr) -> Callable[[float, float], float]:
    """Compile to a plain Python callable (u, v) -> float.

    Domain failures surface as ValueError / ZeroDivisionError /
    OverflowError; callers wanting a named DomainError should re-run
    evaluate() on failure.
    """
    src = f"lambda u, v: {_pysrc(e)}"
    return eval(src, dict(_COMPILE_NS))  # noqa: S307 - source built from our own AST


# ---------------------------------------------------------------------------
# differentiation

def _has_var(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Unary):
        return _has_var(e.arg)
    if isinstance(e, Binary):
        return _has_var(e.left) or _has_var(e.right)
    return False


def _const_value(e: Expr) -> float | None:
    """Value of a variable-free subtree, or None."""
    if _has_var(e):
        return None
    try:
        return evaluate(e, 0.0, 0.0)
    except DomainError:
        return None


def _neg(a):
    return Unary("neg", a)


def _add(a, b):
    return Binary("+", a, b)


def _sub(a, b):
    return Binary("-", a, b)


def _mul(a, b):
    return Binary("*", a, b)


def _div(a, b):
    return Binary("/", a, b)


def _pow(a, b):
    return Binary("^", a, b)


def _d(e: Expr, var: str) -> Expr:
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0 if e.name == var else 0.0)
    if isinstance(e, Unary):
        f = e.arg
        df = _d(f, var)
        op = e.op
        if op == "neg":
            return _neg(df)
        if op == "sin":
            return _mul(Unary("cos", f), df)
        if op == "cos":
            return _neg(_mul(Unary("sin", f), df))
        if op == "tan":
            return _div(df, _pow(Unary("cos", f), Const(2.0)))
        if op == "sinh":
            return _mul(Unary("cosh", f), df)
        if op == "cosh":
            return _mul(Unary("sinh", f), df)
        if op == "tanh":
            return _div(df, _pow(Unary("cosh", f), Const(2.0)))
        if op == "exp":
            return _mul(e, df)
        if op == "log":
            return _div(df, f)
        if op == "sqrt":
            return _div(df, _mul(Const(2.0), e))
        if op == "arcsin":
            return _div(df, Unary("sqrt", _sub(Const(1.0), _pow(f, Const(2.0)))))
        if op == "arccos":
            return _neg(_div(df, Unary("sqrt", _sub(Const(1.0), _pow(f, Const(2.0))))))
        if op == "arctan":
            return _div(df, _add(Const(1.0), _pow(f, Const(2.0))))
        if op == "arcsinh":
            return _div(df, Unary("sqrt", _add(_pow(f, Const(2.0)), Const(1.0))))
        if op == "arccosh":
            return _div(df, Unary("sqrt", _sub(_pow(f, Const(2.0)), Const(1.0))))
        raise AssertionError(f"unknown unary op {op!r}")
    op = e.op
    l, r = e.left, e.right
    dl, dr = _d(l, var), _d(r, var)
    if op == "+":
        return _add(dl, dr)
    if op == "-":
        return _sub(dl, dr)
    if op == "*":
        return _add(_mul(dl, r), _mul(l, dr))
    if op == "/":
        return _div(_sub(_mul(dl, r), _mul(l, dr)), _pow(r, Const(2.0)))
    # power rule; constant exponent keeps validity for negative bases
    c = _const_value(r)
    if c is not None:
        return _mul(_mul(const(c), _pow(l, const(c - 1.0))), dl)
    return _mul(e, _add(_mul(dr, Unary("log", l)), _div(_mul(r, dl), l)))


def differentiate(e: Expr, var: str) -> Expr:
    """Exact symbolic derivative with respect to 'u' or 'v'."""
    if var not in VARIABLES:
        raise ValueError(f"variable must be one of {VARIABLES}, got {var!r}")
    return simplify(_d(e, var))


# ---------------------------------------------------------------------------
# simplification: value-preserving local rewrites only

def _const_of(e: Expr) -> float | None:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Unary) and e.op == "neg":
        inner = _const_of(e.arg)
        return None if inner is None else -inner
    return None


def simplify(e: Expr) -> Expr:
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Unary):
        a = simplify(e.arg)
        if e.op == "neg":
            if isinstance(a, Unary) and a.op == "neg":
                return a.arg
            ca = _const_of(a)
            if ca is not None:
                return const(-ca)
            return Unary("neg", a)
        ca = _const_of(a)
        if ca is not None:
            try:
                val = _apply_unary(e.op, ca, e)
            except DomainError:
                return Unary(e.op, a)
            if math.isfinite(val):
                return const(val)
        return Unary(e.op, a)

    l = simplify(e.left)
    r = simplify(e.right)
    op = e.op
    cl, cr = _const_of(l), _const_of(r)
    if cl is not None and cr is not None:
        try:
            if op == "+":
                val = cl + cr
            elif op == "-":
                val = cl - cr
            elif op == "*":
                val = cl * cr
            elif op == "/":
                val = cl / cr
            else:
                val = _pow_float(cl, cr)
            if math.isfinite(val):
                return const(val)
        except (ValueError, ZeroDivisionError, OverflowError):
            pass
        return Binary(op, l, r)
    if op == "+":
        if cl == 0.0:
            return r
        if cr == 0.0:
            return l
    elif op == "-":
        if cr == 0.0:
            return l
        if cl == 0.0:
            return simplify(Unary("neg", r))
    elif op == "*":
        if cl == 0.0 or cr == 0.0:
            return Const(0.0)
        if cl == 1.0:
            return r
        if cr == 1.0:
            return l
        if cl == -1.0:
            return simplify(Unary("neg", r))
        if cr == -1.0:
            return simplify(Unary("neg", l))
    elif op == "/":
        if cr == 1.0:
            return l
        if cr == -1.0:
            return simplify(Unary("neg", l))
    elif op == "^":
        if cr == 1.0:
            return l
        if cr == 0.0:
            return Const(1.0)
        if cl == 1.0:
            return Const(1.0)
    return Binary(op, l, r)


# ---------------------------------------------------------------------------
# rendering (inverse of parse up to structural identity)

_PREC_ATOM = 9
_PREC_POW = 4
_PREC_NEG = 3
_PREC_MULDIV = 2
_PREC_ADDSUB = 1

_BIN_PREC = {"+": _PREC_ADDSUB, "-": _PREC_ADDSUB,
             "*": _PREC_MULDIV, "/": _PREC_MULDIV, "^": _PREC_POW}


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return _BIN_PREC[e.op]
    if isinstance(e, Unary) and e.op == "neg":
        return _PREC_NEG
    return _PREC_ATOM


def render(e: Expr) -> str:
    """Parseable text; parse(render(e)) is structurally equal to e."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            inner = render(e.arg)
            if isinstance(e.arg, Binary) and _BIN_PREC[e.arg.op] < _PREC_POW:
                inner = f"({inner})"
            elif isinstance(e.arg, Unary) and e.arg.op == "neg":
                inner = f"({inner})"
            return f"-{inner}"
        return f"{e.op}({render(e.arg)})"
    lvl = _BIN_PREC[e.op]
    ls = render(e.left)
    rs = render(e.right)
    if e.op == "^":
        if _prec(e.left) <= lvl:
            ls = f"({ls})"
        if _prec(e.right) < lvl:
            rs = f"({rs})"
    else:
        if _prec(e.left) < lvl:
            ls = f"({ls})"
        if _prec(e.right) <= lvl or (isinstance(e.right, Unary) and e.right.op == "neg"):
            rs = f"({rs})"
    return f"{ls} {e.op} {rs}" if e.op in "+-" else f"{ls}{e.op}{rs}"
