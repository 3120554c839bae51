"""A small expression language for functions f(t) and shift formulas.

Grammar (lowest to highest precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right associative
    atom    := NUMBER | NAME | NAME '(' args ')' | '(' expr ')'
    cond    := expr ('>=' | '>' | '=' | '<=' | '<') expr

Comparisons are only legal as the first argument of ``piecewise``.
Variables are ``t``, ``s`` and ``n``; constants are ``pi`` and ``e``.

>>> evaluate(parse("2 + 3 * 4"), {})
14.0
>>> unparse(parse("piecewise(t>=0, s*t, t/s)"))
'piecewise(t >= 0, s * t, t / s)'
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

__all__ = [
    "Expression", "Num", "Const", "Var", "Unary", "Binary", "Compare",
    "Piecewise", "ParseError", "EvalError", "DivisionByZero", "LogDomainError",
    "SqrtDomainError", "ZeroPowerError", "PowerDomainError", "UnboundVariable",
    "NonFiniteError", "parse", "evaluate", "unparse", "compile_expr", "function_of",
    "VARIABLES", "FUNCTIONS",
]

VARIABLES = frozenset({"t", "s", "n"})
CONSTANTS = {"pi": math.pi, "e": math.e}
UNARY_FUNCS = ("abs", "sqrt", "ln", "exp", "sin", "cos")
FUNCTIONS = frozenset(UNARY_FUNCS + ("pow", "piecewise"))
COMPARE_OPS = (">=", "<=", ">", "<", "=")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EvalError(ArithmeticError):
    """Base class of all evaluation failures."""


class DivisionByZero(EvalError):
    pass


class LogDomainError(EvalError):
    pass


class SqrtDomainError(EvalError):
    pass


class ZeroPowerError(EvalError):
    pass


class PowerDomainError(EvalError):
    """Negative base raised to a non-integer power."""


class NonFiniteError(EvalError):
    pass


class UnboundVariable(EvalError, KeyError):
    pass


# --------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or a name from UNARY_FUNCS
    arg: "Expression"

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Expression"
    right: "Expression"

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Expression"
    right: "Expression"

    def __str__(self):
        return unparse(self)


@dataclass(frozen=True)
class Piecewise:
    cond: Compare
    then: "Expression"
    otherwise: "Expression"

    def __str__(self):
        return unparse(self)


Expression = Union[Num, Const, Var, Unary, Binary, Piecewise]


# ------------------------------------------------------------------ lexing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>>=|<=|[-+*/^(),<>=])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.tok
        if text != value or kind == "end":
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, text, pos = self.tok
        if kind != "end":
            if kind in ("number", "name") or text == "(":
                raise ParseError(
                    f"unexpected {text!r} (implicit multiplication is not allowed)", pos)
            if text in COMPARE_OPS:
                raise ParseError("comparison outside piecewise condition", pos)
            raise ParseError(f"unexpected {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.advance()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.advance()[1]
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self):
        kind, text, pos = self.tok
        if kind == "number":
            self.advance()
            return Num(float(text))
        if kind == "name":
            self.advance()
            if self.tok[1] == "(" and self.tok[0] == "op":
                return self.call(text, pos)
            if text in VARIABLES:
                return Var(text)
            if text in CONSTANTS:
                return Const(text)
            if text in FUNCTIONS:
                raise ParseError(f"function {text!r} needs arguments", pos)
            raise ParseError(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {text!r}", pos)

    def call(self, name, pos):
        if name not in FUNCTIONS:
            raise ParseError(f"unknown function {name!r}", pos)
        self.expect("(")
        if name == "piecewise":
            cond = self.condition()
            self.expect(",")
            then = self.expr()
            self.expect(",")
            otherwise = self.expr()
            self.expect(")")
            return Piecewise(cond, then, otherwise)
        args = [self.expr()]
        while self.tok[1] == "," and self.tok[0] == "op":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        arity = 2 if name == "pow" else 1
        if len(args) != arity:
            raise ParseError(f"{name} takes {arity} argument(s), got {len(args)}", pos)
        if name == "pow":
            return Binary("^", args[0], args[1])
        return Unary(name, args[0])

    def condition(self):
        left = self.expr()
        kind, text, pos = self.tok
        if kind != "op" or text not in COMPARE_OPS:
            raise ParseError("expected comparison in piecewise condition", pos)
        self.advance()
        return Compare(text, left, self.expr())


def parse(text: str) -> Expression:
    """Parse ``text`` into an expression tree.

    Raises :class:`ParseError` (carrying ``position``) on malformed input or
    unknown identifiers.
    """
    return _Parser(text).parse()


# -------------------------------------------------------------- evaluation


def _pow(base: float, exponent: float) -> float:
    if base == 0.0 and exponent < 0:
        raise ZeroPowerError("0 raised to a negative power")
    if base < 0 and exponent != int(exponent):
        nearest = round(exponent)
        # lattice exponents such as ln(t)/ln(q) arrive with rounding noise
        if abs(exponent - nearest) > 1e-9 * max(1.0, abs(exponent)):
            raise PowerDomainError(f"negative base {base!r} to fractional power {exponent!r}")
        exponent = float(nearest)
    try:
        return math.pow(base, exponent)
    except OverflowError:
        raise NonFiniteError("overflow in power") from None


def _ln(x):
    if x <= 0:
        raise LogDomainError(f"ln of non-positive value {x!r}")
    return math.log(x)


def _sqrt(x):
    if x < 0:
        raise SqrtDomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


def _exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        raise NonFiniteError("overflow in exp") from None


def _div(a, b):
    if b == 0:
        raise DivisionByZero("division by zero")
    return a / b


_UNARY = {
    "neg": lambda x: -x,
    "abs": abs,
    "sqrt": _sqrt,
    "ln": _ln,
    "exp": _exp,
    "sin": math.sin,
    "cos": math.cos,
}

_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "^": _pow,
}

_COMPARE = {
    ">=": lambda a, b: a >= b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    "<": lambda a, b: a < b,
    "=": lambda a, b: a == b,
}


def _check(value):
    if not math.isfinite(value):
        raise NonFiniteError(f"non-finite value {value!r}")
    return value


def compile_expr(e: Expression):
    """Turn an AST into a closure ``env -> float``; faster than `evaluate` in loops."""
    if isinstance(e, Num):
        v = float(e.value)
        return lambda env: v
    if isinstance(e, Const):
        v = CONSTANTS[e.name]
        return lambda env: v
    if isinstance(e, Var):
        name = e.name

        def var(env):
            try:
                return float(env[name])
            except KeyError:
                raise UnboundVariable(name) from None
        return var
    if isinstance(e, Unary):
        f, a = _UNARY[e.op], compile_expr(e.arg)
        return lambda env: _check(f(a(env)))
    if isinstance(e, Binary):
        f, a, b = _BINARY[e.op], compile_expr(e.left), compile_expr(e.right)
        return lambda env: _check(f(a(env), b(env)))
    if isinstance(e, Piecewise):
        c = e.cond
        cmp, l, r = _COMPARE[c.op], compile_expr(c.left), compile_expr(c.right)
        then, other = compile_expr(e.then), compile_expr(e.otherwise)
        return lambda env: then(env) if cmp(l(env), r(env)) else other(env)
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expression, env: Mapping[str, float]) -> float:
    return compile_expr(e)(env)


def function_of(f, var: str = "t"):
    """One-argument float function from expression text, an AST or a callable.

    Callables are wrapped so that non-finite results raise
    :class:`NonFiniteError` like compiled expressions do.
    """
    if isinstance(f, str):
        f = parse(f)
    if callable(f):
        fn = f
        return lambda x: _check(float(fn(x)))
    unknown = free_variables(f) - {var}
    if unknown:
        raise UnboundVariable(", ".join(sorted(unknown)))
    code = compile_expr(f)
    return lambda x: code({var: x})


def free_variables(e) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Unary):
        return free_variables(e.arg)
    if isinstance(e, (Binary, Compare)):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, Piecewise):
        return free_variables(e.cond) | free_variables(e.then) | free_variables(e.otherwise)
    return set()


# ---------------------------------------------------------------- printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}
_ATOM = 5


def _prec(e) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary) and e.op == "neg":
        return _PREC["neg"]
    if isinstance(e, Num) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return 0
    return _ATOM


def _fmt_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _wrap(e, needs):
    text = unparse(e)
    return f"({text})" if needs else text


def unparse(e: Expression) -> str:
    """Canonical text with minimal parentheses; ``parse(unparse(x)) == x``."""
    if isinstance(e, Num):
        return _fmt_number(e.value)
    if isinstance(e, (Const, Var)):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            # unary minus binds looser than '^' and tighter than '*'
            return "-" + _wrap(e.arg, _prec(e.arg) < _PREC["neg"])
        return f"{e.op}({unparse(e.arg)})"
    if isinstance(e, Binary):
        p = _PREC[e.op]
        if e.op == "^":
            left = _wrap(e.left, _prec(e.left) <= p)
            right = _wrap(e.right, _prec(e.right) < _PREC["neg"])
        else:
            left = _wrap(e.left, _prec(e.left) < p)
            right = _wrap(e.right, _prec(e.right) <= p)
        return f"{left} {e.op} {right}"
    if isinstance(e, Compare):
        return f"{unparse(e.left)} {e.op} {unparse(e.right)}"
    if isinstance(e, Piecewise):
        return f"piecewise({unparse(e.cond)}, {unparse(e.then)}, {unparse(e.otherwise)})"
    raise TypeError(f"not an expression node: {e!r}")
