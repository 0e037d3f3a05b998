"""Energy spectrum of the working medium.

The engine's level ladder is ``E_n = lam * f(n) + alpha * g(n)`` for
``n = 0 .. levels-1``.  ``f`` carries the externally controlled scale
``lam`` and must take pairwise distinct values on the retained levels;
``g`` is an arbitrary deformation whose strength ``alpha`` breaks the
scale invariance of the bare ladder.  Both are given in a tiny
arithmetic expression language over the level index ``n``.

Expression grammar (ASCII): numeric literals, the variable ``n``, the
binary operators ``+ - * /``, exponentiation ``^`` (right associative,
binds tightest), unary minus (binds tighter than ``* /``), the unary
functions ``exp``, ``log``, ``sqrt``, and parentheses.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "LevelExpr",
    "ExpressionError",
    "EvaluationError",
    "DegenerateSpectrumError",
    "parse_level_expr",
    "expr_to_text",
    "eval_expr",
    "eval_levels",
    "SpectrumModel",
    "energy_levels",
    "perturbation_ratio",
]


# ---------------------------------------------------------------------------
# abstract syntax


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    """The level index ``n``."""


@dataclass(frozen=True)
class Neg:
    operand: "LevelExpr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "LevelExpr"
    right: "LevelExpr"


@dataclass(frozen=True)
class Call:
    func: str  # exp, log or sqrt
    arg: "LevelExpr"


LevelExpr = Union[Num, Var, Neg, BinOp, Call]

_FUNCTIONS = {"exp": np.exp, "log": np.log, "sqrt": np.sqrt}


class ExpressionError(ValueError):
    """Malformed expression text.  Carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class EvaluationError(ValueError):
    """Expression does not evaluate to a finite real at some level index."""

    def __init__(self, message: str, level_index: int):
        super().__init__(message)
        self.level_index = level_index


class DegenerateSpectrumError(ValueError):
    """The scaling observable f takes equal values on two retained levels."""


# ---------------------------------------------------------------------------
# lexer / parser

_NUM_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _NUM_RE.match(text, pos)
        if m:
            tokens.append(("num", m.group(), _byte_offset(text, pos)))
            pos = m.end()
            continue
        m = _IDENT_RE.match(text, pos)
        if m:
            tokens.append(("ident", m.group(), _byte_offset(text, pos)))
            pos = m.end()
            continue
        if ch in "+-*/^(),":
            tokens.append(("op", ch, _byte_offset(text, pos)))
            pos += 1
            continue
        raise ExpressionError(f"unexpected character {ch!r}", _byte_offset(text, pos))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], text: str):
        self.tokens = tokens
        self.pos = 0
        self.end_offset = len(text.encode("utf-8"))

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> tuple[str, str, int]:
        tok = self._peek()
        if tok is None:
            raise ExpressionError("unexpected end of expression", self.end_offset)
        self.pos += 1
        return tok

    def _match_op(self, chars: str) -> str | None:
        tok = self._peek()
        if tok is not None and tok[0] == "op" and tok[1] in chars:
            self.pos += 1
            return tok[1]
        return None

    def _expect_op(self, char: str) -> None:
        tok = self._peek()
        if tok is None:
            raise ExpressionError(f"expected {char!r}", self.end_offset)
        if tok[0] != "op" or tok[1] != char:
            raise ExpressionError(f"expected {char!r}, got {tok[1]!r}", tok[2])
        self.pos += 1

    def parse(self) -> LevelExpr:
        expr = self.additive()
        tok = self._peek()
        if tok is not None:
            raise ExpressionError(f"unexpected token {tok[1]!r}", tok[2])
        return expr

    def additive(self) -> LevelExpr:
        expr = self.multiplicative()
        while (op := self._match_op("+-")) is not None:
            expr = BinOp(op, expr, self.multiplicative())
        return expr

    def multiplicative(self) -> LevelExpr:
        expr = self.unary()
        while (op := self._match_op("*/")) is not None:
            expr = BinOp(op, expr, self.unary())
        return expr

    def unary(self) -> LevelExpr:
        if self._match_op("-") is not None:
            return Neg(self.unary())
        return self.power()

    def power(self) -> LevelExpr:
        base = self.primary()
        if self._match_op("^") is not None:
            # right associative; the exponent may carry its own sign
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> LevelExpr:
        tok = self._next()
        kind, text, offset = tok
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            if text in _FUNCTIONS:
                self._expect_op("(")
                args = [self.additive()]
                while self._match_op(",") is not None:
                    args.append(self.additive())
                self._expect_op(")")
                if len(args) != 1:
                    raise ExpressionError(
                        f"{text} expects 1 argument, got {len(args)}", offset
                    )
                return Call(text, args[0])
            if text == "n":
                return Var()
            nxt = self._peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "(":
                raise ExpressionError(f"unknown function {text!r}", offset)
            raise ExpressionError(f"unknown identifier {text!r}", offset)
        if kind == "op" and text == "(":
            expr = self.additive()
            self._expect_op(")")
            return expr
        raise ExpressionError(f"expected a value, got {text!r}", offset)


def parse_level_expr(text: str) -> LevelExpr:
    """Parse expression text into its syntax tree."""
    if not text or text.isspace():
        raise ExpressionError("empty expression", 0)
    return _Parser(_tokenize(text), text).parse()


# ---------------------------------------------------------------------------
# printing

# precedence levels: + - (1), * / (2), unary minus (3), ^ (4), atoms (5)
_BIN_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(expr: LevelExpr) -> int:
    if isinstance(expr, BinOp):
        return _BIN_PREC[expr.op]
    if isinstance(expr, Neg):
        return 3
    return 5


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _render(expr: LevelExpr, min_prec: int) -> str:
    text = _render_bare(expr)
    if _prec(expr) < min_prec:
        return f"({text})"
    return text


def _render_bare(expr: LevelExpr) -> str:
    if isinstance(expr, Num):
        return _format_number(expr.value)
    if isinstance(expr, Var):
        return "n"
    if isinstance(expr, Neg):
        return "-" + _render(expr.operand, 3)
    if isinstance(expr, Call):
        return f"{expr.func}({_render(expr.arg, 1)})"
    if isinstance(expr, BinOp):
        if expr.op == "^":
            # base must be an atom; exponent sits in unary position
            return f"{_render(expr.left, 5)}^{_render(expr.right, 3)}"
        p = _BIN_PREC[expr.op]
        return f"{_render(expr.left, p)} {expr.op} {_render(expr.right, p + 1)}"
    raise TypeError(f"not a level expression: {expr!r}")


def expr_to_text(expr: LevelExpr) -> str:
    """Render a syntax tree back to text.

    The output reparses to an identical tree, with parentheses inserted
    only where precedence demands them.
    """
    return _render(expr, 0)


# ---------------------------------------------------------------------------
# evaluation


def eval_expr(expr: LevelExpr, n):
    """Evaluate ``expr`` with the level index bound to ``n`` (scalar or array)."""
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Var):
        return n
    if isinstance(expr, Neg):
        return -eval_expr(expr.operand, n)
    if isinstance(expr, Call):
        return _FUNCTIONS[expr.func](eval_expr(expr.arg, n))
    if isinstance(expr, BinOp):
        left = eval_expr(expr.left, n)
        right = eval_expr(expr.right, n)
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        if expr.op == "*":
            return left * right
        if expr.op == "/":
            return left / right
        return np.power(left, right)
    raise TypeError(f"not a level expression: {expr!r}")


def eval_levels(expr: LevelExpr, n_levels: int) -> np.ndarray:
    """Tabulate ``expr`` on the integer indices ``0 .. n_levels-1``.

    Raises :class:`EvaluationError` if any entry is non-finite (division
    by zero, log of a non-positive value, overflow, ...).
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    indices = np.arange(n_levels, dtype=float)
    with np.errstate(all="ignore"):
        values = np.asarray(eval_expr(expr, indices), dtype=float)
    if values.ndim == 0:
        values = np.full(n_levels, float(values))
    bad = ~np.isfinite(values)
    if bad.any():
        k = int(np.argmax(bad))
        raise EvaluationError(
            f"expression {expr_to_text(expr)!r} is not finite at n={k}", k
        )
    return values


# ---------------------------------------------------------------------------
# spectrum model


@dataclass(frozen=True)
class SpectrumModel:
    """Truncated level ladder ``E_n = lam*f(n) + alpha*g(n)``, n = 0..levels-1.

    ``f`` must be non-degenerate on the retained levels; this is what lets
    a pure rescaling of ``lam`` map one thermal state onto another.  The
    tables ``f_values`` / ``g_values`` are computed once at construction
    and frozen.
    """

    f: LevelExpr
    g: LevelExpr
    alpha: float
    levels: int
    f_values: np.ndarray = field(init=False, repr=False, compare=False)
    g_values: np.ndarray = field(init=False, repr=False, compare=False)
    min_f_gap: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.levels < 2:
            raise ValueError(f"levels must be >= 2, got {self.levels}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        f_vals = eval_levels(self.f, self.levels)
        g_vals = eval_levels(self.g, self.levels)
        order = np.argsort(f_vals)
        gaps = np.diff(f_vals[order])
        if not np.all(gaps > 0):
            j = int(np.argmin(gaps))
            n1, n2 = int(order[j]), int(order[j + 1])
            raise DegenerateSpectrumError(
                f"f takes equal values at n={min(n1, n2)} and n={max(n1, n2)}"
            )
        f_vals.setflags(write=False)
        g_vals.setflags(write=False)
        object.__setattr__(self, "f_values", f_vals)
        object.__setattr__(self, "g_values", g_vals)
        object.__setattr__(self, "min_f_gap", float(gaps.min()))

    @classmethod
    def from_text(cls, f: str, g: str, alpha: float, levels: int) -> "SpectrumModel":
        return cls(parse_level_expr(f), parse_level_expr(g), alpha, levels)


def energy_levels(model: SpectrumModel, lam: float) -> np.ndarray:
    """Level energies at control value ``lam > 0``."""
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    return lam * model.f_values + model.alpha * model.g_values


def perturbation_ratio(model: SpectrumModel, lam_min: float) -> float:
    """Dimensionless size of the deformation relative to the bare ladder.

    Defined as ``|alpha| * max|g| / (lam_min * min_gap(f))`` where
    ``lam_min`` is the smallest control value visited.  Values well below
    one indicate the deformation is a small perturbation everywhere.
    """
    if not lam_min > 0:
        raise ValueError(f"lam_min must be positive, got {lam_min}")
    g_max = float(np.max(np.abs(model.g_values)))
    return abs(model.alpha) * g_max / (lam_min * model.min_f_gap)
