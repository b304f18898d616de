"""Concrete syntax for MTL and TPTL formulas.

Grammar (loosest binding first; ``U``, ``|`` and ``&`` associate to the right)::

    formula := disj ('U' interval? formula)?
    disj    := conj ('|' disj)?
    conj    := unary ('&' conj)?
    unary   := '!' unary | ('F'|'X'|'G') interval? unary | reg '.' unary | atom
    atom    := 'true' | 'false' | ident | '(' formula ')'
             | reg ('='|'<'|'<='|'>'|'>=') int | reg 'in' interval
    interval:= ('['|'(') bound ',' bound (']'|')') | ('='|'<'|'<='|'>'|'>=') int

Bounds are integers, ``inf``/``+inf`` or ``-inf``.  An omitted interval means
the whole integer line.  Registers are ``x1``, ``x2``, ...; a bare ``x`` is
read as ``x1``.  A run of operator letters directly before an operand, as in
``FFF p``, reads as stacked operators ``F F F p``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .formulas import (
    FALSE,
    TRUE,
    And,
    Constraint,
    FalseF,
    Formula,
    Freeze,
    Not,
    Or,
    Prop,
    TrueF,
    Until,
    Z,
)
from .words import INF, Interval


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>[-+]?\d+)
  | (?P<inf>[-+]?inf\b)
  | (?P<op><=|>=|!=|[\[\]().,!&|<>=~])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"true", "false", "U", "F", "X", "G", "in"}
_REG = re.compile(r"x([1-9][0-9]*)?$")
_CMP = {"=", "<", "<=", ">", ">="}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for k, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, k + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _sugar_interval(op: str, n: int) -> Interval:
    return {
        "=": Interval.point(n),
        ">=": Interval(n, INF, True, False),
        ">": Interval(n, INF, False, False),
        "<=": Interval(-INF, n, False, True),
        "<": Interval(-INF, n, False, False),
    }[op]


class _Parser:
    def __init__(self, text: str, logic: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.logic = logic

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def eat(self, text: str | None = None, kind: str | None = None) -> _Tok:
        tok = self.tok
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = text or kind
            self.error(f"expected {want!r}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def is_reg(self, tok: _Tok) -> bool:
        if tok.kind != "ident" or not _REG.match(tok.text):
            return False
        if self.logic == "tptl":
            return True
        nxt = self.peek()
        if nxt.text in _CMP or nxt.text in (".", "in"):
            self.error("registers are not allowed in MTL formulas", tok)
        return False

    def reg_name(self, tok: _Tok) -> str:
        return "x1" if tok.text == "x" else tok.text

    # intervals

    def bound(self) -> float | int:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return int(tok.text)
        if tok.kind == "inf":
            self.i += 1
            return -INF if tok.text.startswith("-") else INF
        self.error(f"expected an interval bound, found {tok.text!r}")

    def interval_starts(self) -> bool:
        tok = self.tok
        if tok.text == "[":
            return True
        if tok.text == "(":
            return self.peek().kind in ("num", "inf")
        return tok.text in _CMP and self.peek().kind == "num"

    def interval(self) -> Interval:
        tok = self.tok
        if tok.text in _CMP:
            self.i += 1
            return _sugar_interval(tok.text, int(self.eat(kind="num").text))
        if tok.text not in ("[", "("):
            self.error("expected an interval")
        self.i += 1
        lo = self.bound()
        self.eat(",")
        hi = self.bound()
        close = self.tok
        if close.text not in ("]", ")"):
            self.error("expected ']' or ')' to close the interval")
        self.i += 1
        try:
            return Interval(lo, hi, tok.text == "[", close.text == "]")
        except ValueError as exc:
            self.error(f"malformed interval: {exc}", tok)

    def temporal_interval(self, op_tok: _Tok) -> Interval:
        if not self.interval_starts():
            return Z
        iv = self.interval()
        if self.logic == "tptl" and not iv.is_everything:
            self.error("TPTL temporal operators take no interval; use register constraints", op_tok)
        return iv

    # formulas

    def formula(self) -> Formula:
        left = self.disj()
        if self.tok.text == "U":
            op = self.eat("U")
            iv = self.temporal_interval(op)
            return Until(left, self.formula(), iv)
        return left

    def disj(self) -> Formula:
        left = self.conj()
        if self.tok.text == "|":
            self.i += 1
            return Or(left, self.disj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        if self.tok.text == "&":
            self.i += 1
            return And(left, self.conj())
        return left

    def _operand_follows(self) -> bool:
        nxt = self.peek()
        if nxt.kind == "ident":
            return nxt.text not in ("U", "in")
        return nxt.text in ("(", "!", "~", "[")

    def unary(self) -> Formula:
        tok = self.tok
        if tok.text in ("!", "~"):
            self.i += 1
            return Not(self.unary())
        if (
            tok.kind == "ident"
            and len(tok.text) > 1
            and set(tok.text) <= {"F", "X", "G"}
            and self._operand_follows()
        ):
            # "FFF p" reads as "F F F p"
            split = [_Tok("ident", ch, tok.line, tok.col + k) for k, ch in enumerate(tok.text)]
            self.toks[self.i:self.i + 1] = split
            tok = self.tok
        if tok.kind == "ident" and tok.text in ("F", "X", "G"):
            self.i += 1
            iv = self.temporal_interval(tok)
            body = self.unary()
            if tok.text == "F":
                return Until(TRUE, body, iv, "F")
            if tok.text == "X":
                return Until(FALSE, body, iv, "X")
            return Not(Until(TRUE, Not(body), iv, "F"))
        if self.is_reg(tok) and self.peek().text == ".":
            self.i += 2
            return Freeze(self.reg_name(tok), self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.tok
        if tok.text == "(":
            self.i += 1
            f = self.formula()
            self.eat(")")
            return f
        if tok.kind != "ident":
            self.error(f"expected a formula, found {tok.text or 'end of input'!r}")
        if tok.text == "true":
            self.i += 1
            return TRUE
        if tok.text == "false":
            self.i += 1
            return FALSE
        if self.is_reg(tok):
            self.i += 1
            nxt = self.tok
            if nxt.text == "in":
                self.i += 1
                return Constraint(self.reg_name(tok), self.interval())
            if nxt.text in _CMP:
                self.i += 1
                num = self.eat(kind="num")
                return Constraint(self.reg_name(tok), _sugar_interval(nxt.text, int(num.text)))
            self.error(f"register {tok.text} must be followed by a comparison, 'in' or '.'", nxt)
        if tok.text in _KEYWORDS:
            self.error(f"unexpected keyword {tok.text!r}")
        self.i += 1
        return Prop(tok.text)

    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r} after formula")
        return f


def parse_mtl(text: str) -> Formula:
    return _Parser(text, "mtl").parse()


def parse_tptl(text: str) -> Formula:
    return _Parser(text, "tptl").parse()


def parse_formula(text: str, logic: str) -> Formula:
    if logic not in ("mtl", "tptl"):
        raise ValueError(f"unknown logic {logic!r}")
    return _Parser(text, logic).parse()


# printing

_PREC_UNTIL, _PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = range(1, 6)


def _bound(b) -> str:
    if math.isinf(b):
        return "inf" if b > 0 else "-inf"
    return str(int(b))


def interval_text(iv: Interval) -> str:
    return f"{'[' if iv.lower_closed else '('}{_bound(iv.lower)},{_bound(iv.upper)}{']' if iv.upper_closed else ')'}"


def _constraint_text(c: Constraint) -> str:
    iv = c.interval
    lo_inf, hi_inf = math.isinf(iv.lower), math.isinf(iv.upper)
    if iv.lower == iv.upper:
        return f"{c.register} = {_bound(iv.lower)}"
    if hi_inf and not lo_inf:
        return f"{c.register} {'>=' if iv.lower_closed else '>'} {_bound(iv.lower)}"
    if lo_inf and not hi_inf:
        return f"{c.register} {'<=' if iv.upper_closed else '<'} {_bound(iv.upper)}"
    return f"{c.register} in {interval_text(iv)}"


def _iv_suffix(iv: Interval) -> str:
    return "" if iv.is_everything else interval_text(iv)


def _text(f: Formula) -> tuple[str, int]:
    if isinstance(f, TrueF):
        return "true", _PREC_ATOM
    if isinstance(f, FalseF):
        return "false", _PREC_ATOM
    if isinstance(f, Prop):
        return f.name, _PREC_ATOM
    if isinstance(f, Constraint):
        return _constraint_text(f), _PREC_ATOM
    if isinstance(f, Not):
        return "!" + _wrap(f.operand, _PREC_UNARY), _PREC_UNARY
    if isinstance(f, Freeze):
        return f"{f.register}." + _wrap(f.body, _PREC_UNARY), _PREC_UNARY
    if isinstance(f, Until) and f.unary:
        return f"{f.unary}{_iv_suffix(f.interval)} " + _wrap(f.right, _PREC_UNARY), _PREC_UNARY
    if isinstance(f, And):
        return f"{_wrap(f.left, _PREC_UNARY, prefix=False)} & {_wrap(f.right, _PREC_AND)}", _PREC_AND
    if isinstance(f, Or):
        return f"{_wrap(f.left, _PREC_AND)} | {_wrap(f.right, _PREC_OR)}", _PREC_OR
    if isinstance(f, Until):
        return f"{_wrap(f.left, _PREC_OR, prefix=False)} U{_iv_suffix(f.interval)} {_wrap(f.right, _PREC_UNTIL)}", _PREC_UNTIL
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, need: int, prefix: bool = True) -> str:
    s, prec = _text(f)
    if prefix and need == _PREC_UNARY and isinstance(f, Constraint):
        return f"({s})"
    return s if prec >= need else f"({s})"


def to_text(f: Formula) -> str:
    return _text(f)[0]
