"""Text syntax for operators.

Grammar::

    expr     := term (("+" | "-") term)*
    term     := ("-")? factor ("*" factor)*
    factor   := atom ("^" uint)?
    atom     := rational | symbol | "(" expr ")"
    symbol   := t | u | a | b | w | Dt | Du
    rational := uint ("/" uint)?

``*`` is composition, so ``Dt*t`` normalises to ``t*Dt + 1``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .polyring import EXP_CAP, ExponentCapError, ParamPoly, format_poly
from .weyl import DiffOp, op_compose


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s+|(?P<num>\d+)|(?P<sym>Dt|Du|[tuabw])|(?P<op>[-+*^/()])")


def _tokenize(src: str) -> list[tuple[str, str, int, int]]:
    out = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        col = pos - line_start + 1
        if m is None:
            ch = src[pos]
            if ch.isalpha() or ch == "_":
                word = re.match(r"\w+", src[pos:]).group(0)
                raise ParseError(f"unknown symbol {word!r}", line, col)
            raise ParseError(f"unexpected character {ch!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind is None:
            for i, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            # reject things like "tu" or "Dtx" that the regex would split silently
            end = m.end()
            if kind in ("sym", "num") and end < len(src) and (src[end].isalnum() or src[end] == "_"):
                word = re.match(r"\w+", src[pos:]).group(0)
                raise ParseError(f"unknown symbol {word!r}", line, col)
            out.append((kind, text, line, col))
        pos = m.end()
    out.append(("end", "", line, pos - line_start + 1))
    return out


_SYMBOLS = {
    "Dt": DiffOp.derivative(1, 0),
    "Du": DiffOp.derivative(0, 1),
    **{name: DiffOp.multiplication(ParamPoly.var(name)) for name in "tuabw"},
}


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, val, line, col = self.take()
        if val != text or kind == "end":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {text!r}, found {found}", line, col)

    def uint(self) -> int:
        kind, val, line, col = self.take()
        if kind != "num":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected an integer, found {found}", line, col)
        return int(val)

    def parse(self) -> DiffOp:
        op = self.expr()
        kind, val, line, col = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", line, col)
        return op

    def expr(self) -> DiffOp:
        acc = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            sign = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if sign == "+" else acc - rhs
        return acc

    def term(self) -> DiffOp:
        neg = False
        if self.peek()[:2] == ("op", "-"):
            self.take()
            neg = True
        acc = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            acc = op_compose(acc, self.factor())
        return -acc if neg else acc

    def factor(self) -> DiffOp:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            line, col = self.peek()[2:]
            n = self.uint()
            if n > EXP_CAP:
                raise ExponentCapError(f"line {line}, column {col}: exponent {n} above {EXP_CAP}")
            return base**n
        return base

    def atom(self) -> DiffOp:
        kind, val, line, col = self.take()
        if kind == "num":
            num = int(val)
            if self.peek()[:2] == ("op", "/"):
                self.take()
                dline, dcol = self.peek()[2:]
                den = self.uint()
                if den == 0:
                    raise ParseError("zero denominator", dline, dcol)
                return DiffOp.multiplication(ParamPoly.const(Fraction(num, den)))
            return DiffOp.multiplication(ParamPoly.const(num))
        if kind == "sym":
            return _SYMBOLS[val]
        if val == "(" and kind == "op":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"expected a number, symbol or '(', found {found}", line, col)


def parse_operator(src: str) -> DiffOp:
    """Parse ``src`` and return its normal form."""
    return _Parser(src).parse()


def parse_poly(src: str) -> ParamPoly:
    """Parse a multiplication-only expression (no Dt, Du) as a polynomial."""
    op = parse_operator(src)
    if any(key != (0, 0) for key in op.keys()):
        raise ValueError("expression contains derivatives")
    return op.coeff(0, 0)


def _derivative_text(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("Dt" if i == 1 else f"Dt^{i}")
    if j:
        parts.append("Du" if j == 1 else f"Du^{j}")
    return "*".join(parts)


def print_operator(A: DiffOp) -> str:
    """Canonical text: terms by (dt, du) ascending, coefficients in polynomial order."""
    pieces = []
    for (i, j), c in A.items():
        der = _derivative_text(i, j)
        terms = c.terms()
        if len(terms) == 1:
            coeff = format_poly(c)
            neg = coeff.startswith("-")
            body = coeff[1:] if neg else coeff
            if der:
                body = der if body == "1" else f"{body}*{der}"
        else:
            neg = False
            body = f"({format_poly(c)})"
            if der:
                body = f"{body}*{der}"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces) if pieces else "0"
