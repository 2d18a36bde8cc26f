"""Text grammar for polynomials.

Names ``[a-zA-Z][a-zA-Z0-9_]*``, integer literals (reduced mod 2), and
``+ - * ^ ( ) /``.  ``-`` means ``+``; ``/`` must be followed by a unit
monomial in inverted variables.  ``w`` is the generator of the coefficient
field unless the ring has a variable of that name.
"""

from __future__ import annotations

import re

from .poly import Poly, Ring

__all__ = ["ParseError", "parse_poly", "tokenize"]

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|(\d+)|(\S))")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


def tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1):
            out.append(("name", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("int", int(m.group(2)), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text.rstrip())))
    return out


class _Parser:
    def __init__(self, text: str, ring: Ring, line: int, col0: int):
        self.toks = tokenize(text)
        self.i = 0
        self.ring = ring
        self.line = line
        self.col0 = col0

    def error(self, msg: str, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, self.line, self.col0 + tok[2] + 1)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.i -= 1
            self.error(f"expected {op!r}")
        return t

    def parse(self) -> Poly:
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
        acc = self.term()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                acc = acc + self.term()
            else:
                return acc

    def term(self) -> Poly:
        acc = self.power()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                acc = acc * self.power()
            elif t[0] == "op" and t[1] == "/":
                self.take()
                start = self.peek()
                d = self.power()
                if d.is_zero():
                    self.error("division by zero", start)
                try:
                    acc = acc * d.inverse_monomial()
                except ValueError:
                    self.error(f"divisor {d} is not a monomial in inverted variables", start)
            else:
                return acc

    def power(self) -> Poly:
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            neg = False
            t = self.peek()
            if t[0] == "op" and t[1] == "-":
                self.take()
                neg = True
            t = self.take()
            if t[0] != "int":
                self.i -= 1
                self.error("expected integer exponent")
            e = -t[1] if neg else t[1]
            try:
                return base ** e
            except ValueError:
                self.error(f"negative power of non-unit {base}", t)
        return base

    def atom(self) -> Poly:
        t = self.take()
        R = self.ring
        if t[0] == "int":
            return R.const(t[1] & 1)
        if t[0] == "name":
            name = t[1]
            if name in R.names:
                return R.var(name)
            if name == "w":
                if R.field.degree == 1:
                    self.i -= 1
                    self.error("generator w used over GF(2)")
                return R.const(2)
            self.i -= 1
            self.error(f"undeclared variable {name!r}")
        if t[0] == "op" and t[1] == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        self.i -= 1
        self.error("unexpected end of expression" if t[0] == "end" else f"unexpected {t[1]!r}")


def parse_poly(text: str, ring: Ring, line: int = 1, col: int = 0) -> Poly:
    """Parse ``text`` into a polynomial of ``ring``.

    ``line``/``col`` locate the text inside a larger document so errors point
    at the right place.
    """
    return _Parser(text, ring, line, col).parse()
