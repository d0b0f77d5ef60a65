"""Small exact expression language for elements of R.

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('+' | '-') factor | atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'

A NAME is a basis element of sl_n (``E12``, ``E_12``, ``E_1_2``, ``H1``) and
stands for its momentum function mu^x; for sl_2 the letters ``e``, ``h``,
``f`` are accepted as well.  No floating point literals.
"""

from __future__ import annotations

import re
from typing import List, Tuple

from gmpy2 import mpq

from .flag import FlagModel
from .polynomials import PolyZP

__all__ = ["ParseError", "parse_mu"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")
_SL2 = {"e": "E12", "h": "H1", "f": "E21"}


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", num))
        elif name is not None:
            out.append(("name", name))
        elif op in "+-*/^()":
            out.append(("op", op))
        else:
            raise ParseError(f"unexpected character {op!r} at {m.start(3)}")
        pos = m.end()
    out.append(("end", ""))
    return out


class _Parser:
    def __init__(self, text: str, model: FlagModel):
        self.toks = _tokenize(text)
        self.i = 0
        self.model = model
        self.m = model.m

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def expr(self) -> PolyZP:
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> PolyZP:
        out = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> PolyZP:
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = self.take()[1]
            f = self.factor()
            return -f if sign == "-" else f
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            base = base ** int(self.take("int")[1])
        return base

    def atom(self) -> PolyZP:
        kind, val = self.peek()
        if kind == "int":
            self.take()
            num = int(val)
            if self.peek() == ("op", "/"):
                self.take()
                den = int(self.take("int")[1])
                if den == 0:
                    raise ParseError("division by zero")
                return PolyZP.constant(self.m, mpq(num, den))
            return PolyZP.constant(self.m, mpq(num))
        if kind == "name":
            self.take()
            return self.model.mu[self._index(val)]
        if (kind, val) == ("op", "("):
            self.take()
            out = self.expr()
            self.take("op", ")")
            return out
        raise ParseError(f"unexpected {val or 'end of input'!r}")

    def _index(self, name: str) -> int:
        g = self.model.g
        if g.n == 2 and name in _SL2:
            name = _SL2[name]
        try:
            return g.lookup(name)
        except (KeyError, ValueError):
            raise ParseError(f"unknown basis element {name!r} for sl{g.n}") from None


def parse_mu(text: str, model: FlagModel) -> PolyZP:
    """Evaluate an expression in the momentum functions of ``model``."""
    p = _Parser(text, model)
    out = p.expr()
    p.take("end")
    return out
