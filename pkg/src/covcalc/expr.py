"""Tokenizer and recursive-descent parser shared by the expression grammars.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'|'/'] factor)*        # juxtaposition multiplies
    factor := atom ['^' ['-'] INT]
    atom   := NUMBER | IDENT | '(' expr ')'

``NUMBER`` is a decimal literal; ``i`` is the imaginary unit, so ``2.5i`` and
``1+2i`` are complex scalars.  What an identifier means is up to the caller:
the quantum-plane grammar splits ``xy`` into letters, the function grammar
knows only ``z``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_]+)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "ident" | "op" | "end"
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ParseError(f"unexpected character {src[bad]!r}", bad, src)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


class Parser:
    """Builds values with ``number(complex)`` and ``symbol(name, pos)``.

    The values must support ``+ - * /``, unary minus and ``** int``.
    """

    def __init__(self, src: str, number: Callable, symbol: Callable):
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0
        self.number = number
        self.symbol = symbol

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.pos, self.src)

    def take(self, text: str | None = None) -> Token:
        tok = self.tok
        if text is not None and tok.text != text:
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self):
        if self.tok.kind == "end":
            self.error("empty expression")
        value = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return value

    def expr(self):
        sign = None
        if self.tok.text in "+-" and self.tok.kind == "op":
            sign = self.take().text
        value = self.term()
        if sign == "-":
            value = -value
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_atom(self) -> bool:
        return self.tok.kind in ("num", "ident") or self.tok.text == "("

    def term(self):
        value = self.factor()
        while True:
            if self.tok.kind == "op" and self.tok.text in "*/":
                op = self.take()
                rhs = self.factor()
                if op.text == "*":
                    value = value * rhs
                else:
                    try:
                        value = value / rhs
                    except ZeroDivisionError as exc:
                        raise ParseError(f"invalid division: {exc}", op.pos, self.src) from None
            elif self._starts_atom():
                value = value * self.factor()
            else:
                return value

    def factor(self):
        base = self.atom()
        if self.tok.text == "^":
            caret = self.take()
            neg = False
            if self.tok.text == "-":
                self.take()
                neg = True
            if self.tok.kind != "num" or not self.tok.text.isdigit():
                self.error("exponent must be an integer")
            n = int(self.take().text)
            try:
                base = base ** (-n if neg else n)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), caret.pos, self.src) from None
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.take()
            value = complex(float(tok.text))
            # "2.5i": imaginary literal
            if self.tok.kind == "ident" and self.tok.text == "i" and self.tok.pos == tok.pos + len(tok.text):
                self.take()
                value = 1j * value
            return self.number(value)
        if tok.kind == "ident":
            self.take()
            if tok.text == "i":
                return self.number(1j)
            return self.symbol(tok.text, tok.pos)
        if tok.text == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        self.error(f"unexpected {tok.text or 'end of input'!r}")
