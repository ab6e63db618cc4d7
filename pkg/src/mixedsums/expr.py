"""Exact integer expressions such as ``10^50+10045`` or ``2^89-1``.

Grammar (``^`` binds tightest and is right-associative)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := digits | '(' expr ')'
"""

from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")
MAX_EXPONENT = 1 << 20


class ExprError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.toks.append((m.group(1), m.start(1)))
            elif m.group(2) is not None:
                if m.group(2) not in "+-*^()":
                    raise ExprError(f"unexpected character {m.group(2)!r}", m.start(2))
                self.toks.append((m.group(2), m.start(2)))
        self.i = 0

    def peek(self) -> tuple[str, int]:
        return self.toks[self.i] if self.i < len(self.toks) else ("", len(self.text))

    def eat(self, tok: str) -> bool:
        if self.peek()[0] == tok:
            self.i += 1
            return True
        return False

    def expr(self) -> int:
        v = self.term()
        while True:
            if self.eat("+"):
                v += self.term()
            elif self.eat("-"):
                v -= self.term()
            else:
                return v

    def term(self) -> int:
        v = self.unary()
        while self.eat("*"):
            v *= self.unary()
        return v

    def unary(self) -> int:
        if self.eat("-"):
            return -self.unary()
        return self.power()

    def power(self) -> int:
        v = self.atom()
        tok, pos = self.peek()
        if self.eat("^"):
            e = self.unary()
            if e < 0:
                raise ExprError("negative exponent", pos)
            if e > MAX_EXPONENT:
                raise ExprError("exponent too large", pos)
            v = v**e
        return v

    def atom(self) -> int:
        tok, pos = self.peek()
        if tok.isdigit():
            self.i += 1
            return int(tok)
        if self.eat("("):
            v = self.expr()
            if not self.eat(")"):
                raise ExprError("expected ')'", self.peek()[1])
            return v
        raise ExprError(f"expected a number, found {tok or 'end of input'!r}", pos)


def parse_number_expr(text: str, allow_negative: bool = True) -> int:
    """Evaluate ``text`` exactly."""
    p = _Parser(text)
    if not p.toks:
        raise ExprError("empty expression", 0)
    value = p.expr()
    tok, pos = p.peek()
    if tok:
        raise ExprError(f"unexpected {tok!r}", pos)
    if value < 0 and not allow_negative:
        raise ExprError("negative value not allowed here", 0)
    return value
