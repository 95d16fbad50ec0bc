"""Parser for the ASCII formula grammar.

Grammar: ``true``, identifiers ``[a-zA-Z][a-zA-Z0-9_]*``, ``!``, ``&``, ``|``,
``->`` (sugar for ``!a | b``), prefix ``X``/``F``/``G``, infix ``U``, parens.
Precedence: unary > U > & > | > ->. ``U`` and ``->`` associate to the right;
``&``/``|`` parse into flattened n-ary nodes.
"""

from __future__ import annotations

import re

from .formula import (
    TRUE,
    Atom,
    Finally,
    Formula,
    Globally,
    Next,
    Not,
    Until,
    conj,
    disj,
    implies,
)


class FormulaSyntaxError(ValueError):
    """Malformed formula text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(r"->|[!&|()]|[a-zA-Z][a-zA-Z0-9_]*")
_KEYWORDS = {"true", "X", "F", "G", "U"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(0), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", self.pos())
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise FormulaSyntaxError(f"expected {tok!r}", self.pos())
        self.i += 1

    def parse(self) -> Formula:
        f = self.implication()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conjunction())
        return disj(parts) if len(parts) > 1 else parts[0]

    def conjunction(self) -> Formula:
        parts = [self.until()]
        while self.peek() == "&":
            self.take()
            parts.append(self.until())
        return conj(parts) if len(parts) > 1 else parts[0]

    def until(self) -> Formula:
        left = self.unary()
        if self.peek() == "U":
            self.take()
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "X":
            self.take()
            return Next(self.unary())
        if tok == "F":
            self.take()
            return Finally(self.unary())
        if tok == "G":
            self.take()
            return Globally(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", self.pos())
        if tok == "(":
            self.take()
            f = self.implication()
            self.expect(")")
            return f
        if tok == "true":
            self.take()
            return TRUE
        if tok in _KEYWORDS or not tok[0].isalpha():
            raise FormulaSyntaxError(f"unexpected token {tok!r}", self.pos())
        self.take()
        return Atom(tok)


def parse(text: str) -> Formula:
    """Parse formula text into a flattened AST."""
    return _Parser(text).parse()
