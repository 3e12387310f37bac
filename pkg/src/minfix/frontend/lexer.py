"""Shared tokenizer for the three text formats.

Produces NAME, NUMBER and punctuation tokens with 1-based line/column
positions.  Number literals are integers, p/q fractions or decimals,
all converted exactly.  Comment style is configurable per format.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "number", "punct", "eof"
    text: str
    line: int
    col: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.text)


_PUNCT2 = ("<=", "==")
_PUNCT1 = "()[]{}=;,*+-:<"


def tokenize(text: str, comment: str = "#") -> list[Token]:
    tokens: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith(comment, i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("name", text[start:i], line, col))
            col += i - start
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            elif i < n and text[i] == "/" and i + 1 < n and text[i + 1].isdigit():
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            tokens.append(Token("number", text[start:i], line, col))
            col += i - start
            continue
        two = text[i:i + 2]
        if two in _PUNCT2:
            tokens.append(Token("punct", two, line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT1:
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("punct", "name")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str, what: str | None = None) -> Token:
        tok = self.peek()
        if not self.at(text):
            expected = what or f"'{text}'"
            raise ParseError(
                f"expected {expected}, found {tok.text!r}" if tok.kind != "eof"
                else f"expected {expected}, found end of input",
                tok.line, tok.col)
        return self.next()

    def expect_name(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "name":
            raise ParseError(f"expected {what}, found {tok.text!r}", tok.line, tok.col)
        return self.next()

    def expect_number(self, what: str = "number") -> Token:
        tok = self.peek()
        if tok.kind != "number":
            raise ParseError(f"expected {what}, found {tok.text!r}", tok.line, tok.col)
        return self.next()

    @property
    def eof(self) -> bool:
        return self.peek().kind == "eof"
