"""Tokenizer for .gpd documents."""

import string
from dataclasses import dataclass
from typing import List

IDENTIFIER_START = set(string.ascii_letters + "_")
IDENTIFIER_CHARS = set(string.ascii_letters + string.digits + "_")
WHITESPACE = set(" \t\r\n")
SYMBOLS = set("{}():;,=+^-*")
TWO_CHAR_SYMBOLS = {"->"}
KEYWORDS = {
    "field", "groupoid", "objects", "arrows", "compose", "ring", "action",
    "subgroupoid", "subring", "assert", "not", "invariants", "fixer", "grouptype",
}


@dataclass(frozen=True)
class StreamPos:
    line: int = 1
    column: int = 1


@dataclass(frozen=True)
class Token:
    kind: str  # name, keyword, int, symbol, end
    text: str
    pos: StreamPos

    def is_symbol(self, text: str) -> bool:
        return self.kind == "symbol" and self.text == text

    def is_keyword(self, text: str) -> bool:
        return self.kind == "keyword" and self.text == text


class LexError(Exception):
    def __init__(self, message: str, pos: StreamPos):
        super().__init__(message)
        self.pos = pos


class Lexer:
    def __init__(self, text: str):
        self.text = text
        self.cursor = 0
        self.line = 1
        self.column = 1

    def pos(self) -> StreamPos:
        return StreamPos(self.line, self.column)

    def peek(self, offset: int = 0) -> str:
        i = self.cursor + offset
        return self.text[i] if i < len(self.text) else ""

    def advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.peek() == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.cursor += 1

    def lex(self) -> List[Token]:
        tokens = []
        while self.cursor < len(self.text):
            c = self.peek()
            if c in WHITESPACE:
                self.advance()
            elif c == "#":
                while self.cursor < len(self.text) and self.peek() != "\n":
                    self.advance()
            elif c in IDENTIFIER_START:
                start, pos = self.cursor, self.pos()
                while self.peek() and self.peek() in IDENTIFIER_CHARS:
                    self.advance()
                span = self.text[start:self.cursor]
                tokens.append(Token("keyword" if span in KEYWORDS else "name", span, pos))
            elif c in string.digits:
                start, pos = self.cursor, self.pos()
                while self.peek() and self.peek() in string.digits:
                    self.advance()
                if self.peek() and self.peek() in IDENTIFIER_START:
                    raise LexError(f"malformed name starting with a digit near {self.text[start:self.cursor + 1]!r}", pos)
                tokens.append(Token("int", self.text[start:self.cursor], pos))
            elif c + self.peek(1) in TWO_CHAR_SYMBOLS:
                tokens.append(Token("symbol", c + self.peek(1), self.pos()))
                self.advance(2)
            elif c in SYMBOLS:
                tokens.append(Token("symbol", c, self.pos()))
                self.advance()
            else:
                raise LexError(f"unexpected character {c!r}", self.pos())
        tokens.append(Token("end", "end of input", self.pos()))
        return tokens


def tokenize(text: str) -> List[Token]:
    """Split text into tokens; ``#`` starts a comment running to end of line.

    Raises:
        LexError: On a character outside the grammar
    """
    return Lexer(text).lex()
