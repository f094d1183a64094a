"""Lexer for the text+formula markup.

The token stream is lossless: concatenating lexemes reproduces the source
byte for byte, and every token carries its 1-based (line, column) start.
Command names are checked against the known table here, so a typo'd
command surfaces at the earliest possible point with a real position.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .symbols import KNOWN_COMMANDS

TEXT = "text"
MATH_DELIM = "math_delim"
COMMAND = "command"
BRACE_OPEN = "brace_open"
BRACE_CLOSE = "brace_close"
SUPERSCRIPT = "superscript"
SUBSCRIPT = "subscript"
SYMBOL = "symbol"


class ParseError(Exception):
    """Positioned rejection: what was expected and what was found."""

    def __init__(self, line: int, column: int, expected: str, found: str):
        super().__init__(f"{line}:{column}: expected {expected}, found {found}")
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found

    @property
    def position(self) -> tuple[int, int]:
        return (self.line, self.column)


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    column: int

    @property
    def position(self) -> tuple[int, int]:
        return (self.line, self.column)


_SIMPLE_KINDS = {
    "$": MATH_DELIM,
    "{": BRACE_OPEN,
    "}": BRACE_CLOSE,
    "^": SUPERSCRIPT,
    "_": SUBSCRIPT,
}


def _run_category(ch: str) -> str | None:
    """Character class for text-run grouping; None for symbol characters."""
    if ch.isalpha():
        return "alpha"
    if ch.isdigit():
        return "digit"
    if ch in " \t\n":
        return "space"
    return None


def tokenize(source: str, start_line: int = 1) -> list[Token]:
    """Lex the source; raises ParseError on malformed input.

    Rejects a backslash not followed by a known command name and any
    control character other than newline/tab.
    """
    tokens: list[Token] = []
    line, col = start_line, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch in _SIMPLE_KINDS:
            tokens.append(Token(_SIMPLE_KINDS[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch == "\\":
            j = i + 1
            while j < n and source[j].isascii() and source[j].isalpha():
                j += 1
            name = source[i + 1 : j]
            if not name:
                found = repr(source[i + 1]) if i + 1 < n else "end of input"
                raise ParseError(line, col, "command name after \\", found)
            if name not in KNOWN_COMMANDS:
                raise ParseError(line, col, "known command", "\\" + name)
            tokens.append(Token(COMMAND, "\\" + name, line, col))
            i = j
            col += 1 + len(name)
            continue
        if unicodedata.category(ch) == "Cc" and ch not in "\n\t":
            raise ParseError(line, col, "printable character", repr(ch))
        category = _run_category(ch)
        if category is None:
            tokens.append(Token(SYMBOL, ch, line, col))
            i += 1
            col += 1
            continue
        j = i
        while j < n and _run_category(source[j]) == category:
            j += 1
        lexeme = source[i:j]
        tokens.append(Token(TEXT, lexeme, line, col))
        for c in lexeme:
            if c == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i = j
    return tokens
