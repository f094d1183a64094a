"""Recursive-descent parser for the markup grammar.

Grammar summary:
  document   = paragraph (blank line paragraph)*
  paragraph  = (prose | group | math)*
  math       = '$' item* '$'
  item       = atom | item '^' operand | item '_' operand
  atom       = text run | symbol char | '{' item* '}'
             | '\\frac' '{' item* '}' '{' item* '}'
             | '\\sqrt' '{' item* '}'
             | function '{' item* '}'
             | named symbol
  operand    = single token atom | braced group

Inside math, whitespace tokens are skipped. In prose, '^', '_' and other
symbol characters are ordinary text; '$' opens math and '{'/'}' group.
Unbalanced '$' or braces are rejected with the offending position.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

from . import tokens as T
from .symbols import FUNCTION_NAMES, STRUCTURE_NAMES, SYMBOLS
from .tokens import ParseError, Token, tokenize

MarkupNode = Union[
    "TextRun",
    "Paragraph",
    "Math",
    "Fraction",
    "Sqrt",
    "Sup",
    "Sub",
    "Symbol",
    "Group",
    "Function",
]


@dataclass(frozen=True)
class TextRun:
    text: str


@dataclass(frozen=True)
class Paragraph:
    children: Tuple[MarkupNode, ...]


@dataclass(frozen=True)
class Math:
    children: Tuple[MarkupNode, ...]


@dataclass(frozen=True)
class Fraction:
    numerator: MarkupNode
    denominator: MarkupNode


@dataclass(frozen=True)
class Sqrt:
    child: MarkupNode


@dataclass(frozen=True)
class Sup:
    base: MarkupNode
    exponent: MarkupNode


@dataclass(frozen=True)
class Sub:
    base: MarkupNode
    index: MarkupNode


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Group:
    children: Tuple[MarkupNode, ...]


@dataclass(frozen=True)
class Function:
    name: str
    child: MarkupNode


class _Stream:
    def __init__(self, toks: list[Token], end_line: int, end_column: int):
        self.toks = toks
        self.pos = 0
        self.end_line = end_line
        self.end_column = end_column

    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> Token | None:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def error(self, expected: str, tok: Token | None) -> ParseError:
        if tok is None:
            return ParseError(self.end_line, self.end_column, expected, "end of input")
        return ParseError(tok.line, tok.column, expected, tok.lexeme)


def _end_position(source: str, start_line: int) -> tuple[int, int]:
    """1-based position one past the final character."""
    line = start_line + source.count("\n")
    tail = source.rsplit("\n", 1)[-1]
    return line, len(tail) + 1


def _split_paragraphs(source: str) -> list[tuple[int, str]]:
    """(start_line, chunk) pairs; paragraphs are runs of non-blank lines."""
    chunks: list[tuple[int, str]] = []
    current: list[str] = []
    start = 1
    for lineno, line in enumerate(source.split("\n"), start=1):
        if line.strip(" \t") == "":
            if current:
                chunks.append((start, "\n".join(current)))
                current = []
        else:
            if not current:
                start = lineno
            current.append(line)
    if current:
        chunks.append((start, "\n".join(current)))
    return chunks


def _parse_braced(stream: _Stream) -> MarkupNode:
    tok = stream.next()
    if tok is None or tok.kind != T.BRACE_OPEN:
        raise stream.error("{", tok)
    children = _parse_math_seq(stream, stop=T.BRACE_CLOSE)
    closing = stream.next()
    if closing is None or closing.kind != T.BRACE_CLOSE:
        raise stream.error("}", closing)
    # argument groups of exactly one node collapse to that node
    if len(children) == 1:
        return children[0]
    return Group(tuple(children))


def _parse_command(stream: _Stream, tok: Token) -> MarkupNode:
    name = tok.lexeme[1:]
    if name == "frac":
        numerator = _parse_braced(stream)
        denominator = _parse_braced(stream)
        return Fraction(numerator, denominator)
    if name == "sqrt":
        return Sqrt(_parse_braced(stream))
    if name in FUNCTION_NAMES:
        return Function(name, _parse_braced(stream))
    if name in SYMBOLS:
        return Symbol(name)
    raise stream.error("known command", tok)  # unreachable: lexer filters


def _parse_math_atom(stream: _Stream) -> MarkupNode:
    tok = stream.next()
    assert tok is not None
    if tok.kind == T.TEXT:
        return TextRun(tok.lexeme)
    if tok.kind == T.SYMBOL:
        return TextRun(tok.lexeme)
    if tok.kind == T.COMMAND:
        return _parse_command(stream, tok)
    if tok.kind == T.BRACE_OPEN:
        children = _parse_math_seq(stream, stop=T.BRACE_CLOSE)
        closing = stream.next()
        if closing is None or closing.kind != T.BRACE_CLOSE:
            raise stream.error("}", closing)
        return Group(tuple(children))
    raise stream.error("math content", tok)


def _parse_script_operand(stream: _Stream) -> MarkupNode:
    """A script binds one token or one braced group."""
    tok = stream.peek()
    if tok is None:
        raise stream.error("script operand", None)
    if tok.kind == T.BRACE_OPEN:
        return _parse_braced(stream)
    if tok.kind in (T.TEXT, T.SYMBOL):
        stream.next()
        return TextRun(tok.lexeme)
    if tok.kind == T.COMMAND:
        stream.next()
        return _parse_command(stream, tok)
    raise stream.error("script operand", tok)


def _parse_math_seq(stream: _Stream, stop: str) -> list[MarkupNode]:
    """Math items until the stop token kind (not consumed)."""
    children: list[MarkupNode] = []
    while True:
        tok = stream.peek()
        if tok is None:
            raise stream.error("$" if stop == T.MATH_DELIM else "}", None)
        if tok.kind == stop:
            return children
        if tok.kind == T.TEXT and tok.lexeme.strip(" \t\n") == "":
            stream.next()  # whitespace is layout only inside math
            continue
        if tok.kind in (T.SUPERSCRIPT, T.SUBSCRIPT):
            stream.next()
            if not children:
                raise stream.error("base before script", tok)
            base = children.pop()
            operand = _parse_script_operand(stream)
            node = Sup(base, operand) if tok.kind == T.SUPERSCRIPT else Sub(base, operand)
            children.append(node)
            continue
        if tok.kind in (T.MATH_DELIM, T.BRACE_CLOSE):
            raise stream.error("$" if stop == T.MATH_DELIM else "}", tok)
        children.append(_parse_math_atom(stream))


def _parse_prose_seq(stream: _Stream, stop: str | None) -> list[MarkupNode]:
    """Prose flow: text plus inline math and groups, until stop kind or end."""
    children: list[MarkupNode] = []
    buffer: list[str] = []

    def flush():
        if buffer:
            children.append(TextRun("".join(buffer)))
            buffer.clear()

    while True:
        tok = stream.peek()
        if tok is None:
            if stop is not None:
                raise stream.error("}", None)
            flush()
            return children
        if stop is not None and tok.kind == stop:
            flush()
            return children
        stream.next()
        if tok.kind == T.MATH_DELIM:
            flush()
            items = _parse_math_seq(stream, stop=T.MATH_DELIM)
            closing = stream.next()
            if closing is None or closing.kind != T.MATH_DELIM:
                raise stream.error("$", closing)
            children.append(Math(tuple(items)))
        elif tok.kind == T.BRACE_OPEN:
            flush()
            inner = _parse_prose_seq(stream, stop=T.BRACE_CLOSE)
            closing = stream.next()
            if closing is None or closing.kind != T.BRACE_CLOSE:
                raise stream.error("}", closing)
            children.append(Group(tuple(inner)))
        elif tok.kind == T.BRACE_CLOSE:
            raise stream.error("text or $", tok)
        elif tok.kind == T.COMMAND:
            raise ParseError(
                tok.line, tok.column, "command inside $...$ math", tok.lexeme
            )
        else:
            # text, symbol, and literal '^'/'_' characters in prose
            buffer.append(tok.lexeme)


def parse(source: str) -> MarkupNode:
    """Parse markup source to its document tree; raises ParseError.

    A single paragraph is returned bare, and a paragraph that is exactly
    one formula collapses to its Math node; multiple paragraphs come back
    as a Group of Paragraph nodes.
    """
    paragraphs: list[Paragraph] = []
    for start_line, chunk in _split_paragraphs(source):
        toks = tokenize(chunk, start_line=start_line)
        end_line, end_col = _end_position(chunk, start_line)
        stream = _Stream(toks, end_line, end_col)
        children = _parse_prose_seq(stream, stop=None)
        paragraphs.append(Paragraph(tuple(children)))
    if not paragraphs:
        return Paragraph(())
    if len(paragraphs) == 1:
        para = paragraphs[0]
        if len(para.children) == 1 and isinstance(para.children[0], Math):
            return para.children[0]
        return para
    return Group(tuple(paragraphs))
