from .parser import (
    Fraction,
    Function,
    Group,
    MarkupNode,
    Math,
    Paragraph,
    Sqrt,
    Sub,
    Sup,
    Symbol,
    TextRun,
    parse,
)
from .render import RENDER_TARGETS, render
from .symbols import (
    FUNCTION_NAMES,
    KNOWN_COMMANDS,
    OPERATOR_NAMES,
    STRUCTURE_NAMES,
    SYMBOLS,
    glyph,
)
from .tokens import ParseError, Token, tokenize

__all__ = [
    "FUNCTION_NAMES",
    "Fraction",
    "Function",
    "Group",
    "KNOWN_COMMANDS",
    "MarkupNode",
    "Math",
    "OPERATOR_NAMES",
    "Paragraph",
    "ParseError",
    "RENDER_TARGETS",
    "STRUCTURE_NAMES",
    "SYMBOLS",
    "Sqrt",
    "Sub",
    "Sup",
    "Symbol",
    "TextRun",
    "Token",
    "glyph",
    "parse",
    "render",
    "tokenize",
]
