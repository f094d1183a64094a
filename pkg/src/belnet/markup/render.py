"""Renderers for parsed markup: inline MathML inside HTML, or bare text.

Every piece of source-derived text is HTML-escaped on the way out, so the
html_mathml target can never reflect markup injection. The plain_text
target strips structure for search indexing and previews.
"""

from __future__ import annotations

import html

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
)
from .symbols import OPERATOR_NAMES, glyph

RENDER_TARGETS = ("html_mathml", "plain_text")

_APPLY_FUNCTION = "⁡"


def render(root: MarkupNode, target: str) -> str:
    """Render a parse tree; pure function of (tree, target)."""
    if target == "html_mathml":
        return _html(root)
    if target == "plain_text":
        return _plain(root)
    raise ValueError(f"unknown render target {target!r}")


# -- html_mathml -----------------------------------------------------------


def _html(node: MarkupNode) -> str:
    if isinstance(node, TextRun):
        return html.escape(node.text, quote=True)
    if isinstance(node, Paragraph):
        return "<p>" + "".join(_html(c) for c in node.children) + "</p>"
    if isinstance(node, Group):
        if node.children and all(isinstance(c, Paragraph) for c in node.children):
            return "\n".join(_html(c) for c in node.children)
        return "".join(_html(c) for c in node.children)
    if isinstance(node, Math):
        return "<math>" + "".join(_mathml(c) for c in node.children) + "</math>"
    # formula fragment rendered outside a Math wrapper (argument previews)
    return _mathml(node)


def _mathml(node: MarkupNode) -> str:
    if isinstance(node, TextRun):
        return _mathml_text(node.text)
    if isinstance(node, Symbol):
        ch = html.escape(glyph(node.name), quote=True)
        tag = "mo" if node.name in OPERATOR_NAMES else "mi"
        return f"<{tag}>{ch}</{tag}>"
    if isinstance(node, Fraction):
        return (
            "<mfrac>"
            + _mrow(node.numerator)
            + _mrow(node.denominator)
            + "</mfrac>"
        )
    if isinstance(node, Sqrt):
        return "<msqrt>" + _mrow(node.child) + "</msqrt>"
    if isinstance(node, Sup):
        return "<msup>" + _mrow(node.base) + _mrow(node.exponent) + "</msup>"
    if isinstance(node, Sub):
        return "<msub>" + _mrow(node.base) + _mrow(node.index) + "</msub>"
    if isinstance(node, Function):
        return (
            "<mrow><mi>"
            + html.escape(node.name)
            + f"</mi><mo>{_APPLY_FUNCTION}</mo>"
            + _mrow(node.child)
            + "</mrow>"
        )
    if isinstance(node, Group):
        return "<mrow>" + "".join(_mathml(c) for c in node.children) + "</mrow>"
    if isinstance(node, Math):
        # nested math collapses into the surrounding formula
        return "<mrow>" + "".join(_mathml(c) for c in node.children) + "</mrow>"
    if isinstance(node, Paragraph):
        return "<mrow>" + "".join(_mathml(c) for c in node.children) + "</mrow>"
    raise TypeError(f"unrenderable node {node!r}")


def _mrow(node: MarkupNode) -> str:
    return "<mrow>" + _mathml(node) + "</mrow>"


def _mathml_text(text: str) -> str:
    """Classify character runs: digits to <mn>, letters to <mi>, rest to <mo>."""
    out: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append("<mn>" + html.escape(text[i:j], quote=True) + "</mn>")
            i = j
        elif ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            out.append("<mi>" + html.escape(text[i:j], quote=True) + "</mi>")
            i = j
        elif ch in " \t\n":
            i += 1
        else:
            out.append("<mo>" + html.escape(ch, quote=True) + "</mo>")
            i += 1
    return "".join(out)


# -- plain_text ------------------------------------------------------------


def _plain(node: MarkupNode) -> str:
    if isinstance(node, TextRun):
        return node.text
    if isinstance(node, Paragraph):
        return "".join(_plain(c) for c in node.children)
    if isinstance(node, Group):
        if node.children and all(isinstance(c, Paragraph) for c in node.children):
            return "\n\n".join(_plain(c) for c in node.children)
        return "".join(_plain(c) for c in node.children)
    if isinstance(node, Math):
        return "".join(_plain(c) for c in node.children)
    if isinstance(node, Symbol):
        return glyph(node.name)
    if isinstance(node, Fraction):
        return _plain(node.numerator) + "/" + _plain(node.denominator)
    if isinstance(node, Sqrt):
        return "√(" + _plain(node.child) + ")"
    if isinstance(node, Sup):
        return _plain(node.base) + "^" + _plain(node.exponent)
    if isinstance(node, Sub):
        return _plain(node.base) + "_" + _plain(node.index)
    if isinstance(node, Function):
        return node.name + "(" + _plain(node.child) + ")"
    raise TypeError(f"unrenderable node {node!r}")
