import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from belnet import markup
from belnet.markup import (
    Fraction,
    Function,
    Group,
    Math,
    Paragraph,
    ParseError,
    Sqrt,
    Sub,
    Sup,
    Symbol,
    TextRun,
    parse,
    render,
    tokenize,
)

from markup_corpus import CORPUS, INJECTION_CORPUS


# -- tokenize ---------------------------------------------------------------


def kinds_and_lexemes(source):
    return [(t.kind, t.lexeme) for t in tokenize(source)]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_inline_math():
    assert kinds_and_lexemes("a$x^2$") == [
        ("text", "a"),
        ("math_delim", "$"),
        ("text", "x"),
        ("superscript", "^"),
        ("text", "2"),
        ("math_delim", "$"),
    ]


def test_tokenize_unknown_command_position():
    with pytest.raises(ParseError) as err:
        tokenize("\\q@")
    assert err.value.position == (1, 1)


def test_tokenize_backslash_nonletter():
    with pytest.raises(ParseError) as err:
        tokenize("ab\\1")
    assert err.value.position == (1, 3)


def test_tokenize_rejects_control_chars():
    with pytest.raises(ParseError):
        tokenize("a\x00b")
    with pytest.raises(ParseError):
        tokenize("a\rb")
    tokenize("a\tb\nc")  # newline and tab are fine


def test_tokenize_positions_multiline():
    toks = tokenize("ab\ncd$")
    assert toks[-1].position == (2, 3)


@given(st.text(max_size=200))
@settings(max_examples=300)
def test_tokenize_lossless_or_positioned_error(source):
    try:
        toks = tokenize(source)
    except ParseError as err:
        assert err.line >= 1 and err.column >= 1
        return
    assert "".join(t.lexeme for t in toks) == source


# -- parse --------------------------------------------------------------------


def test_parse_fraction_example():
    assert parse("$\\frac{\\lambda}{2}$") == Math(
        children=(Fraction(Symbol("lambda"), TextRun("2")),)
    )


def test_parse_plain_text():
    assert parse("plain text") == Paragraph((TextRun("plain text"),))


def test_parse_unbalanced_brace_in_script():
    with pytest.raises(ParseError) as err:
        parse("$x^{2$")
    assert err.value.expected == "}"
    assert err.value.found == "$"


def test_parse_unclosed_fraction():
    with pytest.raises(ParseError) as err:
        parse("$\\frac{a}$")
    assert err.value.expected == "{"
    assert err.value.position == (1, 10)


def test_parse_unterminated_math():
    with pytest.raises(ParseError) as err:
        parse("$x + y")
    assert err.value.expected == "$"
    assert err.value.found == "end of input"
    assert err.value.position == (1, 7)  # one past the end


def test_parse_paragraphs():
    doc = parse("first\n\nsecond one")
    assert doc == Group(
        (
            Paragraph((TextRun("first"),)),
            Paragraph((TextRun("second one"),)),
        )
    )


def test_parse_scripts_bind_one_token_or_group():
    assert parse("$x^10$") == Math((Sup(TextRun("x"), TextRun("10")),))
    assert parse("$x^{2n}$") == Math(
        (Sup(TextRun("x"), Group((TextRun("2"), TextRun("n")))),)
    )
    assert parse("$x^\\alpha$") == Math((Sup(TextRun("x"), Symbol("alpha")),))
    assert parse("$x^2_i$") == Math(
        (Sub(Sup(TextRun("x"), TextRun("2")), TextRun("i")),)
    )


def test_parse_exponential_attenuation():
    tree = parse("$e^{-\\mu d}$")
    assert tree == Math(
        (
            Sup(
                TextRun("e"),
                Group((TextRun("-"), Symbol("mu"), TextRun("d"))),
            ),
        )
    )


def test_parse_function_requires_braced_argument():
    assert parse("$\\sin{x}$") == Math((Function("sin", TextRun("x")),))
    with pytest.raises(ParseError) as err:
        parse("$\\sin x$")
    assert err.value.expected == "{"


def test_parse_script_without_base():
    with pytest.raises(ParseError) as err:
        parse("$^2$")
    assert err.value.expected == "base before script"


def test_parse_prose_keeps_carets_literal():
    assert parse("a^b") == Paragraph((TextRun("a^b"),))


def test_parse_prose_braces_group():
    assert parse("{a}b") == Paragraph((Group((TextRun("a"),)), TextRun("b")))
    with pytest.raises(ParseError):
        parse("unbalanced } here")
    with pytest.raises(ParseError):
        parse("{never closed")


def test_parse_command_outside_math_rejected():
    with pytest.raises(ParseError) as err:
        parse("the \\alpha particle")
    assert err.value.found == "\\alpha"


def test_parse_unknown_command_rejected():
    with pytest.raises(ParseError):
        parse("$\\fraction{a}{b}$")


def test_parse_empty_source():
    assert parse("") == Paragraph(())
    assert parse("\n  \n") == Paragraph(())


def test_parse_deterministic():
    source = "$\\frac{\\sqrt{\\frac{a}{b}}}{c^{2}}$ and text"
    assert parse(source) == parse(source)


def test_whole_corpus_parses():
    for source in CORPUS:
        parse(source)  # must not raise


# -- render ---------------------------------------------------------------------


def test_render_escapes_text():
    doc = parse("a<b")
    assert "a&lt;b" in render(doc, "html_mathml")


def test_render_superscript_structure():
    html = render(Math((Sup(TextRun("x"), TextRun("2")),)), "html_mathml")
    assert "<msup>" in html
    assert "<mn>2</mn>" in html
    assert html.index("<mi>x</mi>") < html.index("<mn>2</mn>")


def test_render_plain_symbol_lookup():
    assert render(parse("$\\alpha$-decay"), "plain_text") == "α-decay"


def test_render_fraction_mathml():
    html = render(parse("$\\frac{\\lambda}{2}$"), "html_mathml")
    assert html == (
        "<math><mfrac><mrow><mi>λ</mi></mrow>"
        "<mrow><mn>2</mn></mrow></mfrac></math>"
    )


def test_render_operators_as_mo():
    html = render(parse("$a \\cdot b$"), "html_mathml")
    assert "<mo>⋅</mo>" in html


def test_render_paragraphs_blankline_plain():
    text = render(parse("one\n\ntwo"), "plain_text")
    assert text == "one\n\ntwo"


def test_render_no_command_leakage_across_corpus():
    command_pattern = re.compile(r"\\[a-zA-Z]+")
    for source in CORPUS:
        html = render(parse(source), "html_mathml")
        assert not command_pattern.search(html), source


def test_render_injection_corpus_fully_escaped():
    for source in INJECTION_CORPUS:
        html = render(parse(source), "html_mathml")
        cleaned = re.sub(r"</?(p|math|mrow|mi|mn|mo|mfrac|msqrt|msup|msub)>", "", html)
        assert "<" not in cleaned, source


def test_render_pure_function():
    tree = parse(CORPUS[7])
    assert render(tree, "html_mathml") == render(tree, "html_mathml")
    with pytest.raises(ValueError):
        render(tree, "latex")


def _tree_text_runs(node, out):
    if isinstance(node, TextRun):
        out.append(node.text)
    for field in ("children",):
        if hasattr(node, field):
            for child in getattr(node, field):
                _tree_text_runs(child, out)
    for field in ("numerator", "denominator", "child", "base", "exponent", "index"):
        if hasattr(node, field):
            _tree_text_runs(getattr(node, field), out)


def _is_subsequence(needle: str, haystack: str) -> bool:
    it = iter(haystack)
    return all(ch in it for ch in needle)


def test_plain_render_keeps_text_runs_in_order():
    for source in CORPUS:
        tree = parse(source)
        runs = []
        _tree_text_runs(tree, runs)
        assert _is_subsequence("".join(runs), render(tree, "plain_text")), source


def test_fuzz_small_sample():
    rng = random.Random(20260809)
    alphabet = "ax2 $\\{}^_#\n\tαfrأcsqrt<>&'\""
    for _ in range(1000):
        source = "".join(
            rng.choice(alphabet) for _ in range(rng.randrange(0, 40))
        )
        try:
            tree = parse(source)
        except ParseError as err:
            assert err.line >= 1 and err.column >= 1
        else:
            render(tree, "html_mathml")
            render(tree, "plain_text")


# -- symbol table -----------------------------------------------------------------


def test_symbol_table_versioned_and_complete():
    from importlib import resources

    text = resources.files("belnet.markup").joinpath("symbols.tsv").read_text("utf-8")
    assert text.splitlines()[0].startswith("#")
    assert "version 1" in text.splitlines()[0]
    assert len(markup.SYMBOLS) == 55
    assert markup.glyph("mu") == "μ"
    assert markup.glyph("Omega") == "Ω"
    assert markup.glyph("cdot") == "⋅"


def test_corpus_covers_every_command():
    blob = "\n".join(CORPUS)
    for name in sorted(markup.KNOWN_COMMANDS):
        assert re.search(r"\\" + name + r"(?![a-zA-Z])", blob), name
