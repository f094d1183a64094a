"""Named math symbols, loaded from the versioned ``symbols.tsv`` data file.

The file maps command names to Unicode codepoints, one ``name<TAB>hex``
pair per line; ``#`` lines are comments. Greek letters render as
identifiers, the entries listed in OPERATOR_NAMES as operators.
"""

from __future__ import annotations

from importlib import resources

OPERATOR_NAMES = frozenset(
    {"cdot", "times", "pm", "leq", "geq", "rightarrow"}
)

FUNCTION_NAMES = frozenset({"exp", "ln", "log", "sin", "cos"})

STRUCTURE_NAMES = frozenset({"frac", "sqrt"})


def _load_table() -> dict[str, str]:
    table: dict[str, str] = {}
    text = resources.files(__package__).joinpath("symbols.tsv").read_text("utf-8")
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, _, codepoint = line.partition("\t")
        table[name] = chr(int(codepoint, 16))
    return table


SYMBOLS: dict[str, str] = _load_table()

KNOWN_COMMANDS = frozenset(SYMBOLS) | FUNCTION_NAMES | STRUCTURE_NAMES


def glyph(name: str) -> str:
    return SYMBOLS[name]
