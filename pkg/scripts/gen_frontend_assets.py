#!/usr/bin/env python3
"""Regenerate frontend assets that must stay in lockstep with the service:
the math symbol table and the render-parity fixture corpus.

Run from the repository root after any markup change:

    python3 scripts/gen_frontend_assets.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from belnet import markup  # noqa: E402
from markup_corpus import CORPUS, INJECTION_CORPUS  # noqa: E402


def gen_symbols_ts(dest: Path) -> None:
    lines = [
        "// Generated by scripts/gen_frontend_assets.py from belnet/markup/symbols.tsv",
        "// Do not edit by hand.",
        "",
        "export const SYMBOLS: Record<string, string> = {",
    ]
    for name in sorted(markup.SYMBOLS):
        lines.append(f'  {name}: "\\u{{{ord(markup.SYMBOLS[name]):04X}}}",')
    lines.append("};")
    lines.append("")
    lines.append(
        "export const OPERATOR_NAMES = new Set("
        + json.dumps(sorted(markup.OPERATOR_NAMES))
        + ");"
    )
    lines.append(
        "export const FUNCTION_NAMES = new Set("
        + json.dumps(sorted(markup.FUNCTION_NAMES))
        + ");"
    )
    lines.append(
        "export const STRUCTURE_NAMES = new Set("
        + json.dumps(sorted(markup.STRUCTURE_NAMES))
        + ");"
    )
    lines.append("")
    dest.write_text("\n".join(lines), "utf-8")


def gen_parity_fixture(dest: Path) -> None:
    cases = []
    for source in CORPUS + INJECTION_CORPUS:
        tree = markup.parse(source)
        cases.append(
            {
                "source": source,
                "html_mathml": markup.render(tree, "html_mathml"),
                "plain_text": markup.render(tree, "plain_text"),
            }
        )
    # positioned-error cases: the client must reject at the same position
    errors = []
    for source in ["$x^{2$", "$\\frac{a}$", "\\q@", "$x +", "a{b", "}x", "$\\sin x$"]:
        try:
            markup.parse(source)
        except markup.ParseError as err:
            errors.append(
                {
                    "source": source,
                    "line": err.line,
                    "column": err.column,
                    "expected": err.expected,
                }
            )
    dest.write_text(
        json.dumps({"cases": cases, "errors": errors}, ensure_ascii=False, indent=1),
        "utf-8",
    )


def main() -> None:
    frontend = ROOT / "frontend"
    (frontend / "src").mkdir(parents=True, exist_ok=True)
    (frontend / "tests").mkdir(parents=True, exist_ok=True)
    gen_symbols_ts(frontend / "src" / "symbols.ts")
    gen_parity_fixture(frontend / "tests" / "parity.fixtures.json")
    print("wrote frontend/src/symbols.ts and frontend/tests/parity.fixtures.json")


if __name__ == "__main__":
    main()
