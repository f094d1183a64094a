// Client-side parser/renderer for the portal's text+formula markup.
// It must produce byte-identical html_mathml output to the server for the
// shared parity corpus (tests/parity.fixtures.json); the editor only enables
// it because that corpus passes. Structure mirrors the server grammar:
// $...$ inline math, \frac{A}{B}, \sqrt{A}, functions with one braced
// argument, named symbols, ^/_ binding one token or braced group.

import { FUNCTION_NAMES, OPERATOR_NAMES, SYMBOLS } from "./symbols.js";

export class ParseError extends Error {
  line: number;
  column: number;
  expected: string;
  found: string;

  constructor(line: number, column: number, expected: string, found: string) {
    super(`${line}:${column}: expected ${expected}, found ${found}`);
    this.line = line;
    this.column = column;
    this.expected = expected;
    this.found = found;
  }
}

export type TokenKind =
  | "text"
  | "math_delim"
  | "command"
  | "brace_open"
  | "brace_close"
  | "superscript"
  | "subscript"
  | "symbol";

export interface Token {
  kind: TokenKind;
  lexeme: string;
  line: number;
  column: number;
}

export type MarkupNode =
  | { kind: "text"; text: string }
  | { kind: "paragraph"; children: MarkupNode[] }
  | { kind: "math"; children: MarkupNode[] }
  | { kind: "fraction"; numerator: MarkupNode; denominator: MarkupNode }
  | { kind: "sqrt"; child: MarkupNode }
  | { kind: "sup"; base: MarkupNode; exponent: MarkupNode }
  | { kind: "sub"; base: MarkupNode; index: MarkupNode }
  | { kind: "symbol"; name: string }
  | { kind: "group"; children: MarkupNode[] }
  | { kind: "function"; name: string; child: MarkupNode };

const KNOWN_COMMANDS = new Set<string>([
  ...Object.keys(SYMBOLS),
  ...FUNCTION_NAMES,
  "frac",
  "sqrt",
]);

const SIMPLE_KINDS: Record<string, TokenKind> = {
  $: "math_delim",
  "{": "brace_open",
  "}": "brace_close",
  "^": "superscript",
  _: "subscript",
};

const LETTER = /\p{L}/u;
const DIGIT = /\p{Nd}/u;
const CONTROL = /\p{Cc}/u;
const ASCII_LETTER = /[A-Za-z]/;

function runCategory(ch: string): "alpha" | "digit" | "space" | null {
  if (LETTER.test(ch)) return "alpha";
  if (DIGIT.test(ch)) return "digit";
  if (ch === " " || ch === "\t" || ch === "\n") return "space";
  return null;
}

export function tokenize(source: string, startLine = 1): Token[] {
  const tokens: Token[] = [];
  let line = startLine;
  let col = 1;
  let i = 0;
  const chars = Array.from(source);
  const n = chars.length;
  while (i < n) {
    const ch = chars[i];
    if (ch in SIMPLE_KINDS) {
      tokens.push({ kind: SIMPLE_KINDS[ch], lexeme: ch, line, column: col });
      i += 1;
      col += 1;
      continue;
    }
    if (ch === "\\") {
      let j = i + 1;
      while (j < n && ASCII_LETTER.test(chars[j])) j += 1;
      const name = chars.slice(i + 1, j).join("");
      if (!name) {
        const found = i + 1 < n ? JSON.stringify(chars[i + 1]) : "end of input";
        throw new ParseError(line, col, "command name after \\", found);
      }
      if (!KNOWN_COMMANDS.has(name)) {
        throw new ParseError(line, col, "known command", "\\" + name);
      }
      tokens.push({ kind: "command", lexeme: "\\" + name, line, column: col });
      i = j;
      col += 1 + name.length;
      continue;
    }
    if (CONTROL.test(ch) && ch !== "\n" && ch !== "\t") {
      throw new ParseError(line, col, "printable character", JSON.stringify(ch));
    }
    const category = runCategory(ch);
    if (category === null) {
      tokens.push({ kind: "symbol", lexeme: ch, line, column: col });
      i += 1;
      col += 1;
      continue;
    }
    let j = i;
    while (j < n && runCategory(chars[j]) === category) j += 1;
    const lexeme = chars.slice(i, j).join("");
    tokens.push({ kind: "text", lexeme, line, column: col });
    for (const c of lexeme) {
      if (c === "\n") {
        line += 1;
        col = 1;
      } else {
        col += 1;
      }
    }
    i = j;
  }
  return tokens;
}

class Stream {
  toks: Token[];
  pos = 0;
  endLine: number;
  endColumn: number;

  constructor(toks: Token[], endLine: number, endColumn: number) {
    this.toks = toks;
    this.endLine = endLine;
    this.endColumn = endColumn;
  }

  peek(): Token | null {
    return this.pos < this.toks.length ? this.toks[this.pos] : null;
  }

  next(): Token | null {
    const tok = this.peek();
    if (tok !== null) this.pos += 1;
    return tok;
  }

  error(expected: string, tok: Token | null): ParseError {
    if (tok === null) {
      return new ParseError(this.endLine, this.endColumn, expected, "end of input");
    }
    return new ParseError(tok.line, tok.column, expected, tok.lexeme);
  }
}

function endPosition(source: string, startLine: number): [number, number] {
  let line = startLine;
  for (const ch of source) if (ch === "\n") line += 1;
  const idx = source.lastIndexOf("\n");
  const tail = idx === -1 ? source : source.slice(idx + 1);
  return [line, Array.from(tail).length + 1];
}

function splitParagraphs(source: string): Array<[number, string]> {
  const chunks: Array<[number, string]> = [];
  let current: string[] = [];
  let start = 1;
  const lines = source.split("\n");
  for (let lineNo = 1; lineNo <= lines.length; lineNo++) {
    const line = lines[lineNo - 1];
    if (/^[ \t]*$/.test(line)) {
      if (current.length) {
        chunks.push([start, current.join("\n")]);
        current = [];
      }
    } else {
      if (!current.length) start = lineNo;
      current.push(line);
    }
  }
  if (current.length) chunks.push([start, current.join("\n")]);
  return chunks;
}

function parseBraced(stream: Stream): MarkupNode {
  const tok = stream.next();
  if (tok === null || tok.kind !== "brace_open") throw stream.error("{", tok);
  const children = parseMathSeq(stream, "brace_close");
  const closing = stream.next();
  if (closing === null || closing.kind !== "brace_close") {
    throw stream.error("}", closing);
  }
  if (children.length === 1) return children[0];
  return { kind: "group", children };
}

function parseCommand(stream: Stream, tok: Token): MarkupNode {
  const name = tok.lexeme.slice(1);
  if (name === "frac") {
    const numerator = parseBraced(stream);
    const denominator = parseBraced(stream);
    return { kind: "fraction", numerator, denominator };
  }
  if (name === "sqrt") return { kind: "sqrt", child: parseBraced(stream) };
  if (FUNCTION_NAMES.has(name)) {
    return { kind: "function", name, child: parseBraced(stream) };
  }
  if (name in SYMBOLS) return { kind: "symbol", name };
  throw stream.error("known command", tok);
}

function parseMathAtom(stream: Stream): MarkupNode {
  const tok = stream.next();
  if (tok === null) throw stream.error("math content", tok);
  if (tok.kind === "text" || tok.kind === "symbol") {
    return { kind: "text", text: tok.lexeme };
  }
  if (tok.kind === "command") return parseCommand(stream, tok);
  if (tok.kind === "brace_open") {
    const children = parseMathSeq(stream, "brace_close");
    const closing = stream.next();
    if (closing === null || closing.kind !== "brace_close") {
      throw stream.error("}", closing);
    }
    return { kind: "group", children };
  }
  throw stream.error("math content", tok);
}

function parseScriptOperand(stream: Stream): MarkupNode {
  const tok = stream.peek();
  if (tok === null) throw stream.error("script operand", null);
  if (tok.kind === "brace_open") return parseBraced(stream);
  if (tok.kind === "text" || tok.kind === "symbol") {
    stream.next();
    return { kind: "text", text: tok.lexeme };
  }
  if (tok.kind === "command") {
    stream.next();
    return parseCommand(stream, tok);
  }
  throw stream.error("script operand", tok);
}

function parseMathSeq(stream: Stream, stop: TokenKind): MarkupNode[] {
  const children: MarkupNode[] = [];
  for (;;) {
    const tok = stream.peek();
    if (tok === null) throw stream.error(stop === "math_delim" ? "$" : "}", null);
    if (tok.kind === stop) return children;
    if (tok.kind === "text" && /^[ \t\n]*$/.test(tok.lexeme)) {
      stream.next();
      continue;
    }
    if (tok.kind === "superscript" || tok.kind === "subscript") {
      stream.next();
      const base = children.pop();
      if (base === undefined) throw stream.error("base before script", tok);
      const operand = parseScriptOperand(stream);
      children.push(
        tok.kind === "superscript"
          ? { kind: "sup", base, exponent: operand }
          : { kind: "sub", base, index: operand },
      );
      continue;
    }
    if (tok.kind === "math_delim" || tok.kind === "brace_close") {
      throw stream.error(stop === "math_delim" ? "$" : "}", tok);
    }
    children.push(parseMathAtom(stream));
  }
}

function parseProseSeq(stream: Stream, stop: TokenKind | null): MarkupNode[] {
  const children: MarkupNode[] = [];
  let buffer: string[] = [];

  const flush = () => {
    if (buffer.length) {
      children.push({ kind: "text", text: buffer.join("") });
      buffer = [];
    }
  };

  for (;;) {
    const tok = stream.peek();
    if (tok === null) {
      if (stop !== null) throw stream.error("}", null);
      flush();
      return children;
    }
    if (stop !== null && tok.kind === stop) {
      flush();
      return children;
    }
    stream.next();
    if (tok.kind === "math_delim") {
      flush();
      const items = parseMathSeq(stream, "math_delim");
      const closing = stream.next();
      if (closing === null || closing.kind !== "math_delim") {
        throw stream.error("$", closing);
      }
      children.push({ kind: "math", children: items });
    } else if (tok.kind === "brace_open") {
      flush();
      const inner = parseProseSeq(stream, "brace_close");
      const closing = stream.next();
      if (closing === null || closing.kind !== "brace_close") {
        throw stream.error("}", closing);
      }
      children.push({ kind: "group", children: inner });
    } else if (tok.kind === "brace_close") {
      throw stream.error("text or $", tok);
    } else if (tok.kind === "command") {
      throw new ParseError(tok.line, tok.column, "command inside $...$ math", tok.lexeme);
    } else {
      buffer.push(tok.lexeme);
    }
  }
}

export function parse(source: string): MarkupNode {
  const paragraphs: MarkupNode[] = [];
  for (const [startLine, chunk] of splitParagraphs(source)) {
    const toks = tokenize(chunk, startLine);
    const [endLine, endCol] = endPosition(chunk, startLine);
    const stream = new Stream(toks, endLine, endCol);
    const children = parseProseSeq(stream, null);
    paragraphs.push({ kind: "paragraph", children });
  }
  if (!paragraphs.length) return { kind: "paragraph", children: [] };
  if (paragraphs.length === 1) {
    const para = paragraphs[0] as { kind: "paragraph"; children: MarkupNode[] };
    if (para.children.length === 1 && para.children[0].kind === "math") {
      return para.children[0];
    }
    return para;
  }
  return { kind: "group", children: paragraphs };
}

// -- rendering ---------------------------------------------------------------

const APPLY_FUNCTION = "⁡";

// mirrors python's html.escape(quote=True)
export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#x27;");
}

function isAllParagraphs(children: MarkupNode[]): boolean {
  return children.length > 0 && children.every((c) => c.kind === "paragraph");
}

function htmlNode(node: MarkupNode): string {
  switch (node.kind) {
    case "text":
      return escapeHtml(node.text);
    case "paragraph":
      return "<p>" + node.children.map(htmlNode).join("") + "</p>";
    case "group":
      if (isAllParagraphs(node.children)) {
        return node.children.map(htmlNode).join("\n");
      }
      return node.children.map(htmlNode).join("");
    case "math":
      return "<math>" + node.children.map(mathml).join("") + "</math>";
    default:
      return mathml(node);
  }
}

function mrow(node: MarkupNode): string {
  return "<mrow>" + mathml(node) + "</mrow>";
}

function mathml(node: MarkupNode): string {
  switch (node.kind) {
    case "text":
      return mathmlText(node.text);
    case "symbol": {
      const ch = escapeHtml(SYMBOLS[node.name]);
      const tag = OPERATOR_NAMES.has(node.name) ? "mo" : "mi";
      return `<${tag}>${ch}</${tag}>`;
    }
    case "fraction":
      return "<mfrac>" + mrow(node.numerator) + mrow(node.denominator) + "</mfrac>";
    case "sqrt":
      return "<msqrt>" + mrow(node.child) + "</msqrt>";
    case "sup":
      return "<msup>" + mrow(node.base) + mrow(node.exponent) + "</msup>";
    case "sub":
      return "<msub>" + mrow(node.base) + mrow(node.index) + "</msub>";
    case "function":
      return (
        "<mrow><mi>" +
        escapeHtml(node.name) +
        `</mi><mo>${APPLY_FUNCTION}</mo>` +
        mrow(node.child) +
        "</mrow>"
      );
    case "group":
    case "math":
    case "paragraph":
      return "<mrow>" + node.children.map(mathml).join("") + "</mrow>";
  }
}

function mathmlText(text: string): string {
  const out: string[] = [];
  const chars = Array.from(text);
  let i = 0;
  const n = chars.length;
  while (i < n) {
    const ch = chars[i];
    if (DIGIT.test(ch)) {
      let j = i;
      while (j < n && DIGIT.test(chars[j])) j += 1;
      out.push("<mn>" + escapeHtml(chars.slice(i, j).join("")) + "</mn>");
      i = j;
    } else if (LETTER.test(ch)) {
      let j = i;
      while (j < n && LETTER.test(chars[j])) j += 1;
      out.push("<mi>" + escapeHtml(chars.slice(i, j).join("")) + "</mi>");
      i = j;
    } else if (ch === " " || ch === "\t" || ch === "\n") {
      i += 1;
    } else {
      out.push("<mo>" + escapeHtml(ch) + "</mo>");
      i += 1;
    }
  }
  return out.join("");
}

function plainNode(node: MarkupNode): string {
  switch (node.kind) {
    case "text":
      return node.text;
    case "paragraph":
    case "math":
      return node.children.map(plainNode).join("");
    case "group":
      if (isAllParagraphs(node.children)) {
        return node.children.map(plainNode).join("\n\n");
      }
      return node.children.map(plainNode).join("");
    case "symbol":
      return SYMBOLS[node.name];
    case "fraction":
      return plainNode(node.numerator) + "/" + plainNode(node.denominator);
    case "sqrt":
      return "√(" + plainNode(node.child) + ")";
    case "sup":
      return plainNode(node.base) + "^" + plainNode(node.exponent);
    case "sub":
      return plainNode(node.base) + "_" + plainNode(node.index);
    case "function":
      return node.name + "(" + plainNode(node.child) + ")";
  }
}

export function render(root: MarkupNode, target: "html_mathml" | "plain_text"): string {
  if (target === "html_mathml") return htmlNode(root);
  if (target === "plain_text") return plainNode(root);
  throw new Error(`unknown render target ${target}`);
}
