"""Deterministic lexer for Java source text.

This is the single tokenization authority of the toolkit: structure
analysis, abstraction, masking and the evaluation metrics all consume
the token stream produced here.  Comments are stripped, string/char
literals stay single tokens, and operators are matched longest-first,
so ">>" is one token rather than two.
"""

from __future__ import annotations

from dataclasses import dataclass

IDENTIFIER = "identifier"
KEYWORD = "keyword"
TYPE_KEYWORD = "type-keyword"
NUMBER_LITERAL = "number-literal"
STRING_LITERAL = "string-literal"
CHAR_LITERAL = "char-literal"
BOOLEAN_LITERAL = "boolean-literal"
NULL_LITERAL = "null-literal"
OPERATOR = "operator"
SEPARATOR = "separator"
ANNOTATION = "annotation"
PLACEHOLDER = "placeholder"

TYPE_KEYWORDS = frozenset(
    {"boolean", "byte", "char", "double", "float", "int", "long", "short", "void"}
)

KEYWORDS = frozenset(
    {
        "abstract", "assert", "break", "case", "catch", "class", "const",
        "continue", "default", "do", "else", "enum", "extends", "final",
        "finally", "for", "goto", "if", "implements", "import", "instanceof",
        "interface", "native", "new", "package", "private", "protected",
        "public", "return", "static", "strictfp", "super", "switch",
        "synchronized", "this", "throw", "throws", "transient", "try",
        "volatile", "while",
    }
)

# Longest-first so that maximal munch falls out of the scan order.
_PUNCT = (
    ">>>=",
    ">>>", "<<=", ">>=", "...",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=",
    "<<", ">>", "->", "::",
    "=", ">", "<", "!", "~", "?", ":",
    "+", "-", "*", "/", "&", "|", "^", "%",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "@",
)

_SEPARATOR_TEXTS = frozenset(
    {"(", ")", "{", "}", "[", "]", ";", ",", ".", "...", "::", "@"}
)


class LexError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Token:
    text: str
    kind: str
    line: int  # 1-based physical line of the token's first character


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def _classify_word(text: str) -> str:
    if text in ("true", "false"):
        return BOOLEAN_LITERAL
    if text == "null":
        return NULL_LITERAL
    if text in TYPE_KEYWORDS:
        return TYPE_KEYWORD
    if text in KEYWORDS:
        return KEYWORD
    return IDENTIFIER


def _scan_quoted(source: str, i: int, quote: str, line: int) -> int:
    # i sits on the opening quote; returns the index just past the closing one.
    j = i + 1
    n = len(source)
    while j < n:
        ch = source[j]
        if ch == quote:
            return j + 1
        if ch == "\n":
            break
        if ch == "\\":
            j += 2
            continue
        j += 1
    kind = "string" if quote == '"' else "char"
    raise LexError(f"unterminated {kind} literal", line)


def _scan_number(s: str, i: int) -> int:
    n = len(s)
    j = i
    if s.startswith(("0x", "0X"), i):
        hex_digits = "0123456789abcdefABCDEF"
        j = i + 2
        while j < n and (s[j] in hex_digits or s[j] == "_"):
            j += 1
        if j + 1 < n and s[j] == "." and s[j + 1] in hex_digits:
            j += 1
            while j < n and (s[j] in hex_digits or s[j] == "_"):
                j += 1
        if j < n and s[j] in "pP":
            k = j + 1
            if k < n and s[k] in "+-":
                k += 1
            if k < n and s[k].isdigit():
                j = k
                while j < n and s[j].isdigit():
                    j += 1
    elif s.startswith(("0b", "0B"), i):
        j = i + 2
        while j < n and s[j] in "01_":
            j += 1
    else:
        while j < n and (s[j].isdigit() or s[j] == "_"):
            j += 1
        if j < n and s[j] == ".":
            j += 1
            while j < n and (s[j].isdigit() or s[j] == "_"):
                j += 1
        if j < n and s[j] in "eE":
            k = j + 1
            if k < n and s[k] in "+-":
                k += 1
            if k < n and s[k].isdigit():
                j = k
                while j < n and s[j].isdigit():
                    j += 1
    if j < n and s[j] in "lLfFdD":
        j += 1
    return j


def _scan(source: str):
    """Return (tokens, char_starts, char_ends); raises LexError."""
    tokens: list[Token] = []
    starts: list[int] = []
    ends: list[int] = []
    i = 0
    n = len(source)
    line = 1

    def emit(text: str, kind: str, at_line: int, start: int, end: int) -> None:
        tokens.append(Token(text, kind, at_line))
        starts.append(start)
        ends.append(end)

    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c in " \t\r\f\x0b":
            i += 1
            continue
        if c == "/" and source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if c == "/" and source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise LexError("unterminated block comment", line)
            line += source.count("\n", i, j)
            i = j + 2
            continue
        start = i
        if c == '"':
            if source.startswith('"""', i):
                j = source.find('"""', i + 3)
                if j < 0:
                    raise LexError("unterminated text block", line)
                text = source[i : j + 3]
                emit(text, STRING_LITERAL, line, start, j + 3)
                line += text.count("\n")
                i = j + 3
                continue
            j = _scan_quoted(source, i, '"', line)
            emit(source[i:j], STRING_LITERAL, line, start, j)
            i = j
            continue
        if c == "'":
            j = _scan_quoted(source, i, "'", line)
            emit(source[i:j], CHAR_LITERAL, line, start, j)
            i = j
            continue
        if c == "@" and i + 1 < n and _is_ident_start(source[i + 1]):
            j = i + 1
            while j < n and _is_ident_part(source[j]):
                j += 1
            emit(source[i:j], ANNOTATION, line, start, j)
            i = j
            continue
        if _is_ident_start(c):
            j = i + 1
            while j < n and _is_ident_part(source[j]):
                j += 1
            text = source[i:j]
            emit(text, _classify_word(text), line, start, j)
            i = j
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            j = _scan_number(source, i)
            emit(source[i:j], NUMBER_LITERAL, line, start, j)
            i = j
            continue
        for op in _PUNCT:
            if source.startswith(op, i):
                kind = SEPARATOR if op in _SEPARATOR_TEXTS else OPERATOR
                emit(op, kind, line, start, i + len(op))
                i += len(op)
                break
        else:
            raise LexError(f"unexpected character {c!r}", line)
    return tokens, starts, ends


def lex(source: str) -> list[Token]:
    tokens, _, _ = _scan(source)
    return tokens


def detokenize(tokens) -> str:
    """Render a token sequence as text, one space between consecutive tokens."""
    texts = [t.text if isinstance(t, Token) else t for t in tokens]
    if not texts:
        raise ValueError("cannot detokenize an empty token sequence")
    return " ".join(texts)
