"""Token-aligned abstraction of Java methods.

Identifiers and literals are replaced by category placeholders
(VAR_k, METHOD_k, TYPE_k, INT_k, FLOAT_k, CHAR_k, STRING_k) numbered by
first occurrence inside the method; keywords, operators, separators,
annotations and boolean/null literals pass through.  A configurable
idiom table keeps very frequent tokens concrete.  The output sequence
has exactly the same length as the input, so line maps and masking
sites carry over unchanged.
"""

from __future__ import annotations

import re
from collections import Counter

from .javalex import (
    CHAR_LITERAL,
    IDENTIFIER,
    NUMBER_LITERAL,
    PLACEHOLDER,
    STRING_LITERAL,
    Token,
    lex,
)

# Frequent identifiers and literals kept concrete.  "-1" can never match a
# single token (the lexer splits the sign off) but stays here because the
# table is data, not logic, and users may supply their own.
DEFAULT_IDIOMS = (
    "i", "j", "k", "index",
    "0", "1", "2", "-1",
    '""', "0.0",
    "null", "true", "false",
    "size", "length",
)

PLACEHOLDER_RE = re.compile(r"^(VAR|METHOD|TYPE|INT|FLOAT|CHAR|STRING|BOOL)_[1-9][0-9]*$")


class UnresolvedPlaceholderError(KeyError):
    def __init__(self, placeholders):
        self.placeholders = list(placeholders)
        super().__init__(f"unresolved placeholders: {', '.join(self.placeholders)}")


def _is_float_literal(text: str) -> bool:
    low = text.lower()
    if low.startswith(("0x", "0b")):
        return "p" in low
    return "." in low or "e" in low or low[-1] in "fd"


def _category(tokens, idx: int, idioms) -> str | None:
    t = tokens[idx]
    if t.text in idioms:
        return None
    if t.kind in (IDENTIFIER, PLACEHOLDER) and PLACEHOLDER_RE.match(t.text):
        return None  # already abstracted; keeps abstract() idempotent
    if t.kind == IDENTIFIER:
        nxt = tokens[idx + 1] if idx + 1 < len(tokens) else None
        if nxt is not None and nxt.text == "(":
            return "METHOD"
        if t.text[0].isupper():
            prev = tokens[idx - 1].text if idx > 0 else ""
            if prev == "new":
                return "TYPE"
            if nxt is not None and nxt.kind == IDENTIFIER:
                return "TYPE"
        return "VAR"
    if t.kind == NUMBER_LITERAL:
        return "FLOAT" if _is_float_literal(t.text) else "INT"
    if t.kind == STRING_LITERAL:
        return "STRING"
    if t.kind == CHAR_LITERAL:
        return "CHAR"
    return None


def abstract_tokens(tokens, idioms=None):
    """Abstract a method's token sequence.

    Returns (abstractTokens, mapping) where mapping sends each placeholder
    text back to the original token text.  Repeated occurrences of the
    same original within one category reuse the same placeholder.
    """
    idiom_set = frozenset(DEFAULT_IDIOMS if idioms is None else idioms)
    out: list[Token] = []
    mapping: dict[str, str] = {}
    assigned: dict[tuple[str, str], str] = {}
    counters: Counter[str] = Counter()
    tokens = list(tokens)
    for idx, t in enumerate(tokens):
        cat = _category(tokens, idx, idiom_set)
        if cat is None:
            out.append(t)
            continue
        key = (cat, t.text)
        ph = assigned.get(key)
        if ph is None:
            counters[cat] += 1
            ph = f"{cat}_{counters[cat]}"
            assigned[key] = ph
            mapping[ph] = t.text
        out.append(Token(ph, PLACEHOLDER, t.line))
    return out, mapping


def _relex_kind(text: str) -> str:
    try:
        relexed = lex(text)
    except ValueError:
        return IDENTIFIER
    return relexed[0].kind if len(relexed) == 1 else IDENTIFIER


def deabstract(tokens, mapping) -> list[Token]:
    """Replace placeholders by their original texts.

    Raises UnresolvedPlaceholderError listing every placeholder that has
    no entry in the mapping.
    """
    out: list[Token] = []
    missing: list[str] = []
    for t in tokens:
        if PLACEHOLDER_RE.match(t.text):
            orig = mapping.get(t.text)
            if orig is None:
                missing.append(t.text)
                continue
            out.append(Token(orig, _relex_kind(orig), t.line))
        else:
            out.append(t)
    if missing:
        raise UnresolvedPlaceholderError(sorted(set(missing)))
    return out


def load_idioms(path) -> tuple[str, ...]:
    with open(path, "r", encoding="utf-8") as fh:
        items = [line.strip() for line in fh]
    return tuple(item for item in items if item)
