"""Token-level structural analysis of Java methods.

Works directly on the lexer's token stream, without a full parser:
method boundaries, if/while/for/catch spans, call argument lists and
balanced brace blocks are all recovered with brace/paren matching plus
small heuristics.  False positives on exotic code are acceptable; the
fixture corpus pins the exact behavior.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .javalex import IDENTIFIER, KEYWORD, LexError, Token, _scan, lex

IF_CONDITION = "if-condition"
WHILE_CONDITION = "while-condition"
FOR_CONTROL = "for-control"
CALL_ARGUMENTS = "call-arguments"
CATCH_PARAMETER = "catch-parameter"

_CONDITION_KEYWORDS = {"if": IF_CONDITION, "while": WHILE_CONDITION}

_MODIFIERS = frozenset(
    {
        "public", "private", "protected", "static", "final", "abstract",
        "synchronized", "native", "strictfp", "default", "transient",
        "volatile",
    }
)

# Tokens a method signature may contain between its first token and the name.
_SIG_LINK_TEXTS = frozenset({"<", ">", "[", "]", ".", ",", "?", "extends", "super"})


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructSpan:
    kind: str
    start: int  # first token inside the parentheses
    end: int    # one past the last token inside the parentheses


@dataclass(frozen=True)
class BlockSpan:
    start: int  # index of "{"
    end: int    # index of the matching "}"
    statement_count: int


@dataclass(frozen=True)
class ExtractedMethod:
    name: str
    tokens: tuple[Token, ...]
    text: str


def _match_forward(tokens, i: int, open_t: str, close_t: str, limit: int | None = None):
    depth = 0
    n = len(tokens) if limit is None else limit
    for j in range(i, n):
        t = tokens[j].text
        if t == open_t:
            depth += 1
        elif t == close_t:
            depth -= 1
            if depth == 0:
                return j
    return None


def check_braces(tokens) -> None:
    depth = 0
    for t in tokens:
        if t.text == "{":
            depth += 1
        elif t.text == "}":
            depth -= 1
            if depth < 0:
                raise StructureError("unbalanced braces: '}' without opener")
    if depth != 0:
        raise StructureError("unbalanced braces: unclosed '{'")


def segment_lines(tokens) -> list[tuple[int, tuple[int, int]]]:
    """Group token indices by physical line.

    Returns (lineIndex, (start, end)) with end exclusive; lines without
    tokens do not appear.  Token line numbers are nondecreasing, so each
    line's tokens form one contiguous index range.
    """
    out: list[tuple[int, tuple[int, int]]] = []
    i = 0
    n = len(tokens)
    while i < n:
        line = tokens[i].line
        j = i
        while j < n and tokens[j].line == line:
            j += 1
        out.append((line, (i, j)))
        i = j
    return out


def _top_level_semicolons(tokens, lo: int, hi: int) -> int:
    depth = 0
    count = 0
    for j in range(lo, hi):
        t = tokens[j].text
        if t == "(":
            depth += 1
        elif t == ")":
            depth -= 1
        elif t == ";" and depth == 0:
            count += 1
    return count


def find_constructs(tokens) -> list[ConstructSpan]:
    spans: list[ConstructSpan] = []
    n = len(tokens)
    for i, tok in enumerate(tokens):
        nxt = tokens[i + 1].text if i + 1 < n else ""
        if nxt != "(":
            continue
        close = _match_forward(tokens, i + 1, "(", ")")
        if close is None:
            continue
        inner_lo, inner_hi = i + 2, close
        if tok.kind == KEYWORD:
            if tok.text in _CONDITION_KEYWORDS and inner_hi > inner_lo:
                spans.append(ConstructSpan(_CONDITION_KEYWORDS[tok.text], inner_lo, inner_hi))
            elif tok.text == "for" and inner_hi > inner_lo:
                # Classic for headers only: exactly two top-level semicolons.
                if _top_level_semicolons(tokens, inner_lo, inner_hi) == 2:
                    spans.append(ConstructSpan(FOR_CONTROL, inner_lo, inner_hi))
            elif tok.text == "catch" and inner_hi > inner_lo:
                spans.append(ConstructSpan(CATCH_PARAMETER, inner_lo, inner_hi))
            continue
        if tok.kind == IDENTIFIER or tok.text in (")", "]"):
            if _is_definition_site(tokens, i, close):
                continue
            if inner_hi > inner_lo:
                spans.append(ConstructSpan(CALL_ARGUMENTS, inner_lo, inner_hi))
    spans.sort(key=lambda s: (s.start, s.end, s.kind))
    return spans


def _skip_throws(tokens, i: int) -> int:
    n = len(tokens)
    if i < n and tokens[i].text == "throws":
        i += 1
        while i < n and (tokens[i].kind == IDENTIFIER or tokens[i].text in (".", ",")):
            i += 1
    return i


def _is_definition_site(tokens, name_idx: int, close_idx: int) -> bool:
    """Parameter list of a method/constructor definition, not a call.

    Matches "name ( ... ) [throws ...] {" unless the name follows "new"
    (anonymous class instantiation is still a constructor call).
    """
    after = _skip_throws(tokens, close_idx + 1)
    if after >= len(tokens) or tokens[after].text != "{":
        return False
    prev = tokens[name_idx - 1].text if name_idx > 0 else ""
    return prev != "new"


def count_statements(tokens, lo: int, hi: int) -> int:
    """Number of top-level statements in tokens[lo:hi] (a block interior).

    Semicolon-terminated statements and compound statements (if/else
    chains, loops, try/catch/finally, switch, bare blocks) each count
    as one.  Braces inside expressions (array initializers, lambdas,
    anonymous classes) do not end a statement.
    """
    count = 0
    i = lo
    while i < hi:
        if tokens[i].text == ";":
            count += 1
            i += 1
            continue
        first_idx = i
        if (
            tokens[i].kind == IDENTIFIER
            and i + 1 < hi
            and tokens[i + 1].text == ":"
        ):
            first_idx = i + 2  # labeled statement
            if first_idx >= hi:
                count += 1
                break
        first = tokens[first_idx].text
        if first == "{":
            close = _match_forward(tokens, first_idx, "{", "}", hi)
            i = hi if close is None else close + 1
            count += 1
            continue
        started_do = first == "do"
        is_construct = first in ("if", "for", "while", "switch", "try", "synchronized")
        j = first_idx
        if first == ";":
            count += 1
            i = first_idx + 1
            continue
        while j < hi:
            t = tokens[j].text
            if t == "(":
                close = _match_forward(tokens, j, "(", ")", hi)
                j = hi if close is None else close + 1
                continue
            if t == "{":
                close = _match_forward(tokens, j, "{", "}", hi)
                j = hi if close is None else close + 1
                if j < hi and tokens[j].text in ("else", "catch", "finally"):
                    j += 1
                    continue
                if j < hi and tokens[j].text == "while" and started_do:
                    j += 1
                    continue
                if not (is_construct or started_do):
                    if j < hi and tokens[j].text == ";":
                        j += 1  # expression statement containing braces
                        break
                    continue
                break
            if t == ";":
                j += 1
                if first == "if" and j < hi and tokens[j].text == "else":
                    j += 1
                    continue
                if started_do and j < hi and tokens[j].text == "while":
                    j += 1
                    continue
                break
            j += 1
        count += 1
        i = j
    return count


def find_blocks(tokens) -> list[BlockSpan]:
    """All balanced {...} pairs, in order of their opening brace."""
    stack: list[int] = []
    pairs: list[tuple[int, int]] = []
    for j, t in enumerate(tokens):
        if t.text == "{":
            stack.append(j)
        elif t.text == "}":
            if not stack:
                raise StructureError("unbalanced braces: '}' without opener")
            pairs.append((stack.pop(), j))
    if stack:
        raise StructureError("unbalanced braces: unclosed '{'")
    pairs.sort()
    return [
        BlockSpan(open_i, close_i, count_statements(tokens, open_i + 1, close_i))
        for open_i, close_i in pairs
    ]


def _signature_start(tokens, name_idx: int) -> int:
    i = name_idx
    while i > 0:
        p = tokens[i - 1]
        if (
            p.kind in ("annotation", "type-keyword", IDENTIFIER)
            or p.text in _MODIFIERS
            or p.text in _SIG_LINK_TEXTS
        ):
            i -= 1
        else:
            break
    return i


def method_name(tokens) -> str:
    """Identifier immediately preceding the parameter list of a signature."""
    for i, t in enumerate(tokens):
        if t.text == "{":
            break
        if (
            t.kind == IDENTIFIER
            and i + 1 < len(tokens)
            and tokens[i + 1].text == "("
        ):
            return t.text
    return ""


def _extract_from_source(source: str) -> list[ExtractedMethod]:
    tokens, starts, ends = _scan(source)
    check_braces(tokens)
    found: list[ExtractedMethod] = []
    i = 0
    n = len(tokens)
    while i < n:
        t = tokens[i]
        if (
            t.kind == IDENTIFIER
            and i + 1 < n
            and tokens[i + 1].text == "("
            and (i == 0 or tokens[i - 1].text != "new")
        ):
            close = _match_forward(tokens, i + 1, "(", ")")
            if close is not None:
                after = _skip_throws(tokens, close + 1)
                if after < n and tokens[after].text == "{":
                    body_end = _match_forward(tokens, after, "{", "}")
                    if body_end is not None:
                        sig = _signature_start(tokens, i)
                        text = source[starts[sig] : ends[body_end]]
                        found.append(ExtractedMethod(t.text, tuple(lex(text)), text))
                        i = body_end + 1
                        continue
        i += 1
    return found


def extract_methods(sources: Iterable[str]):
    """Extract method-like declarations from whole Java source texts.

    Returns (methods, skipped) where skipped holds (sourceIndex, reason)
    for inputs that failed to lex or had unbalanced braces.
    """
    methods: list[ExtractedMethod] = []
    skipped: list[tuple[int, str]] = []
    for idx, source in enumerate(sources):
        try:
            methods.extend(_extract_from_source(source))
        except (LexError, StructureError) as exc:
            skipped.append((idx, str(exc)))
    return methods, skipped
