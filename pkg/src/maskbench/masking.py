"""Masked-instance generation at token, construct and block level.

Sites are always located on the raw token stream; because abstraction
is token-aligned, the same index ranges apply verbatim to the abstract
representation, which guarantees raw/abstract instance parallelism.

Token level masks the last x tokens of each line with more than one
token, where x is uniform over 1..n-1 (capped at 10) and derived purely
from (seed, methodId, lineIndex).  Construct level masks whole spans of
at most 10 tokens; block level masks {...} groups (braces included)
containing at most 2 top-level statements.  Any instance whose masked
span is longer than its surrounding context is dropped.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from . import formats
from .corpus import MethodRecord
from .structure import find_blocks, find_constructs

MASK_SENTINEL = "<MASK>"
TOKEN_SPAN_CAP = 10
CONSTRUCT_SPAN_CAP = 10
BLOCK_STATEMENT_CAP = 2

LEVELS = ("token", "construct", "block")
REPRESENTATIONS = ("raw", "abstract")


@dataclass
class MaskedInstance:
    instance_id: str
    method_id: str
    level: str
    representation: str
    prefix: list[str]
    masked: list[str]
    suffix: list[str]
    site: dict


def draw_span_length(seed: int, method_id: str, line_index: int, line_tokens: int) -> int:
    """Masked-token count for one line: uniform 1..n-1, then capped at 10.

    Pure function of its arguments, so raw and abstract variants of the
    same method draw identical lengths.
    """
    if line_tokens < 2:
        raise ValueError("line must have more than one token")
    h = hashlib.blake2b(
        f"{method_id}\x1f{line_index}".encode("utf-8"),
        digest_size=8,
        key=str(seed).encode("utf-8"),
    )
    x = 1 + int.from_bytes(h.digest(), "big") % (line_tokens - 1)
    return min(x, TOKEN_SPAN_CAP)


def _ratio_ok(prefix_len: int, masked_len: int, suffix_len: int) -> bool:
    return masked_len <= prefix_len + suffix_len


def _build(record, level, representation, iid, lo, hi, site) -> MaskedInstance | None:
    texts = record.texts(representation)
    prefix, masked, suffix = texts[:lo], texts[lo:hi], texts[hi:]
    if not masked or not _ratio_ok(len(prefix), len(masked), len(suffix)):
        return None
    return MaskedInstance(
        instance_id=iid,
        method_id=record.method_id,
        level=level,
        representation=representation,
        prefix=prefix,
        masked=masked,
        suffix=suffix,
        site=site,
    )


def mask_tokens(record: MethodRecord, seed: int, representation: str) -> list[MaskedInstance]:
    out = []
    for line, (lo, hi) in record.line_map:
        n_line = hi - lo
        if n_line < 2:
            continue
        x = draw_span_length(seed, record.method_id, line, n_line)
        inst = _build(
            record,
            "token",
            representation,
            f"{record.method_id}|token|L{line}",
            hi - x,
            hi,
            {"kind": "line", "line": line, "start": hi - x, "end": hi},
        )
        if inst is not None:
            out.append(inst)
    return out


def mask_constructs(record: MethodRecord, representation: str) -> list[MaskedInstance]:
    out = []
    for span in find_constructs(record.raw_tokens):
        if span.end - span.start > CONSTRUCT_SPAN_CAP:
            continue
        inst = _build(
            record,
            "construct",
            representation,
            f"{record.method_id}|construct|{span.kind}@{span.start}",
            span.start,
            span.end,
            {"kind": span.kind, "start": span.start, "end": span.end},
        )
        if inst is not None:
            out.append(inst)
    return out


def mask_blocks(record: MethodRecord, representation: str) -> list[MaskedInstance]:
    out = []
    for block in find_blocks(record.raw_tokens):
        if block.statement_count > BLOCK_STATEMENT_CAP:
            continue
        inst = _build(
            record,
            "block",
            representation,
            f"{record.method_id}|block|B{block.start}",
            block.start,
            block.end + 1,  # braces belong to the masked span
            {
                "kind": "block",
                "start": block.start,
                "end": block.end + 1,
                "statements": block.statement_count,
            },
        )
        if inst is not None:
            out.append(inst)
    return out


def mask_record(record, level, seed, representation) -> list[MaskedInstance]:
    if level == "token":
        return mask_tokens(record, seed, representation)
    if level == "construct":
        return mask_constructs(record, representation)
    if level == "block":
        return mask_blocks(record, representation)
    raise ValueError(f"unknown masking level {level!r}")


def render_input(instance: MaskedInstance) -> list[str]:
    """Model input: prefix, one sentinel in place of the span, suffix."""
    return list(instance.prefix) + [MASK_SENTINEL] + list(instance.suffix)


def write_dataset(path, instances) -> None:
    formats.write_jsonl(
        path,
        formats.MASKED_DATASET,
        (
            {
                "iid": inst.instance_id,
                "mid": inst.method_id,
                "level": inst.level,
                "repr": inst.representation,
                "prefix": inst.prefix,
                "masked": inst.masked,
                "suffix": inst.suffix,
                "site": inst.site,
            }
            for inst in instances
        ),
    )


def read_dataset(path) -> list[MaskedInstance]:
    out = []
    for rec in formats.read_jsonl(path, formats.MASKED_DATASET):
        out.append(
            MaskedInstance(
                instance_id=str(rec["iid"]),
                method_id=str(rec["mid"]),
                level=str(rec["level"]),
                representation=str(rec["repr"]),
                prefix=[str(t) for t in rec["prefix"]],
                masked=[str(t) for t in rec["masked"]],
                suffix=[str(t) for t in rec["suffix"]],
                site=dict(rec["site"]),
            )
        )
    return out
