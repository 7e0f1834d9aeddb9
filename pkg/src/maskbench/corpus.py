"""Corpus construction: ingest, filtering, deduplication, splitting.

Methods flow through as MethodRecord objects; every record is lexable
and brace-balanced by construction (anything else is dropped at ingest
with a diagnostic).  All random choices are seeded and order-stable so
that reruns produce byte-identical artifacts.
"""

from __future__ import annotations

import hashlib
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from . import formats
from .abstraction import abstract_tokens
from .javalex import LexError, Token, lex
from .structure import (
    StructureError,
    check_braces,
    extract_methods,
    method_name,
    segment_lines,
)

TRAINING_CAP = 750_000


@dataclass
class MethodRecord:
    method_id: str
    domain: str
    code: str
    name: str
    raw_tokens: list[Token]
    source_line_count: int
    line_map: list[tuple[int, tuple[int, int]]]
    abstract_texts: list[str] | None = None
    abstraction_map: dict[str, str] | None = None

    @property
    def raw_texts(self) -> list[str]:
        return [t.text for t in self.raw_tokens]

    def texts(self, representation: str) -> list[str]:
        if representation == "raw":
            return self.raw_texts
        if representation == "abstract":
            if self.abstract_texts is None:
                raise ValueError(f"{self.method_id}: abstract representation not built")
            return list(self.abstract_texts)
        raise ValueError(f"unknown representation {representation!r}")


@dataclass
class IngestResult:
    records: list[MethodRecord]
    skipped: list[str] = field(default_factory=list)


def build_record(method_id: str, domain: str, code: str) -> MethodRecord:
    tokens = lex(code)
    if not tokens:
        raise LexError("no tokens", 1)
    check_braces(tokens)
    return MethodRecord(
        method_id=method_id,
        domain=domain,
        code=code,
        name=method_name(tokens),
        raw_tokens=tokens,
        source_line_count=len(code.splitlines()),
        line_map=segment_lines(tokens),
    )


def ingest_jsonl(path: str | Path) -> IngestResult:
    result = IngestResult(records=[])
    for rec in formats.read_jsonl(path, formats.CORPUS, header_required=False):
        try:
            mid, domain, code = rec["id"], rec["domain"], rec["code"]
        except (TypeError, KeyError):
            result.skipped.append(f"malformed record: {str(rec)[:80]}")
            continue
        try:
            result.records.append(build_record(str(mid), str(domain), code))
        except (LexError, StructureError, ValueError) as exc:
            result.skipped.append(f"{mid}: {exc}")
    return result


def ingest_directory(path: str | Path, domain: str) -> IngestResult:
    """Extract methods from every .java file under path (sorted walk)."""
    root = Path(path)
    result = IngestResult(records=[])
    for java_file in sorted(root.rglob("*.java")):
        try:
            source = java_file.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise OSError(f"unreadable source {java_file}: {exc}") from exc
        methods, skipped = extract_methods([source])
        rel = java_file.relative_to(root).as_posix()
        for _, reason in skipped:
            result.skipped.append(f"{rel}: {reason}")
        for k, m in enumerate(methods):
            mid = f"{rel}:{k}:{m.name}"
            try:
                result.records.append(build_record(mid, domain, m.text))
            except (LexError, StructureError, ValueError) as exc:
                result.skipped.append(f"{mid}: {exc}")
    return result


def ingest(path: str | Path, domain: str = "java") -> IngestResult:
    p = Path(path)
    if p.is_dir():
        return ingest_directory(p, domain)
    return ingest_jsonl(p)


def filter_records(records) -> tuple[list[MethodRecord], Counter]:
    """Apply the corpus filters; returns (kept, dropCountsByReason)."""
    kept: list[MethodRecord] = []
    dropped: Counter[str] = Counter()
    for r in records:
        if r.source_line_count < 3:
            dropped["short-method"] += 1
        elif "test" in r.name.lower():
            dropped["test-name"] += 1
        elif r.name == "toString":
            dropped["tostring"] += 1
        elif len(r.raw_tokens) > 100:
            dropped["too-many-tokens"] += 1
        else:
            kept.append(r)
    return kept, dropped


def _pick_key(seed: int, method_id: str) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    h.update(str(seed).encode("utf-8"))
    h.update(b"\x1f")
    h.update(method_id.encode("utf-8"))
    return h.digest()


def dedup(records, representation: str, seed: int) -> list[MethodRecord]:
    """Drop exact token-sequence duplicates, keeping one seeded representative.

    The representative choice depends only on (seed, methodId), so the
    result is insensitive to input order.
    """
    groups: dict[tuple[str, ...], MethodRecord] = {}
    for r in records:
        key = tuple(r.texts(representation))
        best = groups.get(key)
        if best is None or _pick_key(seed, r.method_id) < _pick_key(seed, best.method_id):
            groups[key] = r
    keep_ids = {r.method_id for r in groups.values()}
    return [r for r in records if r.method_id in keep_ids]


def abstract_records(records, idioms=None) -> list[MethodRecord]:
    """Populate abstract_texts and abstraction_map on every record."""
    for r in records:
        abs_tokens, mapping = abstract_tokens(r.raw_tokens, idioms)
        r.abstract_texts = [t.text for t in abs_tokens]
        r.abstraction_map = mapping
    return list(records)


@dataclass(frozen=True)
class SplitAssignment:
    method_id: str
    split: str  # train|eval|test


def split_records(records, seed: int) -> list[SplitAssignment]:
    """Seeded-shuffle contiguous 80/10/10 split by method.

    Train and eval sizes are floored; the remainder goes to test.
    """
    ids = [r.method_id for r in records]
    if len(ids) < 10:
        raise ValueError(f"need at least 10 methods to split, got {len(ids)}")
    rnd = random.Random(seed)
    rnd.shuffle(ids)
    n = len(ids)
    n_train = (n * 8) // 10
    n_eval = n // 10
    out = []
    for pos, mid in enumerate(ids):
        if pos < n_train:
            split = "train"
        elif pos < n_train + n_eval:
            split = "eval"
        else:
            split = "test"
        out.append(SplitAssignment(mid, split))
    return out


def cap_training(items, cap: int, seed: int) -> list:
    """Seeded subset of exactly cap items, preserving canonical order."""
    if cap <= 0:
        raise ValueError(f"cap must be positive, got {cap}")
    items = list(items)
    if len(items) <= cap:
        return items
    rnd = random.Random(seed)
    picked = sorted(rnd.sample(range(len(items)), cap))
    return [items[i] for i in picked]


# --- serialization ---------------------------------------------------------

def write_corpus(path, records) -> None:
    formats.write_jsonl(
        path,
        formats.CORPUS,
        ({"id": r.method_id, "domain": r.domain, "code": r.code} for r in records),
    )


def write_abstracted(path, records) -> None:
    formats.write_jsonl(
        path,
        formats.ABSTRACTED,
        (
            {
                "id": r.method_id,
                "domain": r.domain,
                "code": r.code,
                "abstract": r.abstract_texts,
            }
            for r in records
        ),
    )


def write_maps(path, records) -> None:
    formats.write_jsonl(
        path,
        formats.ABSTRACTION_MAPS,
        ({"id": r.method_id, "map": r.abstraction_map} for r in records),
    )


def read_corpus(path, abstracted: bool = False) -> list[MethodRecord]:
    fmt = formats.ABSTRACTED if abstracted else formats.CORPUS
    records = []
    for rec in formats.read_jsonl(path, fmt, header_required=abstracted):
        r = build_record(str(rec["id"]), str(rec["domain"]), rec["code"])
        if abstracted:
            r.abstract_texts = list(rec["abstract"])
            if len(r.abstract_texts) != len(r.raw_tokens):
                raise formats.FormatError(
                    f"{r.method_id}: abstract length {len(r.abstract_texts)} "
                    f"!= raw length {len(r.raw_tokens)}"
                )
        records.append(r)
    return records


def read_corpus_auto(path) -> list[MethodRecord]:
    """Read a corpus file whichever of the two corpus formats it declares."""
    fmt = formats.peek_format(path)
    return read_corpus(path, abstracted=fmt == formats.ABSTRACTED)


def write_splits(path, assignments) -> None:
    formats.write_jsonl(
        path,
        formats.SPLIT_MANIFEST,
        ({"id": a.method_id, "split": a.split} for a in assignments),
    )


def read_splits(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for rec in formats.read_jsonl(path, formats.SPLIT_MANIFEST):
        out[str(rec["id"])] = str(rec["split"])
    return out
