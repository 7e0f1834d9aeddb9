"""Versioned JSONL/JSON file helpers shared by all pipeline stages.

Every file the toolkit writes starts with a format header so that readers
can reject artifacts from an incompatible version instead of silently
misparsing them.  Files produced by external tools (input corpora,
prediction files from third-party models) are allowed to omit the header.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

CORPUS = "corpus@1"
ABSTRACTED = "abstracted-corpus@1"
ABSTRACTION_MAPS = "abstraction-maps@1"
MASKED_DATASET = "masked-dataset@1"
SPLIT_MANIFEST = "split-manifest@1"
NGRAM_MODEL = "ngram-model@1"
BPE_VOCAB = "bpe-vocab@1"
BPE_CONFIG = "bpe-config@1"
PREDICTIONS = "predictions@1"
EVAL_REPORT = "evaluation-report@1"
COMPARISON_REPORT = "comparison-report@1"
RUN_CONFIG = "run-config@1"


class FormatError(ValueError):
    """Input file declares a format this build does not understand."""


def write_jsonl(path: str | Path, fmt: str, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format": fmt}) + "\n")
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_jsonl(path: str | Path, fmt: str, header_required: bool = True) -> Iterator[dict]:
    """Yield data records, validating the header line when present."""
    with open(path, "r", encoding="utf-8") as fh:
        first = True
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: not valid JSON ({exc})") from exc
            if first:
                first = False
                if isinstance(rec, dict) and "format" in rec and len(rec) == 1:
                    if rec["format"] != fmt:
                        raise FormatError(
                            f"{path}: format {rec['format']!r}, expected {fmt!r}"
                        )
                    continue
                if header_required:
                    raise FormatError(f"{path}: missing format header ({fmt!r})")
            yield rec


def peek_format(path: str | Path) -> str | None:
    """Format declared by the file's header line, or None if headerless."""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                return None
            if isinstance(rec, dict) and "format" in rec and len(rec) == 1:
                return str(rec["format"])
            return None
    return None


def write_json(path: str | Path, fmt: str, payload: dict) -> None:
    body = {"format": fmt}
    body.update(payload)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(body, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def read_json(path: str | Path, fmt: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        body = json.load(fh)
    if body.get("format") != fmt:
        raise FormatError(f"{path}: format {body.get('format')!r}, expected {fmt!r}")
    return body
