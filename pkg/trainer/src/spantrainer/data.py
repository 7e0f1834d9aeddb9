"""Masked-dataset loading and example assembly.

Instances arrive in the shared masked-dataset JSONL layout — records
{"iid", "mid", "level", "repr", "prefix", "masked", "suffix", "site"}
behind a {"format": "masked-dataset@1"} header.  The model input is the
prefix, one mask sentinel, and the suffix, joined with single spaces and
subword-encoded; the target is the masked span's subwords followed by
the end-of-sequence marker.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch

from .tokenizer import BOS, EOS, MASK, PAD, Tokenizer

MASKED_DATASET_FORMAT = "masked-dataset@1"


class FormatError(ValueError):
    """Input file does not carry the expected format tag."""


@dataclass(frozen=True)
class Instance:
    instance_id: str
    prefix: tuple[str, ...]
    masked: tuple[str, ...]
    suffix: tuple[str, ...]


@dataclass(frozen=True)
class Example:
    instance_id: str
    input_ids: tuple[int, ...]   # prefix ++ sentinel ++ suffix, subword ids
    target_ids: tuple[int, ...]  # masked span subword ids ++ EOS
    masked: tuple[str, ...]      # reference token texts


def read_dataset(path: str | Path) -> list[Instance]:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"dataset not found: {p}")
    out: list[Instance] = []
    with open(p, encoding="utf-8") as fh:
        first = fh.readline()
        try:
            header = json.loads(first) if first.strip() else None
        except json.JSONDecodeError as exc:
            raise FormatError(f"{p}:1: not JSON: {exc}") from exc
        if header != {"format": MASKED_DATASET_FORMAT}:
            raise FormatError(f"{p}: expected a {MASKED_DATASET_FORMAT} header")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{p}:{lineno}: not JSON: {exc}") from exc
            try:
                out.append(
                    Instance(
                        instance_id=str(rec["iid"]),
                        prefix=tuple(str(t) for t in rec["prefix"]),
                        masked=tuple(str(t) for t in rec["masked"]),
                        suffix=tuple(str(t) for t in rec["suffix"]),
                    )
                )
            except (KeyError, TypeError) as exc:
                raise ValueError(f"{p}:{lineno}: bad instance record: {exc}") from exc
    return out


def build_example(instance: Instance, tok: Tokenizer) -> Example:
    input_text = " ".join(list(instance.prefix) + [MASK] + list(instance.suffix))
    target_text = " ".join(instance.masked)
    return Example(
        instance_id=instance.instance_id,
        input_ids=tuple(tok.encode(input_text)),
        target_ids=tuple(tok.encode(target_text)) + (tok.special_id(EOS),),
        masked=instance.masked,
    )


def build_examples(instances, tok: Tokenizer, max_positions: int) -> list[Example]:
    tok.require_canonical_specials()
    out = []
    for instance in instances:
        ex = build_example(instance, tok)
        if len(ex.input_ids) > max_positions or len(ex.target_ids) >= max_positions:
            raise ValueError(
                f"instance {instance.instance_id} exceeds the position budget "
                f"({len(ex.input_ids)} input / {len(ex.target_ids)} target subwords, "
                f"limit {max_positions})"
            )
        out.append(ex)
    return out


def collate(examples, tok: Tokenizer) -> dict[str, torch.Tensor]:
    """Pad a batch: src + padding mask, decoder input (BOS-shifted), target.

    Target positions beyond each example's length hold the PAD id, which
    the loss ignores.
    """
    pad_id = tok.special_id(PAD)
    bos_id = tok.special_id(BOS)
    src_len = max(len(e.input_ids) for e in examples)
    tgt_len = max(len(e.target_ids) for e in examples)
    n = len(examples)
    src = torch.full((n, src_len), pad_id, dtype=torch.long)
    src_pad = torch.ones((n, src_len), dtype=torch.bool)
    dec_in = torch.full((n, tgt_len), pad_id, dtype=torch.long)
    target = torch.full((n, tgt_len), pad_id, dtype=torch.long)
    for k, e in enumerate(examples):
        src[k, : len(e.input_ids)] = torch.tensor(e.input_ids, dtype=torch.long)
        src_pad[k, : len(e.input_ids)] = False
        shifted = (bos_id,) + e.target_ids[:-1]
        dec_in[k, : len(shifted)] = torch.tensor(shifted, dtype=torch.long)
        target[k, : len(e.target_ids)] = torch.tensor(e.target_ids, dtype=torch.long)
    return {"src": src, "src_pad": src_pad, "dec_in": dec_in, "target": target}
