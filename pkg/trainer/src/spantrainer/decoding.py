"""Batched greedy decoding under a fixed subword budget."""

from __future__ import annotations

from dataclasses import dataclass

import torch

from .data import collate
from .tokenizer import BOS, EOS, PAD, Tokenizer


@dataclass(frozen=True)
class Decoded:
    instance_id: str
    token_texts: tuple[str, ...]
    truncated: bool


def greedy_decode(model, examples, tok: Tokenizer, batch_size: int, budget: int) -> list[Decoded]:
    """Decode every example greedily, at most `budget` subwords each.

    The encoder runs once per batch; each step re-runs the decoder on the
    grown prefix (no KV cache — sequences are short by construction).
    """
    pad_id, bos_id, eos_id = (tok.special_id(s) for s in (PAD, BOS, EOS))
    # the decoder prefix holds BOS plus the emitted ids, so it may grow one
    # past the budget; keep it inside the learned position table
    budget = min(budget, model.config.max_positions - 1)
    out: list[Decoded] = []
    model.eval()
    with torch.no_grad():
        for start in range(0, len(examples), batch_size):
            batch = examples[start : start + batch_size]
            tensors = collate(batch, tok)
            src, src_pad = tensors["src"], tensors["src_pad"]
            memory = model.encode(src, src_pad)
            n = len(batch)
            dec = torch.full((n, 1), bos_id, dtype=torch.long)
            finished = torch.zeros(n, dtype=torch.bool)
            for _ in range(budget):
                logits = model.decode(memory, src_pad, dec)
                nxt = logits[:, -1, :].argmax(dim=-1)
                nxt = torch.where(finished, torch.full_like(nxt, pad_id), nxt)
                dec = torch.cat([dec, nxt.unsqueeze(1)], dim=1)
                finished |= nxt == eos_id
                if bool(finished.all()):
                    break
            for k, example in enumerate(batch):
                ids = []
                for i in dec[k, 1:].tolist():
                    if i in (eos_id, pad_id):
                        break
                    ids.append(i)
                # model-emitted ids may not form valid UTF-8 mid-training
                text = tok.decode(ids, errors="replace")
                out.append(
                    Decoded(
                        instance_id=example.instance_id,
                        token_texts=tuple(text.split()),
                        truncated=not bool(finished[k]),
                    )
                )
    return out


def perfect_rate(decoded, examples) -> float:
    """Fraction of examples whose decoded token texts equal the reference."""
    if not examples:
        raise ValueError("cannot score an empty example list")
    hits = sum(d.token_texts == e.masked for d, e in zip(decoded, examples))
    return hits / len(examples)
