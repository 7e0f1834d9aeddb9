"""Byte-level BPE tokenizer with atomic special tokens.

The base alphabet is the 256 byte values; training iteratively merges
the most frequent adjacent symbol pair (lexicographically smallest pair
on ties) until the vocabulary budget is reached or no pair occurs at
least twice.  Merges never cross whitespace boundaries: text is chunked
into alternating whitespace / non-whitespace runs and each chunk is
encoded on its own, which also makes decode(encode(s)) == s exact for
arbitrary input.

Bytes are rendered as printable characters via the usual byte-to-unicode
bijection so the merges file can store "left right" pairs without any
escaping; merged symbols are plain concatenations of those characters.
"""

from __future__ import annotations

import json
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from . import formats

DEFAULT_SPECIALS = ("<PAD>", "<MASK>", "<BOS>", "<EOS>")

_CHUNK_RE = re.compile(r"\s+|\S+")


def _bytes_to_unicode() -> dict[int, str]:
    # Printable ASCII and two Latin-1 ranges map to themselves; everything
    # else gets shifted into the private area above 0x100.
    bs = list(range(33, 127)) + list(range(161, 173)) + list(range(174, 256))
    cs = bs[:]
    m = 0
    for b in range(256):
        if b not in bs:
            bs.append(b)
            cs.append(256 + m)
            m += 1
    return {b: chr(c) for b, c in zip(bs, cs)}


BYTE_TO_CHAR = _bytes_to_unicode()
CHAR_TO_BYTE = {c: b for b, c in BYTE_TO_CHAR.items()}
_BYTE_SYMBOLS = [BYTE_TO_CHAR[b] for b in range(256)]


@dataclass
class BpeModel:
    merges: list[tuple[str, str]]
    specials: tuple[str, ...]
    vocab: dict[str, int]        # byte and merged symbols
    special_ids: dict[str, int]  # specials live in their own namespace
    ranks: dict[tuple[str, str], int] = field(default_factory=dict)
    _id_to_entry: dict[int, tuple[str, bool]] = field(default_factory=dict)
    _chunk_cache: dict[str, tuple[int, ...]] = field(default_factory=dict)
    _special_re: re.Pattern | None = None

    def __post_init__(self):
        if not self.ranks:
            self.ranks = {pair: i for i, pair in enumerate(self.merges)}
        self._id_to_entry = {i: (s, True) for s, i in self.special_ids.items()}
        self._id_to_entry.update({i: (s, False) for s, i in self.vocab.items()})
        if self.specials:
            pattern = "|".join(re.escape(s) for s in sorted(self.specials, key=len, reverse=True))
            self._special_re = re.compile(f"({pattern})")

    @property
    def vocab_size(self) -> int:
        return len(self.vocab) + len(self.special_ids)


def _build_model(merges, specials) -> BpeModel:
    special_ids = {s: i for i, s in enumerate(specials)}
    base = len(specials)
    vocab = {sym: base + b for b, sym in enumerate(_BYTE_SYMBOLS)}
    nxt = base + 256
    for left, right in merges:
        vocab[left + right] = nxt
        nxt += 1
    return BpeModel(list(merges), tuple(specials), vocab, special_ids)


def train_bpe(corpus, vocab_size: int, specials=DEFAULT_SPECIALS) -> BpeModel:
    """Learn merges from an iterable of texts (typically token texts)."""
    specials = tuple(specials)
    budget = vocab_size - 256 - len(specials)
    if budget < 0:
        raise ValueError(
            f"vocab_size {vocab_size} below byte alphabet plus {len(specials)} specials"
        )
    word_freq: Counter[tuple[str, ...]] = Counter()
    for text in corpus:
        for chunk in _CHUNK_RE.findall(text):
            word_freq[tuple(BYTE_TO_CHAR[b] for b in chunk.encode("utf-8"))] += 1

    words = [list(w) for w in word_freq]
    freqs = [word_freq[w] for w in word_freq]
    pair_counts: Counter[tuple[str, str]] = Counter()
    where: defaultdict[tuple[str, str], set[int]] = defaultdict(set)
    for wi, word in enumerate(words):
        for a, b in zip(word, word[1:]):
            pair_counts[(a, b)] += freqs[wi]
            where[(a, b)].add(wi)

    merges: list[tuple[str, str]] = []
    # Distinct merge pairs can concatenate to the same text; skipping those
    # keeps symbol texts unique so the vocabulary size stays exact.
    symbols_taken = set(_BYTE_SYMBOLS)
    while len(merges) < budget:
        best = None
        best_count = 1
        for pair, count in pair_counts.items():
            if count > best_count or (count == best_count and (best is None or pair < best)):
                if count >= 2 and pair[0] + pair[1] not in symbols_taken:
                    best, best_count = pair, count
        if best is None:
            break
        symbols_taken.add(best[0] + best[1])
        merges.append(best)
        merged = best[0] + best[1]
        for wi in sorted(where[best]):
            word = words[wi]
            f = freqs[wi]
            for a, b in zip(word, word[1:]):
                pair_counts[(a, b)] -= f
                if pair_counts[(a, b)] <= 0:
                    del pair_counts[(a, b)]
                where[(a, b)].discard(wi)
            new_word = []
            j = 0
            while j < len(word):
                if j + 1 < len(word) and (word[j], word[j + 1]) == best:
                    new_word.append(merged)
                    j += 2
                else:
                    new_word.append(word[j])
                    j += 1
            words[wi] = new_word
            for a, b in zip(new_word, new_word[1:]):
                pair_counts[(a, b)] += f
                where[(a, b)].add(wi)
    return _build_model(merges, specials)


def _encode_chunk(model: BpeModel, chunk: str) -> tuple[int, ...]:
    cached = model._chunk_cache.get(chunk)
    if cached is not None:
        return cached
    symbols = [BYTE_TO_CHAR[b] for b in chunk.encode("utf-8")]
    while len(symbols) >= 2:
        best_rank = None
        best_pair = None
        for pair in zip(symbols, symbols[1:]):
            rank = model.ranks.get(pair)
            if rank is not None and (best_rank is None or rank < best_rank):
                best_rank, best_pair = rank, pair
        if best_pair is None:
            break
        merged = best_pair[0] + best_pair[1]
        out = []
        j = 0
        while j < len(symbols):
            if j + 1 < len(symbols) and (symbols[j], symbols[j + 1]) == best_pair:
                out.append(merged)
                j += 2
            else:
                out.append(symbols[j])
                j += 1
        symbols = out
    ids = tuple(model.vocab[s] for s in symbols)
    model._chunk_cache[chunk] = ids
    return ids


def encode(model: BpeModel, text: str) -> list[int]:
    """Encode text to ids; special-token substrings stay atomic."""
    ids: list[int] = []
    segments = [text] if model._special_re is None else model._special_re.split(text)
    for k, seg in enumerate(segments):
        if not seg:
            continue
        if k % 2 == 1:  # re.split alternates text / captured special
            ids.append(model.special_ids[seg])
            continue
        for chunk in _CHUNK_RE.findall(seg):
            ids.extend(_encode_chunk(model, chunk))
    return ids


def decode(model: BpeModel, ids) -> str:
    parts: list[str] = []
    buf: list[str] = []

    def flush():
        if buf:
            data = bytes(CHAR_TO_BYTE[c] for sym in buf for c in sym)
            parts.append(data.decode("utf-8"))
            buf.clear()

    for i in ids:
        entry = model._id_to_entry.get(i)
        if entry is None:
            raise ValueError(f"id {i} outside vocabulary")
        sym, is_special = entry
        if is_special:
            flush()
            parts.append(sym)
        else:
            buf.append(sym)
    flush()
    return "".join(parts)


def save_model(model: BpeModel, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "merges.txt", "w", encoding="utf-8") as fh:
        for left, right in model.merges:
            fh.write(f"{left} {right}\n")
    entries = [
        {"sym": s, "id": i, "special": True} for s, i in model.special_ids.items()
    ] + [{"sym": s, "id": i} for s, i in sorted(model.vocab.items(), key=lambda kv: kv[1])]
    formats.write_jsonl(out / "vocab.jsonl", formats.BPE_VOCAB, entries)
    with open(out / "config.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                "format": formats.BPE_CONFIG,
                "specials": list(model.specials),
                "merge_count": len(model.merges),
                "vocab_size": model.vocab_size,
            },
            fh,
            indent=2,
        )
        fh.write("\n")


def load_model(model_dir: str | Path) -> BpeModel:
    src = Path(model_dir)
    with open(src / "config.json", "r", encoding="utf-8") as fh:
        config = json.load(fh)
    if config.get("format") != formats.BPE_CONFIG:
        raise formats.FormatError(f"{src}/config.json: unexpected format")
    merges = []
    with open(src / "merges.txt", "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            left, right = line.split(" ")
            merges.append((left, right))
    model = _build_model(merges, tuple(config["specials"]))
    # vocab.jsonl is the contract of record; verify it agrees.
    for rec in formats.read_jsonl(src / "vocab.jsonl", formats.BPE_VOCAB):
        sym, vid = rec["sym"], rec["id"]
        table = model.special_ids if rec.get("special") else model.vocab
        if table.get(sym) != vid:
            raise formats.FormatError(f"{src}/vocab.jsonl: entry {sym!r} -> {vid} mismatch")
    return model
