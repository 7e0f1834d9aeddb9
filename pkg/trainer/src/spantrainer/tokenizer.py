"""Byte-level BPE applier driven by serialized model files.

Loads the three-file model layout written by the dataset toolkit
(`config.json`, `merges.txt`, `vocab.jsonl`) and reproduces its encoding
exactly: text is chunked into alternating whitespace / non-whitespace
runs, each chunk's UTF-8 bytes are rendered through the byte-to-unicode
bijection, and adjacent symbol pairs merge in rank order.  Special
tokens are atomic wherever their text appears.  The vocabulary file is
the contract of record: every id comes from it, and the merge list must
be consistent with it or loading fails.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

PAD, MASK, BOS, EOS = "<PAD>", "<MASK>", "<BOS>", "<EOS>"
CANONICAL_SPECIALS = (PAD, MASK, BOS, EOS)

_CHUNK_RE = re.compile(r"\s+|\S+")


class TokenizerError(ValueError):
    """Model files are missing, malformed, or internally inconsistent."""


def _bytes_to_unicode() -> dict[int, str]:
    # Printable ASCII and two Latin-1 ranges map to themselves; everything
    # else shifts into the private area above 0x100.  This bijection is part
    # of the file format: merges.txt and vocab.jsonl store symbols in it.
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
class Tokenizer:
    specials: tuple[str, ...]
    special_ids: dict[str, int]
    vocab: dict[str, int]                 # byte and merged symbols
    ranks: dict[tuple[str, str], int]
    _id_to_entry: dict[int, tuple[str, bool]] = field(default_factory=dict)
    _chunk_cache: dict[str, tuple[int, ...]] = field(default_factory=dict)
    _special_re: re.Pattern | None = None

    def __post_init__(self):
        self._id_to_entry = {i: (s, True) for s, i in self.special_ids.items()}
        self._id_to_entry.update({i: (s, False) for s, i in self.vocab.items()})
        if self.specials:
            pattern = "|".join(
                re.escape(s) for s in sorted(self.specials, key=len, reverse=True)
            )
            self._special_re = re.compile(f"({pattern})")

    @property
    def vocab_size(self) -> int:
        return len(self.vocab) + len(self.special_ids)

    def special_id(self, text: str) -> int:
        try:
            return self.special_ids[text]
        except KeyError:
            raise TokenizerError(f"tokenizer lacks special token {text!r}") from None

    def require_canonical_specials(self) -> None:
        missing = [s for s in CANONICAL_SPECIALS if s not in self.special_ids]
        if missing:
            raise TokenizerError(
                f"tokenizer missing required special tokens: {', '.join(missing)}"
            )

    def _encode_chunk(self, chunk: str) -> tuple[int, ...]:
        cached = self._chunk_cache.get(chunk)
        if cached is not None:
            return cached
        symbols = [BYTE_TO_CHAR[b] for b in chunk.encode("utf-8")]
        while len(symbols) >= 2:
            best_rank = None
            best_pair = None
            for pair in zip(symbols, symbols[1:]):
                rank = self.ranks.get(pair)
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
        ids = tuple(self.vocab[s] for s in symbols)
        self._chunk_cache[chunk] = ids
        return ids

    def encode(self, text: str) -> list[int]:
        """Encode text to ids; special-token substrings stay atomic."""
        ids: list[int] = []
        segments = [text] if self._special_re is None else self._special_re.split(text)
        for k, seg in enumerate(segments):
            if not seg:
                continue
            if k % 2 == 1:  # re.split alternates text / captured special
                ids.append(self.special_ids[seg])
                continue
            for chunk in _CHUNK_RE.findall(seg):
                ids.extend(self._encode_chunk(chunk))
        return ids

    def decode(self, ids, errors: str = "strict") -> str:
        """Map ids back to text.

        Model-emitted id sequences may form invalid UTF-8; prediction
        paths pass errors="replace" so decoding never aborts a run.
        """
        parts: list[str] = []
        buf: list[str] = []

        def flush():
            if buf:
                data = bytes(CHAR_TO_BYTE[c] for sym in buf for c in sym)
                parts.append(data.decode("utf-8", errors=errors))
                buf.clear()

        for i in ids:
            entry = self._id_to_entry.get(int(i))
            if entry is None:
                raise TokenizerError(f"id {i} outside vocabulary")
            sym, is_special = entry
            if is_special:
                flush()
                parts.append(sym)
            else:
                buf.append(sym)
        flush()
        return "".join(parts)


def load_tokenizer(model_dir: str | Path) -> Tokenizer:
    src = Path(model_dir)
    config_path = src / "config.json"
    if not config_path.exists():
        raise FileNotFoundError(f"tokenizer model not found: {config_path}")
    with open(config_path, encoding="utf-8") as fh:
        config = json.load(fh)
    if config.get("format") != "bpe-config@1":
        raise TokenizerError(f"{config_path}: unexpected format tag")
    specials = tuple(str(s) for s in config["specials"])

    merges: list[tuple[str, str]] = []
    with open(src / "merges.txt", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            left, right = line.split(" ")
            merges.append((left, right))

    special_ids: dict[str, int] = {}
    vocab: dict[str, int] = {}
    with open(src / "vocab.jsonl", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header != {"format": "bpe-vocab@1"}:
            raise TokenizerError(f"{src}/vocab.jsonl: unexpected format tag")
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec.get("special"):
                special_ids[str(rec["sym"])] = int(rec["id"])
            else:
                vocab[str(rec["sym"])] = int(rec["id"])

    if set(special_ids) != set(specials):
        raise TokenizerError(f"{src}: specials in config.json and vocab.jsonl differ")
    for sym in _BYTE_SYMBOLS:
        if sym not in vocab:
            raise TokenizerError(f"{src}: byte symbol {sym!r} missing from vocabulary")
    for left, right in merges:
        if left not in vocab or right not in vocab or left + right not in vocab:
            raise TokenizerError(f"{src}: merge {left!r}+{right!r} not in vocabulary")
    if len(special_ids) + len(vocab) != int(config["vocab_size"]):
        raise TokenizerError(f"{src}: vocab_size in config.json disagrees with vocab.jsonl")
    if len(merges) != int(config["merge_count"]):
        raise TokenizerError(f"{src}: merge_count in config.json disagrees with merges.txt")
    ids = sorted(list(special_ids.values()) + list(vocab.values()))
    if len(set(ids)) != len(ids):
        raise TokenizerError(f"{src}: duplicate ids in vocabulary")

    ranks = {pair: i for i, pair in enumerate(merges)}
    return Tokenizer(specials=specials, special_ids=special_ids, vocab=vocab, ranks=ranks)
