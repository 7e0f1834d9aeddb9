"""Per-instance prediction metrics: perfect match, BLEU-n, edit distance.

BLEU-n is the cumulative variant with uniform 1/n weights, clipped
modified precisions, a brevity penalty of exp(1 - |ref|/|pred|) when the
prediction is shorter than the reference, and no smoothing: any zero
order precision yields zero.  BLEU-n is not applicable (None) when the
reference holds fewer than n tokens.  levNorm is token-level Levenshtein
distance divided by the longer sequence length.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

BLEU_ORDERS = (1, 2, 3, 4)


@dataclass(frozen=True)
class MetricValues:
    perfect: bool
    bleu: dict  # order -> float | None (None when not applicable)
    lev_norm: float


def perfect_match(pred, ref) -> bool:
    pred, ref = list(pred), list(ref)
    return len(pred) == len(ref) and all(p == r for p, r in zip(pred, ref))


def _ngram_counts(seq, n: int) -> Counter:
    return Counter(tuple(seq[i : i + n]) for i in range(len(seq) - n + 1))


def bleu_n(pred, ref, n: int):
    """Cumulative BLEU-n; None when len(ref) < n."""
    pred, ref = list(pred), list(ref)
    if len(ref) < n:
        return None
    if not pred:
        return 0.0
    precisions = []
    for order in range(1, n + 1):
        pc = _ngram_counts(pred, order)
        total = sum(pc.values())
        if total == 0:
            return 0.0
        rc = _ngram_counts(ref, order)
        clipped = sum(min(c, rc[g]) for g, c in pc.items())
        if clipped == 0:
            return 0.0
        precisions.append(clipped / total)
    bp = 1.0 if len(pred) >= len(ref) else math.exp(1.0 - len(ref) / len(pred))
    return bp * math.prod(precisions) ** (1.0 / n)


def levenshtein(a, b) -> int:
    a, b = list(a), list(b)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def lev_norm(pred, ref) -> float:
    pred, ref = list(pred), list(ref)
    longest = max(len(pred), len(ref))
    if longest == 0:
        return 0.0  # two empty sequences: zero by convention
    return levenshtein(pred, ref) / longest


def compute_metrics(pred, ref) -> MetricValues:
    pred, ref = list(pred), list(ref)
    return MetricValues(
        perfect=perfect_match(pred, ref),
        bleu={n: bleu_n(pred, ref, n) for n in BLEU_ORDERS},
        lev_norm=lev_norm(pred, ref),
    )
