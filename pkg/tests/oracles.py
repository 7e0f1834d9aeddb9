"""Reference implementations used only as test oracles.

Deliberately naive: exponential-recursion edit distance, exact-rational
BLEU, and an n-gram probability that recounts the corpus per query.
They share no code with the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import exp, prod


def levenshtein_naive(a, b) -> int:
    """Textbook recursive definition, memoized."""

    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
            d(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return d(len(a), len(b))


def bleu_reference(pred, ref, n: int):
    """Cumulative BLEU-n from the standard definition, exact rationals.

    None when the reference has fewer than n tokens; zero when any order's
    clipped precision is zero (no smoothing); brevity penalty
    exp(1 - |ref|/|pred|) for shorter predictions.
    """
    pred, ref = list(pred), list(ref)
    if len(ref) < n:
        return None
    if not pred:
        return 0.0

    def grams(seq, order):
        out = {}
        for i in range(len(seq) - order + 1):
            g = tuple(seq[i : i + order])
            out[g] = out.get(g, 0) + 1
        return out

    precisions = []
    for order in range(1, n + 1):
        pg = grams(pred, order)
        total = sum(pg.values())
        if total == 0:
            return 0.0
        rg = grams(ref, order)
        clipped = sum(min(c, rg.get(g, 0)) for g, c in pg.items())
        if clipped == 0:
            return 0.0
        precisions.append(Fraction(clipped, total))
    bp = 1.0 if len(pred) >= len(ref) else exp(1.0 - len(ref) / len(pred))
    return bp * float(prod(precisions)) ** (1.0 / n)


def ngram_prob_reference(
    train_seqs,
    order: int,
    lam: float,
    context,
    token,
    cache_seqs=None,
    cache_k: float = 10.0,
) -> float:
    """Interpolated n-gram probability recomputed by brute-force counting."""
    train_seqs = [list(s) for s in train_seqs]
    cache_seqs = [list(s) for s in cache_seqs] if cache_seqs is not None else None
    context = list(context)

    universe = {t for s in train_seqs for t in s}
    has_cache = bool(cache_seqs) and any(cache_seqs)
    if has_cache:
        universe |= {t for s in cache_seqs for t in s}
    uniform = 1.0 / len(universe) if universe else 0.0

    def follow_counts(seqs, ctx):
        counts = {}
        L = len(ctx)
        for seq in seqs:
            for i in range(len(seq) - L):
                if tuple(seq[i : i + L]) == tuple(ctx):
                    nxt = seq[i + L]
                    counts[nxt] = counts.get(nxt, 0) + 1
        return counts

    def side_prob(seqs):
        p = uniform
        for k in range(1, order + 1):
            if k > 1 and len(context) < k - 1:
                break
            ctx = context[len(context) - (k - 1) :] if k > 1 else []
            counts = follow_counts(seqs, ctx)
            total = sum(counts.values())
            if total > 0:
                p = lam * (counts.get(token, 0) / total) + (1.0 - lam) * p
        return p

    p_global = side_prob(train_seqs)
    if not has_cache:
        return p_global

    gamma = 0.0
    for length in range(min(order - 1, len(context)), 0, -1):
        ctx = context[len(context) - length :]
        total = sum(follow_counts(cache_seqs, ctx).values())
        if total > 0:
            gamma = total / (total + cache_k) if (total + cache_k) > 0 else 1.0
            break
    if gamma == 0.0:
        return p_global
    return gamma * side_prob(cache_seqs) + (1.0 - gamma) * p_global
