"""Interpolated n-gram language model over token texts, with a local cache.

Counts are collected per method: contexts never cross method boundaries.
Probabilities use Jelinek-Mercer interpolation,

    P_k = lambda * MLE_k + (1 - lambda) * P_{k-1},

grounded at the uniform distribution over the vocabulary.  Orders whose
context has no observed continuation are skipped, which keeps every
distribution normalized for arbitrary contexts.  MLE denominators are
continuation totals (the number of observed next tokens after the
context), so each order sums to one exactly even at sequence ends.

A cache model built from a local scope mixes in as

    P = gamma * P_cache + (1 - gamma) * P_global,
    gamma = c / (c + cacheK),

where c is the cache's continuation total for the longest context
suffix it has seen (0 when the scope is empty, so the mix degrades to
the global model).  Span prediction is greedy, left to right, emitting
exactly as many tokens as were masked; the suffix is never consulted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import formats


@dataclass(frozen=True)
class NgramConfig:
    order: int = 6
    jm_lambda: float = 0.5
    cache_k: float = 10.0

    def validate(self) -> None:
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if not (0.0 < self.jm_lambda < 1.0):
            raise ValueError(f"lambda must be in (0, 1), got {self.jm_lambda}")
        if self.cache_k < 0:
            raise ValueError(f"cacheK must be >= 0, got {self.cache_k}")


@dataclass
class NgramModel:
    config: NgramConfig
    # counts[k] maps a (k-1)-token context to {next_token: count}; totals[k]
    # holds the matching continuation sums.  Index 0 is unused.
    counts: list[dict] = field(default_factory=list)
    totals: list[dict] = field(default_factory=list)
    vocab: set = field(default_factory=set)
    _top_unigrams: tuple | None = None

    def top_unigrams(self) -> tuple:
        """Tokens with the maximal unigram count (argmax fast path)."""
        if self._top_unigrams is None:
            uni = self.counts[1].get((), {})
            best = max(uni.values(), default=0)
            self._top_unigrams = tuple(sorted(t for t, c in uni.items() if c == best))
        return self._top_unigrams


def train(token_sequences, config: NgramConfig = NgramConfig()) -> NgramModel:
    config.validate()
    model = NgramModel(
        config,
        counts=[None] + [dict() for _ in range(config.order)],
        totals=[None] + [dict() for _ in range(config.order)],
    )
    seen = False
    for seq in token_sequences:
        seq = list(seq)
        if seq:
            seen = True
        model.vocab.update(seq)
        for k in range(1, config.order + 1):
            counts_k = model.counts[k]
            totals_k = model.totals[k]
            for i in range(len(seq) - k + 1):
                ctx = tuple(seq[i : i + k - 1])
                nxt = seq[i + k - 1]
                bucket = counts_k.get(ctx)
                if bucket is None:
                    bucket = counts_k[ctx] = {}
                bucket[nxt] = bucket.get(nxt, 0) + 1
                totals_k[ctx] = totals_k.get(ctx, 0) + 1
    if not seen:
        raise ValueError("training corpus is empty")
    return model


def merge_models(a: NgramModel, b: NgramModel) -> NgramModel:
    if a.config != b.config:
        raise ValueError("cannot merge models with different configs")
    merged = NgramModel(
        a.config,
        counts=[None] + [dict() for _ in range(a.config.order)],
        totals=[None] + [dict() for _ in range(a.config.order)],
    )
    merged.vocab = set(a.vocab) | set(b.vocab)
    for k in range(1, a.config.order + 1):
        for src in (a, b):
            for ctx, bucket in src.counts[k].items():
                dst = merged.counts[k].setdefault(ctx, {})
                for tok, c in bucket.items():
                    dst[tok] = dst.get(tok, 0) + c
            for ctx, total in src.totals[k].items():
                merged.totals[k][ctx] = merged.totals[k].get(ctx, 0) + total
    return merged


def build_cache(model: NgramModel, local_sequences) -> NgramModel:
    """Count model over a local scope, disjoint from the global counts."""
    cache = NgramModel(
        model.config,
        counts=[None] + [dict() for _ in range(model.config.order)],
        totals=[None] + [dict() for _ in range(model.config.order)],
    )
    for seq in local_sequences:
        seq = list(seq)
        cache.vocab.update(seq)
        for k in range(1, model.config.order + 1):
            counts_k = cache.counts[k]
            totals_k = cache.totals[k]
            for i in range(len(seq) - k + 1):
                ctx = tuple(seq[i : i + k - 1])
                nxt = seq[i + k - 1]
                bucket = counts_k.get(ctx)
                if bucket is None:
                    bucket = counts_k[ctx] = {}
                bucket[nxt] = bucket.get(nxt, 0) + 1
                totals_k[ctx] = totals_k.get(ctx, 0) + 1
    return cache


class Scorer:
    """Shared probability machinery for prob() and predict_span()."""

    def __init__(self, model: NgramModel, cache: NgramModel | None = None):
        self.model = model
        self.cache = cache if cache is not None and cache.vocab else None
        universe = set(model.vocab)
        if self.cache is not None:
            universe |= self.cache.vocab
        self.universe = universe
        self.uniform = 1.0 / len(universe) if universe else 0.0

    def _applied_orders(self, side: NgramModel, context):
        """(bucket, total) per order with observed continuations, ascending k."""
        out = []
        for k in range(1, side.config.order + 1):
            if k > 1 and len(context) < k - 1:
                break
            ctx = tuple(context[len(context) - (k - 1) :]) if k > 1 else ()
            bucket = side.counts[k].get(ctx)
            if bucket:
                out.append((bucket, side.totals[k][ctx]))
        return out

    def _side_prob(self, side: NgramModel, context, token) -> float:
        lam = side.config.jm_lambda
        p = self.uniform
        for bucket, total in self._applied_orders(side, context):
            p = lam * (bucket.get(token, 0) / total) + (1.0 - lam) * p
        return p

    def _gamma(self, context) -> float:
        if self.cache is None:
            return 0.0
        for length in range(min(self.model.config.order - 1, len(context)), 0, -1):
            ctx = tuple(context[len(context) - length :])
            total = self.cache.totals[length + 1].get(ctx, 0)
            if total > 0:
                c = float(total)
                return c / (c + self.model.config.cache_k) if (c + self.model.config.cache_k) > 0 else 1.0
        return 0.0

    def prob(self, context, token) -> float:
        pg = self._side_prob(self.model, context, token)
        if self.cache is None:
            return pg
        gamma = self._gamma(context)
        if gamma == 0.0:
            return pg
        pc = self._side_prob(self.cache, context, token)
        return gamma * pc + (1.0 - gamma) * pg

    def _candidates(self, context) -> set:
        cands = set(self.model.top_unigrams())
        for bucket, _ in self._applied_orders(self.model, context)[1:]:
            cands.update(bucket)
        if self.cache is not None:
            cands.update(self.cache.vocab)
        return cands

    def best_token(self, context) -> str:
        """Argmax over the vocabulary; ties break to the smallest text."""
        best = None
        best_p = -1.0
        for token in sorted(self._candidates(context)):
            p = self.prob(context, token)
            if p > best_p:
                best, best_p = token, p
        return best


def prob(model: NgramModel, context, token, cache: NgramModel | None = None) -> float:
    return Scorer(model, cache).prob(list(context), token)


def predict_span(
    model: NgramModel,
    prefix,
    length: int,
    cache: NgramModel | None = None,
    teacher_truth=None,
) -> list[str]:
    """Emit exactly `length` tokens greedily after `prefix`.

    With teacher_truth given, positions after the first condition on the
    ground-truth tokens instead of the model's own output.
    """
    if length < 1:
        raise ValueError("span length must be >= 1")
    scorer = Scorer(model, cache)
    context = list(prefix)
    out: list[str] = []
    for pos in range(length):
        out.append(scorer.best_token(context))
        context.append(teacher_truth[pos] if teacher_truth is not None else out[-1])
    return out


# --- serialization ---------------------------------------------------------

def save_model(model: NgramModel, path) -> None:
    def records():
        yield {
            "config": {
                "order": model.config.order,
                "lambda": model.config.jm_lambda,
                "cache_k": model.config.cache_k,
            }
        }
        for k in range(1, model.config.order + 1):
            for ctx in sorted(model.counts[k]):
                bucket = model.counts[k][ctx]
                for tok in sorted(bucket):
                    yield {"gram": list(ctx) + [tok], "c": bucket[tok]}

    formats.write_jsonl(path, formats.NGRAM_MODEL, records())


def load_model(path) -> NgramModel:
    rows = formats.read_jsonl(path, formats.NGRAM_MODEL)
    head = next(rows, None)
    if head is None or "config" not in head:
        raise formats.FormatError(f"{path}: missing model config record")
    config = NgramConfig(
        order=int(head["config"]["order"]),
        jm_lambda=float(head["config"]["lambda"]),
        cache_k=float(head["config"]["cache_k"]),
    )
    model = NgramModel(
        config,
        counts=[None] + [dict() for _ in range(config.order)],
        totals=[None] + [dict() for _ in range(config.order)],
    )
    for rec in rows:
        gram = [str(t) for t in rec["gram"]]
        c = int(rec["c"])
        k = len(gram)
        ctx, tok = tuple(gram[:-1]), gram[-1]
        bucket = model.counts[k].setdefault(ctx, {})
        bucket[tok] = bucket.get(tok, 0) + c
        model.totals[k][ctx] = model.totals[k].get(ctx, 0) + c
        if k == 1:
            model.vocab.add(tok)
    return model
