"""Scoring prediction files against masked datasets.

Predictions arrive as JSONL records {"iid", "model", "pred", "reflen"?}
so any external model can participate.  Instances without a prediction
count as failures (scored as an empty prediction).  Model comparisons
run McNemar plus odds ratios over the shared instance set, after
excluding instances whose declared reference tokenizations disagree,
and Benjamini-Hochberg adjusts p-values across all comparisons of a
run.  Review sampling stratifies non-perfect predictions into four
Levenshtein bands with inclusive lower bounds (the last band includes
1.0) and draws a seeded sample of 25 per band.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

from . import formats, stats
from .masking import MaskedInstance
from .metrics import BLEU_ORDERS, MetricValues, compute_metrics

SAMPLE_PER_BUCKET = 25
_BUCKET_BOUNDS = (0.25, 0.50, 0.75)
BUCKET_LABELS = ("0.00-0.25", "0.25-0.50", "0.50-0.75", "0.75-1.00")


@dataclass(frozen=True)
class PredictionRecord:
    instance_id: str
    model: str
    predicted: tuple[str, ...]
    reflen: int | None = None


def read_predictions(path) -> dict[str, PredictionRecord]:
    """One prediction per instance id; duplicates are an error."""
    out: dict[str, PredictionRecord] = {}
    for rec in formats.read_jsonl(path, formats.PREDICTIONS, header_required=False):
        iid = str(rec["iid"])
        if iid in out:
            raise ValueError(f"{path}: duplicate prediction for instance {iid}")
        out[iid] = PredictionRecord(
            instance_id=iid,
            model=str(rec.get("model", "")),
            predicted=tuple(str(t) for t in rec["pred"]),
            reflen=int(rec["reflen"]) if rec.get("reflen") is not None else None,
        )
    return out


def write_predictions(path, records) -> None:
    def rows():
        for r in records:
            row = {"iid": r.instance_id, "model": r.model, "pred": list(r.predicted)}
            if r.reflen is not None:
                row["reflen"] = r.reflen
            yield row

    formats.write_jsonl(path, formats.PREDICTIONS, rows())


def check_known_instances(instances, *prediction_maps) -> None:
    known = {inst.instance_id for inst in instances}
    for preds in prediction_maps:
        for iid in preds:
            if iid not in known:
                raise ValueError(f"prediction for unknown instance {iid}")


def span_bucket(level: str, span_len: int) -> str:
    """Masked-span length bucket: unit 1..10 for token/construct, width 5 for block."""
    if level == "block":
        upper = 5 * math.ceil(span_len / 5)
        return f"{upper - 4}-{upper}"
    return str(span_len)


@dataclass
class InstanceResult:
    instance_id: str
    level: str
    span_len: int
    metrics: MetricValues
    missing: bool


@dataclass
class EvaluationReport:
    model: str
    results: list[InstanceResult]
    missing_count: int

    @property
    def instance_count(self) -> int:
        return len(self.results)

    def perfect_rate(self) -> float:
        if not self.results:
            return 0.0
        return sum(r.metrics.perfect for r in self.results) / len(self.results)

    def mean_bleu(self) -> dict[int, float | None]:
        out: dict[int, float | None] = {}
        for n in BLEU_ORDERS:
            vals = [r.metrics.bleu[n] for r in self.results if r.metrics.bleu[n] is not None]
            out[n] = sum(vals) / len(vals) if vals else None
        return out

    def mean_lev(self) -> float:
        if not self.results:
            return 0.0
        return sum(r.metrics.lev_norm for r in self.results) / len(self.results)

    def by_bucket(self) -> dict[str, dict]:
        agg: dict[str, dict] = {}
        for r in self.results:
            key = span_bucket(r.level, r.span_len)
            slot = agg.setdefault(key, {"count": 0, "perfect": 0})
            slot["count"] += 1
            slot["perfect"] += int(r.metrics.perfect)
        for slot in agg.values():
            slot["perfect_rate"] = slot["perfect"] / slot["count"]
        def sort_key(item):
            lo = item[0].split("-")[0]
            return (int(lo), item[0])
        return dict(sorted(agg.items(), key=sort_key))


def evaluate(instances, predictions, model: str = "") -> EvaluationReport:
    """Score every instance; a missing prediction scores as empty output."""
    check_known_instances(instances, predictions)
    results = []
    missing = 0
    for inst in instances:
        rec = predictions.get(inst.instance_id)
        pred = list(rec.predicted) if rec is not None else []
        if rec is None:
            missing += 1
        results.append(
            InstanceResult(
                instance_id=inst.instance_id,
                level=inst.level,
                span_len=len(inst.masked),
                metrics=compute_metrics(pred, inst.masked),
                missing=rec is None,
            )
        )
        if not model and rec is not None and rec.model:
            model = rec.model
    return EvaluationReport(model=model, results=results, missing_count=missing)


def report_to_dict(report: EvaluationReport) -> dict:
    return {
        "model": report.model,
        "instances": report.instance_count,
        "missing_predictions": report.missing_count,
        "aggregates": {
            "perfect_rate": report.perfect_rate(),
            "mean_bleu": {str(n): v for n, v in report.mean_bleu().items()},
            "mean_lev_norm": report.mean_lev(),
            "by_span_length": report.by_bucket(),
        },
        "per_instance": {
            r.instance_id: {
                "perfect": r.metrics.perfect,
                "bleu": {str(n): v for n, v in r.metrics.bleu.items()},
                "lev_norm": r.metrics.lev_norm,
                "missing": r.missing,
                "span_len": r.span_len,
                "level": r.level,
            }
            for r in report.results
        },
    }


def summary_text(report: EvaluationReport) -> str:
    lines = [
        f"model: {report.model or '(unnamed)'}",
        f"instances: {report.instance_count}  missing predictions: {report.missing_count}",
        f"perfect: {100.0 * report.perfect_rate():.2f}%",
    ]
    bleu = report.mean_bleu()
    lines.append(
        "  ".join(
            f"BLEU-{n}: " + (f"{bleu[n]:.4f}" if bleu[n] is not None else "n/a")
            for n in BLEU_ORDERS
        )
    )
    lines.append(f"Levenshtein (norm): {report.mean_lev():.4f}")
    lines.append("by masked-span length:")
    for key, slot in report.by_bucket().items():
        lines.append(
            f"  {key:>7}: {100.0 * slot['perfect_rate']:6.2f}%  (n={slot['count']})"
        )
    return "\n".join(lines) + "\n"


# --- model comparison -------------------------------------------------------

@dataclass
class ComparisonResult:
    model_a: str
    model_b: str
    shared: int
    excluded: list[str]
    table: stats.PairedOutcomeTable
    mcnemar_stat: float | None
    p_value: float | None
    p_adjusted: float | None
    odds: stats.OddsRatioResult | None
    note: str = ""


def exclude_mismatches(instances, preds_a, preds_b) -> tuple[list, list[str]]:
    """Drop instances whose two declared reference tokenizations disagree."""
    kept, excluded = [], []
    for inst in instances:
        ra = preds_a.get(inst.instance_id)
        rb = preds_b.get(inst.instance_id)
        if (
            ra is not None
            and rb is not None
            and ra.reflen is not None
            and rb.reflen is not None
            and ra.reflen != rb.reflen
        ):
            excluded.append(inst.instance_id)
        else:
            kept.append(inst)
    return kept, excluded


def compare_models(instances, preds_a, preds_b, name_a="A", name_b="B") -> ComparisonResult:
    check_known_instances(instances, preds_a, preds_b)
    shared, excluded = exclude_mismatches(instances, preds_a, preds_b)
    a = b = c = d = 0
    for inst in shared:
        ra = preds_a.get(inst.instance_id)
        rb = preds_b.get(inst.instance_id)
        pa = ra is not None and list(ra.predicted) == list(inst.masked)
        pb = rb is not None and list(rb.predicted) == list(inst.masked)
        if pa and pb:
            a += 1
        elif pa:
            b += 1
        elif pb:
            c += 1
        else:
            d += 1
    table = stats.PairedOutcomeTable(a, b, c, d)
    if b + c == 0:
        return ComparisonResult(
            name_a, name_b, len(shared), excluded, table,
            None, None, None, None, note="no discordance",
        )
    stat, p = stats.mcnemar(table)
    return ComparisonResult(
        name_a, name_b, len(shared), excluded, table,
        stat, p, None, stats.odds_ratio(table),
    )


def adjust_comparisons(comparisons) -> None:
    """Benjamini-Hochberg across every comparison of the run (in place)."""
    indexed = [(i, c.p_value) for i, c in enumerate(comparisons) if c.p_value is not None]
    if not indexed:
        return
    adjusted = stats.benjamini_hochberg([p for _, p in indexed])
    for (i, _), adj in zip(indexed, adjusted):
        comparisons[i].p_adjusted = adj


def comparison_to_dict(cmp: ComparisonResult) -> dict:
    return {
        "models": [cmp.model_a, cmp.model_b],
        "shared_instances": cmp.shared,
        "excluded_instances": cmp.excluded,
        "table": {"a": cmp.table.a, "b": cmp.table.b, "c": cmp.table.c, "d": cmp.table.d},
        "mcnemar_statistic": cmp.mcnemar_stat,
        "p_value": cmp.p_value,
        "p_adjusted": cmp.p_adjusted,
        "odds_ratio": cmp.odds.value if cmp.odds else None,
        "haldane_corrected": cmp.odds.haldane_corrected if cmp.odds else None,
        "note": cmp.note,
    }


# --- manual-review sampling -------------------------------------------------

def _lev_bucket(lev: float) -> str:
    for bound, label in zip(_BUCKET_BOUNDS, BUCKET_LABELS):
        if lev < bound:
            return label
    return BUCKET_LABELS[-1]


def sample_non_perfect(report: EvaluationReport, seed: int, per_bucket: int = SAMPLE_PER_BUCKET):
    """Seeded stratified sample of non-perfect instances by levNorm band."""
    import random

    buckets: dict[str, list[str]] = {label: [] for label in BUCKET_LABELS}
    for r in report.results:
        if r.metrics.perfect:
            continue
        buckets[_lev_bucket(r.metrics.lev_norm)].append(r.instance_id)
    rnd = random.Random(seed)
    picked: list[tuple[str, str]] = []
    for label in BUCKET_LABELS:
        ids = sorted(buckets[label])
        if len(ids) < per_bucket:
            warnings.warn(
                f"bucket {label}: only {len(ids)} non-perfect instances "
                f"(wanted {per_bucket})",
                stacklevel=2,
            )
            chosen = ids
        else:
            chosen = sorted(rnd.sample(ids, per_bucket))
        picked.extend((label, iid) for iid in chosen)
    return picked


def write_review_sheet(path, picked, instances_by_id, predictions) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iid", "bucket", "prefix", "masked", "suffix", "pred", "judgment"])
        for bucket, iid in picked:
            inst = instances_by_id[iid]
            rec = predictions.get(iid)
            writer.writerow(
                [
                    iid,
                    bucket,
                    " ".join(inst.prefix),
                    " ".join(inst.masked),
                    " ".join(inst.suffix),
                    " ".join(rec.predicted) if rec else "",
                    "",
                ]
            )


def instances_by_id(instances) -> dict[str, MaskedInstance]:
    return {inst.instance_id: inst for inst in instances}
