"""Command-line pipeline driver.

Subcommands mirror the pipeline stages: ingest, filter, abstract, mask,
split, bpe-train, ngram-train, ngram-predict, evaluate, compare, sample.
Every run writes a <out>.run.json sidecar with the resolved options so
results can be traced back to their exact configuration.  Outputs are
byte-identical across reruns with the same inputs and seed.

Exit codes: 0 success, 2 usage, 3 missing input file, 4 format-version
mismatch, 5 validation error, 1 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import bpe, corpus, evaluation, formats, masking, ngram

EXIT_USAGE = 2
EXIT_MISSING = 3
EXIT_FORMAT = 4
EXIT_VALIDATION = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _require(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise CliError(EXIT_MISSING, f"input not found: {path}")
    return p


def _write_run_config(out: str, command: str, options: dict) -> None:
    clean = {k: v for k, v in sorted(options.items()) if k not in ("func", "out")}
    formats.write_json(
        f"{out}.run.json",
        formats.RUN_CONFIG,
        {"command": command, "out": out, "options": clean},
    )


def _mask_one(record, level: str, seed: int, representation: str):
    return masking.mask_record(record, level, seed, representation)


def _map_jobs(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=64))


# --- subcommand handlers ----------------------------------------------------

def cmd_ingest(args) -> None:
    result = corpus.ingest(_require(args.corpus), args.domain)
    corpus.write_corpus(args.out, result.records)
    _write_run_config(args.out, "ingest", vars(args))
    print(f"ingested {len(result.records)} methods, skipped {len(result.skipped)}")
    for reason in result.skipped[:20]:
        print(f"  skipped: {reason}", file=sys.stderr)


def cmd_filter(args) -> None:
    records = corpus.read_corpus(_require(args.corpus))
    kept, dropped = corpus.filter_records(records)
    kept = corpus.dedup(kept, "raw", args.seed)
    corpus.write_corpus(args.out, kept)
    _write_run_config(args.out, "filter", vars(args))
    drops = ", ".join(f"{k}={v}" for k, v in sorted(dropped.items())) or "none"
    print(f"kept {len(kept)} methods after filters ({drops}) and raw dedup")


def cmd_abstract(args) -> None:
    records = corpus.read_corpus(_require(args.corpus))
    idioms = None
    if args.idioms:
        from .abstraction import load_idioms

        idioms = load_idioms(_require(args.idioms))
    records = corpus.abstract_records(records, idioms)
    records = corpus.dedup(records, "abstract", args.seed)
    corpus.write_abstracted(args.out, records)
    maps_path = args.maps or f"{args.out}.maps.jsonl"
    corpus.write_maps(maps_path, records)
    _write_run_config(args.out, "abstract", vars(args))
    print(f"abstracted {len(records)} methods (maps: {maps_path})")


def cmd_mask(args) -> None:
    records = corpus.read_corpus(_require(args.corpus), abstracted=True)
    fn = partial(_mask_one, level=args.level, seed=args.seed, representation=args.repr)
    per_record = _map_jobs(fn, records, args.jobs)
    instances = [inst for group in per_record for inst in group]
    masking.write_dataset(args.out, instances)
    _write_run_config(args.out, "mask", vars(args))
    print(f"wrote {len(instances)} {args.level}/{args.repr} instances from {len(records)} methods")


def cmd_split(args) -> None:
    records = corpus.read_corpus(_require(args.corpus), abstracted=True)
    try:
        assignments = corpus.split_records(records, args.seed)
    except ValueError as exc:
        raise CliError(EXIT_VALIDATION, str(exc))
    corpus.write_splits(args.out, assignments)
    _write_run_config(args.out, "split", vars(args))
    counts = {"train": 0, "eval": 0, "test": 0}
    for a in assignments:
        counts[a.split] += 1
    print(
        f"split {len(assignments)} methods: "
        f"train={counts['train']} eval={counts['eval']} test={counts['test']}"
    )


def _split_filter(items, splits_path, split_name, key):
    if splits_path is None:
        return list(items)
    splits = corpus.read_splits(_require(splits_path))
    return [item for item in items if splits.get(key(item)) == split_name]


def cmd_bpe_train(args) -> None:
    records = corpus.read_corpus(_require(args.corpus), abstracted=True)
    records = _split_filter(records, args.splits, args.split_name, lambda r: r.method_id)
    if not records:
        raise CliError(EXIT_VALIDATION, "no methods selected for BPE training")
    texts = (t for r in records for t in r.texts(args.repr))
    try:
        model = bpe.train_bpe(texts, args.vocab_size)
    except ValueError as exc:
        raise CliError(EXIT_VALIDATION, str(exc))
    bpe.save_model(model, args.out)
    _write_run_config(str(Path(args.out) / "model"), "bpe-train", vars(args))
    print(f"trained BPE: {len(model.merges)} merges, vocab {model.vocab_size}")


def cmd_ngram_train(args) -> None:
    records = corpus.read_corpus(_require(args.corpus), abstracted=True)
    records = _split_filter(records, args.splits, args.split_name, lambda r: r.method_id)
    config = ngram.NgramConfig(args.ngram_order, args.jm_lambda, args.cache_k)
    try:
        config.validate()
        model = ngram.train((r.texts(args.repr) for r in records), config)
    except ValueError as exc:
        raise CliError(EXIT_VALIDATION, str(exc))
    ngram.save_model(model, args.out)
    _write_run_config(args.out, "ngram-train", vars(args))
    print(f"trained {config.order}-gram on {len(records)} methods, vocab {len(model.vocab)}")


def cmd_ngram_predict(args) -> None:
    model = ngram.load_model(_require(args.model))
    instances = masking.read_dataset(_require(args.dataset))
    instances = _split_filter(instances, args.splits, args.split_name, lambda i: i.method_id)
    cache = None
    if args.cache_from:
        representation = instances[0].representation if instances else "raw"
        local = corpus.read_corpus_auto(_require(args.cache_from))
        cache = ngram.build_cache(model, (r.texts(representation) for r in local))
    records = []
    for inst in instances:
        pred = ngram.predict_span(
            model,
            inst.prefix,
            len(inst.masked),
            cache=cache,
            teacher_truth=inst.masked if args.teacher_context else None,
        )
        records.append(
            evaluation.PredictionRecord(
                instance_id=inst.instance_id,
                model=args.model_tag,
                predicted=tuple(pred),
                reflen=len(inst.masked),
            )
        )
    evaluation.write_predictions(args.out, records)
    _write_run_config(args.out, "ngram-predict", vars(args))
    print(f"predicted {len(records)} instances")


def _load_eval_inputs(args):
    instances = masking.read_dataset(_require(args.dataset))
    return _split_filter(instances, args.splits, args.split_name, lambda i: i.method_id)


def cmd_evaluate(args) -> None:
    instances = _load_eval_inputs(args)
    preds = evaluation.read_predictions(_require(args.predictions))
    try:
        report = evaluation.evaluate(instances, preds)
    except ValueError as exc:
        raise CliError(EXIT_VALIDATION, str(exc))
    formats.write_json(args.out, formats.EVAL_REPORT, report_payload(report))
    summary = evaluation.summary_text(report)
    Path(f"{args.out}.txt").write_text(summary, encoding="utf-8")
    _write_run_config(args.out, "evaluate", vars(args))
    print(summary, end="")


def report_payload(report) -> dict:
    return evaluation.report_to_dict(report)


def cmd_compare(args) -> None:
    instances = _load_eval_inputs(args)
    pred_maps = [evaluation.read_predictions(_require(p)) for p in args.predictions]
    names = []
    for path, preds in zip(args.predictions, pred_maps):
        tags = {r.model for r in preds.values() if r.model}
        names.append(sorted(tags)[0] if tags else Path(path).stem)
    comparisons = []
    try:
        for i in range(len(pred_maps)):
            for j in range(i + 1, len(pred_maps)):
                comparisons.append(
                    evaluation.compare_models(
                        instances, pred_maps[i], pred_maps[j], names[i], names[j]
                    )
                )
    except ValueError as exc:
        raise CliError(EXIT_VALIDATION, str(exc))
    evaluation.adjust_comparisons(comparisons)
    formats.write_json(
        args.out,
        formats.COMPARISON_REPORT,
        {"comparisons": [evaluation.comparison_to_dict(c) for c in comparisons]},
    )
    _write_run_config(args.out, "compare", vars(args))
    for c in comparisons:
        if c.p_value is None:
            print(f"{c.model_a} vs {c.model_b}: {c.note}")
        else:
            print(
                f"{c.model_a} vs {c.model_b}: b={c.table.b} c={c.table.c} "
                f"stat={c.mcnemar_stat:.4f} p={c.p_value:.4g} "
                f"p_adj={c.p_adjusted:.4g} OR={c.odds.value:.4f}"
            )


def cmd_sample(args) -> None:
    instances = _load_eval_inputs(args)
    preds = evaluation.read_predictions(_require(args.predictions))
    try:
        report = evaluation.evaluate(instances, preds)
    except ValueError as exc:
        raise CliError(EXIT_VALIDATION, str(exc))
    picked = evaluation.sample_non_perfect(report, args.seed, args.per_bucket)
    evaluation.write_review_sheet(
        args.out, picked, evaluation.instances_by_id(instances), preds
    )
    _write_run_config(args.out, "sample", vars(args))
    print(f"sampled {len(picked)} non-perfect instances for review")


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maskbench",
        description="Masked Java code completion: dataset construction and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, seed=True, out=True):
        if seed:
            p.add_argument("--seed", type=int, default=13, help="deterministic seed")
        if out:
            p.add_argument("--out", required=True, help="output path")

    p = sub.add_parser("ingest", help="normalize a corpus file or .java tree")
    p.add_argument("--corpus", required=True)
    p.add_argument("--domain", default="java")
    common(p, seed=False)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("filter", help="apply corpus filters and raw-level dedup")
    p.add_argument("--corpus", required=True)
    common(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("abstract", help="abstract methods and dedup the abstract view")
    p.add_argument("--corpus", required=True)
    p.add_argument("--idioms", help="idiom table file, one token per line")
    p.add_argument("--maps", help="abstraction-map sidecar path")
    common(p)
    p.set_defaults(func=cmd_abstract)

    p = sub.add_parser("mask", help="generate masked instances")
    p.add_argument("--corpus", required=True, help="abstracted corpus file")
    p.add_argument("--level", choices=masking.LEVELS, required=True)
    p.add_argument("--repr", choices=masking.REPRESENTATIONS, required=True)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(p)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("split", help="assign methods to train/eval/test")
    p.add_argument("--corpus", required=True, help="abstracted corpus file")
    common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("bpe-train", help="train the byte-level BPE tokenizer")
    p.add_argument("--corpus", required=True, help="abstracted corpus file")
    p.add_argument("--repr", choices=masking.REPRESENTATIONS, required=True)
    p.add_argument("--vocab-size", type=int, required=True)
    p.add_argument("--splits", help="split manifest")
    p.add_argument("--split-name", default="train")
    common(p, seed=False)
    p.set_defaults(func=cmd_bpe_train)

    p = sub.add_parser("ngram-train", help="train the n-gram baseline")
    p.add_argument("--corpus", required=True, help="abstracted corpus file")
    p.add_argument("--repr", choices=masking.REPRESENTATIONS, required=True)
    p.add_argument("--splits", help="split manifest")
    p.add_argument("--split-name", default="train")
    p.add_argument("--ngram-order", type=int, default=6)
    p.add_argument("--lambda", dest="jm_lambda", type=float, default=0.5)
    p.add_argument("--cache-k", type=float, default=10.0)
    common(p, seed=False)
    p.set_defaults(func=cmd_ngram_train)

    p = sub.add_parser("ngram-predict", help="predict masked spans with the n-gram")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--splits", help="split manifest")
    p.add_argument("--split-name", default="test")
    p.add_argument("--cache-from", help="corpus file providing the local cache scope")
    p.add_argument("--teacher-context", action="store_true",
                   help="condition later positions on ground truth")
    p.add_argument("--model-tag", default="ngram")
    common(p, seed=False)
    p.set_defaults(func=cmd_ngram_predict)

    p = sub.add_parser("evaluate", help="score a prediction file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--splits", help="split manifest")
    p.add_argument("--split-name", default="test")
    common(p, seed=False)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="paired comparison of prediction files")
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", nargs="+", required=True)
    p.add_argument("--splits", help="split manifest")
    p.add_argument("--split-name", default="test")
    common(p, seed=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sample", help="stratified review sample of non-perfect cases")
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--splits", help="split manifest")
    p.add_argument("--split-name", default="test")
    p.add_argument("--per-bucket", type=int, default=evaluation.SAMPLE_PER_BUCKET)
    common(p)
    p.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except formats.FormatError as exc:
        print(f"error: format: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
