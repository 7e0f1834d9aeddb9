"""Emit prediction records for a masked dataset from a trained checkpoint.

Output is the shared predictions JSONL layout — a {"format":
"predictions@1"} header, then {"iid", "model", "pred", "reflen"} records
(plus "truncated": true when the decode budget cut a span short) — so
the toolkit's evaluate/compare commands consume it directly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .data import build_examples, read_dataset
from .decoding import greedy_decode
from .tokenizer import Tokenizer
from .training import check_compatible, load_checkpoint

PREDICTIONS_FORMAT = "predictions@1"


def predict_file(checkpoint_path, dataset_path, tok: Tokenizer, model_tag: str,
                 out_path) -> int:
    model, config, payload = load_checkpoint(checkpoint_path)
    check_compatible(payload, tok)
    instances = read_dataset(dataset_path)
    examples = build_examples(instances, tok, config.max_positions)
    decoded = greedy_decode(model, examples, tok, config.batch_size, config.decode_budget)

    out = Path(out_path)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format": PREDICTIONS_FORMAT}) + "\n")
        for d, instance in zip(decoded, instances):
            row = {
                "iid": d.instance_id,
                "model": model_tag,
                "pred": list(d.token_texts),
                "reflen": len(instance.masked),
            }
            if d.truncated:
                row["truncated"] = True
            fh.write(json.dumps(row) + "\n")
    return len(decoded)
