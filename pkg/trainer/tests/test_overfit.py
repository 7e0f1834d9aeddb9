"""Deliberate-overfit run: the loop must memorize its own training set.

100 handcrafted instances, desk-scale model, plateau rule off; the run
must reach >= 95% perfect predictions on the training set itself within
200 epochs, well under the 30-minute CPU budget, and the emitted
prediction file must agree with the in-loop eval rate.
"""

import json
import time

import pytest

from spantrainer.cli import run

from spanhelpers import write_masked_dataset, write_tokenizer_files


def overfit_rows():
    rows = []
    for i in range(100):
        if i % 3 == 0:
            masked = [f"w{i}"]
        elif i % 3 == 1:
            masked = [f"w{i}", "+", str(i)]
        else:
            masked = [str(i), "*", f"z{i}"]
        rows.append((f"ov#{i:03d}", ["int", f"q{i}", "="], masked, [";"]))
    return rows


@pytest.fixture(scope="module")
def overfit_run(tmp_path_factory):
    base = tmp_path_factory.mktemp("overfit")
    write_tokenizer_files(base / "bpe")
    rows = overfit_rows()
    write_masked_dataset(base / "train.jsonl", rows)

    started = time.time()
    code = run(
        [
            "train",
            "--train", str(base / "train.jsonl"),
            "--eval", str(base / "train.jsonl"),
            "--tokenizer", str(base / "bpe"),
            "--out", str(base / "run"),
            "--desk-scale",
            "--max-epochs", "200",
            "--batch-size", "4",
            "--lr", "1e-3",
            "--stop-at-perfect", "0.95",
            "--no-early-stop",
            "--seed", "13",
        ]
    )
    elapsed = time.time() - started
    assert code == 0
    return base, rows, elapsed


def test_reaches_95_percent_within_budget(overfit_run):
    base, _, elapsed = overfit_run
    meta = json.loads((base / "run" / "run_meta.json").read_text())
    assert meta["best_perfect_eval"] >= 0.95
    assert meta["epochs_run"] <= 200
    assert elapsed < 1800  # thirty-minute CPU budget

    log_lines = (base / "run" / "training_log.jsonl").read_text().splitlines()
    rates = [json.loads(line)["perfect_eval"] for line in log_lines]
    assert max(rates) == meta["best_perfect_eval"]


def test_predicting_the_training_set_matches_the_eval_rate(overfit_run):
    base, rows, _ = overfit_run
    code = run(
        [
            "predict",
            "--checkpoint", str(base / "run" / "checkpoint.pt"),
            "--dataset", str(base / "train.jsonl"),
            "--tokenizer", str(base / "bpe"),
            "--model-tag", "overfit",
            "--out", str(base / "preds.jsonl"),
        ]
    )
    assert code == 0
    lines = (base / "preds.jsonl").read_text().splitlines()
    assert json.loads(lines[0]) == {"format": "predictions@1"}
    records = [json.loads(line) for line in lines[1:]]
    assert len(records) == 100
    by_iid = {r["iid"]: r for r in records}
    hits = 0
    for iid, prefix, masked, suffix in rows:
        rec = by_iid[iid]
        assert rec["model"] == "overfit"
        assert rec["reflen"] == len(masked)
        hits += rec["pred"] == list(masked)
    assert hits >= 95
