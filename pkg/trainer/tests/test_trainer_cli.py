"""CLI contract: happy-path wiring and exit codes."""

import json

import pytest

from spantrainer.cli import run

from spanhelpers import write_masked_dataset, write_tokenizer_files


@pytest.fixture()
def workspace(tmp_path):
    write_tokenizer_files(tmp_path / "bpe")
    rows = [(f"m#{i}", ["a", f"v{i}", "="], [f"w{i}"], [";"]) for i in range(6)]
    write_masked_dataset(tmp_path / "train.jsonl", rows)
    return tmp_path


def train_args(ws, **extra):
    argv = [
        "train",
        "--train", str(ws / "train.jsonl"),
        "--eval", str(ws / "train.jsonl"),
        "--tokenizer", str(ws / "bpe"),
        "--out", str(ws / "run"),
        "--desk-scale",
        "--max-epochs", "2",
        "--batch-size", "4",
        "--seed", "3",
    ]
    for k, v in extra.items():
        argv += [k] if v is None else [k, v]
    return argv


class TestHappyPath:
    def test_train_then_predict(self, workspace, capsys):
        assert run(train_args(workspace)) == 0
        out = capsys.readouterr().out
        assert "epoch 1:" in out and "trained 2 epochs (desk scale)" in out
        assert (workspace / "run" / "checkpoint.pt").exists()
        assert (workspace / "run" / "training_log.jsonl").exists()
        assert (workspace / "run" / "run_meta.json").exists()

        code = run(
            [
                "predict",
                "--checkpoint", str(workspace / "run" / "checkpoint.pt"),
                "--dataset", str(workspace / "train.jsonl"),
                "--tokenizer", str(workspace / "bpe"),
                "--out", str(workspace / "preds.jsonl"),
            ]
        )
        assert code == 0
        assert "predicted 6 instances" in capsys.readouterr().out
        lines = (workspace / "preds.jsonl").read_text().splitlines()
        assert json.loads(lines[0]) == {"format": "predictions@1"}
        rec = json.loads(lines[1])
        assert set(rec) >= {"iid", "model", "pred", "reflen"}
        assert rec["model"] == "span-trainer"


class TestExitCodes:
    def test_usage_error_is_2(self):
        assert run(["train", "--train", "x.jsonl"]) == 2
        assert run(["bogus"]) == 2
        assert run([]) == 2

    def test_missing_dataset_is_3(self, workspace):
        argv = train_args(workspace)
        argv[argv.index("--train") + 1] = str(workspace / "absent.jsonl")
        assert run(argv) == 3

    def test_missing_tokenizer_is_3(self, workspace):
        argv = train_args(workspace)
        argv[argv.index("--tokenizer") + 1] = str(workspace / "nope")
        assert run(argv) == 3

    def test_missing_checkpoint_is_3(self, workspace):
        code = run(
            [
                "predict",
                "--checkpoint", str(workspace / "absent.pt"),
                "--dataset", str(workspace / "train.jsonl"),
                "--tokenizer", str(workspace / "bpe"),
                "--out", str(workspace / "p.jsonl"),
            ]
        )
        assert code == 3

    def test_wrong_dataset_format_is_4(self, workspace):
        bad = workspace / "bad.jsonl"
        bad.write_text(json.dumps({"format": "corpus@1"}) + "\n")
        argv = train_args(workspace)
        argv[argv.index("--train") + 1] = str(bad)
        assert run(argv) == 4

    def test_tokenizer_missing_canonical_special_is_4(self, workspace, tmp_path):
        crippled = write_tokenizer_files(tmp_path / "bpe2", specials=("<PAD>", "<MASK>"))
        argv = train_args(workspace)
        argv[argv.index("--tokenizer") + 1] = str(crippled)
        assert run(argv) == 4

    def test_instance_over_position_budget_is_5(self, workspace):
        huge = workspace / "huge.jsonl"
        write_masked_dataset(
            huge, [("m#big", ["x" * 40] * 40, ["y"], [])]
        )
        argv = train_args(workspace)
        argv[argv.index("--train") + 1] = str(huge)
        assert run(argv) == 5

    def test_checkpoint_tokenizer_mismatch_is_5(self, workspace, tmp_path, capsys):
        assert run(train_args(workspace)) == 0
        other = write_tokenizer_files(tmp_path / "bpe3", merges=[("a", "b")])
        code = run(
            [
                "predict",
                "--checkpoint", str(workspace / "run" / "checkpoint.pt"),
                "--dataset", str(workspace / "train.jsonl"),
                "--tokenizer", str(other),
                "--out", str(workspace / "p.jsonl"),
            ]
        )
        assert code == 5
