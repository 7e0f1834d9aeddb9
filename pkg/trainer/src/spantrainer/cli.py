"""Command-line interface: train a span model, predict with a checkpoint.

Exit codes mirror the dataset toolkit: 0 success, 2 usage, 3 missing
input, 4 wrong file format, 5 invalid data or options, 1 unexpected.
"""

from __future__ import annotations

import argparse
import sys

from . import data, predict, tokenizer, training


def _add_train(sub) -> None:
    p = sub.add_parser("train", help="train a span model on a masked dataset")
    p.add_argument("--train", required=True, help="masked-dataset JSONL, training set")
    p.add_argument("--eval", required=True, help="masked-dataset JSONL, eval set")
    p.add_argument("--tokenizer", required=True, help="BPE model directory")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--desk-scale", action="store_true", help="small model preset")
    p.add_argument("--max-epochs", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument(
        "--stop-at-perfect",
        type=float,
        default=None,
        help="also stop once the eval perfect rate reaches this value",
    )
    p.add_argument(
        "--no-early-stop",
        action="store_true",
        help="disable the plateau rule (deliberate-overfit runs)",
    )
    p.set_defaults(func=_cmd_train)


def _add_predict(sub) -> None:
    p = sub.add_parser("predict", help="emit prediction records for a dataset")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dataset", required=True, help="masked-dataset JSONL")
    p.add_argument("--tokenizer", required=True, help="BPE model directory")
    p.add_argument("--model-tag", default="span-trainer")
    p.add_argument("--out", required=True, help="predictions JSONL path")
    p.set_defaults(func=_cmd_predict)


def _build_config(args) -> training.TrainerConfig:
    overrides = {}
    if args.max_epochs is not None:
        overrides["max_epochs"] = args.max_epochs
    if args.batch_size is not None:
        overrides["batch_size"] = args.batch_size
    if args.lr is not None:
        overrides["learning_rate"] = args.lr
    if args.desk_scale:
        return training.desk_scale(**overrides)
    return training.TrainerConfig(**overrides)


def _cmd_train(args) -> int:
    tok = tokenizer.load_tokenizer(args.tokenizer)
    config = _build_config(args)
    train_examples = data.build_examples(data.read_dataset(args.train), tok, config.max_positions)
    eval_examples = data.build_examples(data.read_dataset(args.eval), tok, config.max_positions)

    def progress(epoch, loss, rate):
        print(f"epoch {epoch}: loss {loss:.4f}  perfect_eval {rate:.2%}")

    state = training.train(
        train_examples,
        eval_examples,
        tok,
        config,
        args.out,
        seed=args.seed,
        stop_at_perfect=args.stop_at_perfect,
        early_stopping=not args.no_early_stop,
        progress=progress,
    )
    print(
        f"trained {state.epoch} epochs ({config.scale} scale); "
        f"best perfect_eval {state.best_rate:.2%} at epoch {state.best_epoch}"
    )
    return 0


def _cmd_predict(args) -> int:
    tok = tokenizer.load_tokenizer(args.tokenizer)
    n = predict.predict_file(args.checkpoint, args.dataset, tok, args.model_tag, args.out)
    print(f"predicted {n} instances")
    return 0


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spantrainer",
        description="Desk-scale encoder-decoder trainer for masked span completion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_train(sub)
    _add_predict(sub)
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (data.FormatError, tokenizer.TokenizerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except Exception as exc:  # pragma: no cover - last resort
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(run())
