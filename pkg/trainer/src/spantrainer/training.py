"""Training loop, early stopping, and checkpointing.

After every epoch the eval set is decoded greedily and the
perfect-prediction rate is appended to the training state; the
checkpoint on disk always corresponds to the best rate seen so far.
Training stops when the rate drops below the value from
`patience_window` epochs earlier (short fluctuations are tolerated),
at the epoch cap, or at an optional target rate.  The plateau rule can
be disabled for deliberate-overfit runs, where small eval sets make the
rate too quantized for it.
"""

from __future__ import annotations

import dataclasses
import json
import os
import random
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch import nn

from .data import collate
from .decoding import greedy_decode, perfect_rate
from .model import SpanModel
from .tokenizer import PAD, Tokenizer

TRAINING_LOG_NAME = "training_log.jsonl"
CHECKPOINT_NAME = "checkpoint.pt"
RUN_META_NAME = "run_meta.json"


@dataclass(frozen=True)
class TrainerConfig:
    learning_rate: float = 5e-5
    batch_size: int = 64
    hidden_layers: int = 12
    attention_heads: int = 16
    hidden_size: int = 768
    intermediate_size: int = 4096
    attention_dropout: float = 0.1
    hidden_dropout: float = 0.3
    max_epochs: int = 50
    patience_window: int = 4
    max_positions: int = 1024
    decode_budget: int = 64  # greedy decoding never exceeds this many subwords
    scale: str = "full"


def desk_scale(**overrides) -> TrainerConfig:
    """Laptop-sized variant: same knobs, small model."""
    base = dict(
        hidden_layers=2,
        attention_heads=4,
        hidden_size=128,
        intermediate_size=512,
        scale="desk",
    )
    base.update(overrides)
    return TrainerConfig(**base)


def should_stop(rates, patience_window: int = 4) -> bool:
    """True when the newest rate falls below the one patience_window epochs back.

    Pure function of the per-epoch rate sequence: with the default window
    of 4, nothing stops before epoch 5, and fluctuations that stay at or
    above the rate from four epochs earlier are tolerated.
    """
    n = len(rates)
    return n >= patience_window + 1 and rates[-1] < rates[-1 - patience_window]


@dataclass
class TrainingState:
    perfect_on_eval: list[float] = field(default_factory=list)
    losses: list[float] = field(default_factory=list)
    best_epoch: int = 0
    best_rate: float = -1.0
    stopped_early: bool = False

    @property
    def epoch(self) -> int:
        return len(self.perfect_on_eval)


def _atomic_save(payload, path: Path) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            torch.save(payload, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_checkpoint(path: Path, model: SpanModel, config: TrainerConfig,
                    tok: Tokenizer, epoch: int, rate: float) -> None:
    _atomic_save(
        {
            "model_state": model.state_dict(),
            "config": dataclasses.asdict(config),
            "vocab_size": model.vocab_size,
            "specials": list(tok.specials),
            "epoch": epoch,
            "perfect_eval": rate,
        },
        path,
    )


def load_checkpoint(path: str | Path):
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"checkpoint not found: {p}")
    payload = torch.load(p, map_location="cpu", weights_only=True)
    config = TrainerConfig(**payload["config"])
    model = SpanModel(payload["vocab_size"], config)
    model.load_state_dict(payload["model_state"])
    model.eval()
    return model, config, payload


def check_compatible(payload, tok: Tokenizer) -> None:
    if payload["vocab_size"] != tok.vocab_size or payload["specials"] != list(tok.specials):
        raise ValueError(
            "checkpoint and tokenizer disagree "
            f"(vocab {payload['vocab_size']} vs {tok.vocab_size})"
        )


def train(train_examples, eval_examples, tok: Tokenizer, config: TrainerConfig,
          out_dir: str | Path, seed: int = 13, stop_at_perfect: float | None = None,
          early_stopping: bool = True, progress=None) -> TrainingState:
    if not train_examples:
        raise ValueError("training set is empty")
    if not eval_examples:
        raise ValueError("eval set is empty")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    torch.manual_seed(seed)
    rng = random.Random(seed)
    model = SpanModel(tok.vocab_size, config)
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss(ignore_index=tok.special_id(PAD))

    state = TrainingState()
    order = list(range(len(train_examples)))
    with open(out / TRAINING_LOG_NAME, "w", encoding="utf-8") as log:
        for epoch in range(1, config.max_epochs + 1):
            model.train()
            rng.shuffle(order)
            total_loss = 0.0
            steps = 0
            for start in range(0, len(order), config.batch_size):
                batch = [train_examples[i] for i in order[start : start + config.batch_size]]
                tensors = collate(batch, tok)
                logits = model(tensors["src"], tensors["src_pad"], tensors["dec_in"])
                loss = loss_fn(logits.reshape(-1, logits.size(-1)), tensors["target"].reshape(-1))
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
                total_loss += loss.item()
                steps += 1
            mean_loss = total_loss / steps

            decoded = greedy_decode(model, eval_examples, tok, config.batch_size, config.decode_budget)
            rate = perfect_rate(decoded, eval_examples)
            state.losses.append(mean_loss)
            state.perfect_on_eval.append(rate)
            log.write(json.dumps({"epoch": epoch, "loss": mean_loss, "perfect_eval": rate}) + "\n")
            log.flush()
            if progress is not None:
                progress(epoch, mean_loss, rate)

            if rate > state.best_rate:
                state.best_rate = rate
                state.best_epoch = epoch
                save_checkpoint(out / CHECKPOINT_NAME, model, config, tok, epoch, rate)

            if stop_at_perfect is not None and rate >= stop_at_perfect:
                break
            if early_stopping and should_stop(state.perfect_on_eval, config.patience_window):
                state.stopped_early = True
                break

    meta = {
        "config": dataclasses.asdict(config),
        "seed": seed,
        "vocab_size": tok.vocab_size,
        "train_instances": len(train_examples),
        "eval_instances": len(eval_examples),
        "epochs_run": state.epoch,
        "best_epoch": state.best_epoch,
        "best_perfect_eval": state.best_rate,
        "stopped_early": state.stopped_early,
        "early_stopping": early_stopping,
        "objective": "sequence-to-sequence span generation from a single masked position",
    }
    with open(out / RUN_META_NAME, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    return state
