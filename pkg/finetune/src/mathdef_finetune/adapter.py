"""Fine-tune a pretrained encoder with a binary head; predict to JSONL.

The checkpoint identifier is an opaque string handed to the transformers
library (hub name or local path), so swapping encoder families is pure
configuration.  Sequences are padded then truncated to ``max_length``
tokenizer units; training minimizes the standard cross-entropy the
sequence-classification head provides.  Every hyperparameter, per-step
loss, and per-epoch loss lands in a run log JSON next to the model.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

RUN_LOG_NAME = "run_log.json"
CONFIG_NAME = "finetune_config.json"


class AdapterError(Exception):
    """Bad input data or configuration."""


@dataclass(frozen=True)
class FinetuneConfig:
    model_name: str
    epochs: int = 3
    batch_size: int = 10
    max_length: int = 512
    seed: int = 0
    learning_rate: float = 2e-5  # customary encoder fine-tuning rate

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1 or self.max_length < 1:
            raise AdapterError("epochs, batch_size and max_length must be >= 1")
        if self.learning_rate <= 0:
            raise AdapterError("learning_rate must be positive")


def read_examples(path: str | Path, require_label: bool) -> list[dict]:
    """Dataset JSONL rows; schema errors name the offending line."""
    path = Path(path)
    required = ("id", "text", "label") if require_label else ("id", "text")
    rows = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise AdapterError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            for key in required:
                if key not in obj:
                    raise AdapterError(f"{path}:{lineno}: missing key {key!r}")
            if require_label and obj["label"] not in (0, 1):
                raise AdapterError(
                    f"{path}:{lineno}: label must be 0 or 1, got {obj['label']!r}"
                )
            rows.append(obj)
    return rows


def _seed_everything(seed: int) -> None:
    random.seed(seed)
    torch.manual_seed(seed)


def _encode(tokenizer, texts: list[str], max_length: int):
    return tokenizer(
        texts,
        padding="max_length",
        truncation=True,
        max_length=max_length,
        return_tensors="pt",
    )


def finetune(train_path: str | Path, config: FinetuneConfig, out_dir: str | Path) -> dict:
    """Train on a dataset JSONL; write model artifact + run log; return the log."""
    rows = read_examples(train_path, require_label=True)
    if not rows:
        raise AdapterError(f"{train_path}: no training examples")
    labels = [int(r["label"]) for r in rows]
    if len(set(labels)) < 2:
        raise AdapterError(f"{train_path}: training data contains a single class")

    _seed_everything(config.seed)
    tokenizer = AutoTokenizer.from_pretrained(config.model_name)
    model = AutoModelForSequenceClassification.from_pretrained(
        config.model_name, num_labels=2
    )
    model.train()
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)

    n = len(rows)
    generator = torch.Generator().manual_seed(config.seed)
    steps = []
    epoch_losses = []
    step_count = 0
    for epoch in range(1, config.epochs + 1):
        order = torch.randperm(n, generator=generator).tolist()
        batch_losses = []
        for lo in range(0, n, config.batch_size):
            batch = [rows[i] for i in order[lo : lo + config.batch_size]]
            encoded = _encode(tokenizer, [r["text"] for r in batch], config.max_length)
            target = torch.tensor([int(r["label"]) for r in batch])
            output = model(**encoded, labels=target)  # cross-entropy loss
            optimizer.zero_grad()
            output.loss.backward()
            optimizer.step()
            step_count += 1
            loss = float(output.loss.detach())
            batch_losses.append(loss)
            steps.append({"step": step_count, "epoch": epoch, "loss": loss})
        epoch_losses.append(sum(batch_losses) / len(batch_losses))

    out_dir = Path(out_dir)
    model_dir = out_dir / "model"
    model_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(model_dir)
    tokenizer.save_pretrained(model_dir)
    # keep the adapter config with the artifact so predict is self-contained
    (model_dir / CONFIG_NAME).write_text(json.dumps(asdict(config)), encoding="utf-8")

    run_log = {
        **asdict(config),
        "num_examples": n,
        "num_optimizer_steps": step_count,
        "epoch_losses": epoch_losses,
        "steps": steps,
        "model_dir": str(model_dir),
    }
    (out_dir / RUN_LOG_NAME).write_text(
        json.dumps(run_log, indent=2), encoding="utf-8"
    )
    return run_log


def predict(
    model_dir: str | Path,
    in_path: str | Path,
    out_path: str | Path,
    batch_size: int | None = None,
    threshold: float = 0.5,
) -> int:
    """Score a dataset/sentence JSONL; one prediction line per input line.

    Output schema matches the toolkit's predictions JSONL exactly:
    {"id":..., "score": float, "label": 0|1} with score = P(definitional).
    """
    model_dir = Path(model_dir)
    stored = json.loads((model_dir / CONFIG_NAME).read_text(encoding="utf-8"))
    config = FinetuneConfig(**stored)
    rows = read_examples(in_path, require_label=False)

    tokenizer = AutoTokenizer.from_pretrained(model_dir)
    model = AutoModelForSequenceClassification.from_pretrained(model_dir)
    model.eval()

    batch_size = batch_size or config.batch_size
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    written = 0
    with out_path.open("w", encoding="utf-8", newline="\n") as fh:
        for lo in range(0, len(rows), batch_size):
            batch = rows[lo : lo + batch_size]
            encoded = _encode(tokenizer, [r["text"] for r in batch], config.max_length)
            with torch.no_grad():
                logits = model(**encoded).logits
            scores = torch.softmax(logits, dim=-1)[:, 1]
            for row, score in zip(batch, scores.tolist()):
                record = {
                    "id": str(row["id"]),
                    "score": float(score),
                    "label": int(score >= threshold),
                }
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
                written += 1
    return written
