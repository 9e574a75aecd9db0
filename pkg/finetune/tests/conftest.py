"""Fixtures: a tiny local BERT checkpoint so tests never touch a hub."""

import json
import random

import pytest
from transformers import BertConfig, BertForSequenceClassification, BertTokenizerFast

_WORDS = [
    "the", "a", "is", "called", "we", "say", "defined", "group", "ring",
    "field", "monoid", "element", "unique", "prove", "lemma", "theorem",
    "structure", "every", "admits", "operation", "if", "and", "only",
]


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """Randomly initialized 2-layer BERT + WordPiece vocab, saved to disk."""
    root = tmp_path_factory.mktemp("ckpt")
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    vocab += list("abcdefghijklmnopqrstuvwxyz0123456789$.!?,")
    vocab += ["##" + c for c in "abcdefghijklmnopqrstuvwxyz"]
    vocab += _WORDS
    (root / "vocab.txt").write_text("\n".join(vocab), encoding="utf-8")
    tokenizer = BertTokenizerFast(vocab_file=str(root / "vocab.txt"))
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=512,
        num_labels=2,
    )
    model = BertForSequenceClassification(config)
    ckpt_dir = root / "tiny-bert"
    model.save_pretrained(ckpt_dir)
    tokenizer.save_pretrained(ckpt_dir)
    return str(ckpt_dir)


@pytest.fixture()
def toy_jsonl(tmp_path):
    """50-sentence labeled dataset JSONL, both classes present."""
    rng = random.Random(13)
    path = tmp_path / "toy.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        for i in range(50):
            label = i % 2
            if label:
                text = f"a {rng.choice(_WORDS)} is called a {rng.choice(_WORDS)}"
            else:
                text = f"we prove the {rng.choice(_WORDS)} {rng.choice(_WORDS)}"
            fh.write(json.dumps({"id": f"s{i}", "text": text, "label": label}) + "\n")
    return path
