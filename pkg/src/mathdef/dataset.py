"""Labeled datasets: construction, statistics, splitting, oversampling.

Datasets are immutable values; every operation returns a new one and is a
pure function of (input, seed).  The positive class (label 1) means "this
sentence defines something".
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DatasetError, SchemaError
from .jsonl import read_jsonl, write_jsonl

log = logging.getLogger(__name__)

ORIGIN_ORIGINAL = "original"
_DUP_PREFIX = "dup:"


@dataclass(frozen=True)
class LabeledExample:
    id: str
    text: str
    label: int
    corpus_tag: str = "plain"
    origin: str = ORIGIN_ORIGINAL  # "original" or "dup:<source id>"

    def __post_init__(self):
        if self.label not in (0, 1):
            raise DatasetError(f"example {self.id!r}: label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class Dataset:
    examples: tuple[LabeledExample, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.examples)

    @property
    def positives(self) -> int:
        return sum(ex.label for ex in self.examples)


def make_dataset(examples: Iterable[LabeledExample], name: str, seed: int | None = None,
                 created_from: list | None = None) -> Dataset:
    examples = tuple(examples)
    seen = set()
    for ex in examples:
        if ex.id in seen:
            raise DatasetError(f"duplicate example id {ex.id!r} in dataset {name!r}")
        seen.add(ex.id)
    meta = {"name": name, "seed": seed, "created_from": created_from or []}
    return Dataset(examples=examples, meta=meta)


def _sentence_id_text(item) -> tuple[str, str]:
    if isinstance(item, Mapping):
        return str(item["id"]), str(item["text"])
    return str(item.id), str(item.text)


def attach_labels(
    sentences: Iterable,
    annotations: Mapping[str, int],
    corpus_tag: str = "plain",
    name: str = "dataset",
) -> Dataset:
    """Join sentences with their annotations; any mismatch is an error.

    ``sentences`` may be Sentence objects or sentence-JSONL records; every
    sentence needs a label and every annotation needs a sentence, so a
    half-labeled corpus cannot silently become a dataset.
    """
    pairs = [_sentence_id_text(s) for s in sentences]
    ids = {sid for sid, _ in pairs}
    if len(ids) != len(pairs):
        raise DatasetError("duplicate sentence ids in input")
    unknown = sorted(set(annotations) - ids)
    if unknown:
        raise DatasetError(f"annotations for unknown sentence ids: {unknown[:5]}")
    missing = sorted(ids - set(annotations))
    if missing:
        raise DatasetError(f"unlabeled sentences: {missing[:5]}")
    examples = [
        LabeledExample(id=sid, text=text, label=int(annotations[sid]), corpus_tag=corpus_tag)
        for sid, text in pairs
    ]
    return make_dataset(examples, name=name)


def density(d: Dataset) -> float:
    """Fraction of positive (definitional) examples; 0.0 for an empty set."""
    if not d.examples:
        log.warning("density of empty dataset %r reported as 0.0", d.meta.get("name"))
        return 0.0
    return d.positives / len(d.examples)


def combine(datasets: list[Dataset], name: str) -> Dataset:
    """Concatenate datasets; ids must not collide across inputs."""
    examples: list[LabeledExample] = []
    seen: set[str] = set()
    provenance = []
    for d in datasets:
        for ex in d.examples:
            if ex.id in seen:
                raise DatasetError(f"id {ex.id!r} appears in more than one input dataset")
            seen.add(ex.id)
            examples.append(ex)
        provenance.append({"name": d.meta.get("name"), "examples": len(d)})
    return make_dataset(examples, name=name, created_from=provenance)


def split(
    d: Dataset,
    val_fraction: float,
    seed: int,
    stratified: bool = False,
) -> tuple[Dataset, Dataset]:
    """Disjoint, exhaustive train/validation split.

    ``|val| = round(val_fraction * |d|)``; both halves keep their examples
    in original dataset order.  Stratified mode preserves class density to
    within one example per class (useful because an unstratified split of a
    low-density corpus can end up with zero positive validation examples).
    """
    if not 0 < val_fraction < 1:
        raise DatasetError(f"val_fraction must be in (0, 1), got {val_fraction}")
    n = len(d)
    n_val = round(val_fraction * n)
    if n_val == 0 or n_val == n:
        raise DatasetError(
            f"dataset of {n} examples is too small for a {val_fraction} validation split"
        )
    rng = random.Random(seed)
    if stratified:
        val_idx = _stratified_val_indices(d, n_val, rng)
    else:
        order = list(range(n))
        rng.shuffle(order)
        val_idx = set(order[:n_val])
    train_examples = [ex for i, ex in enumerate(d.examples) if i not in val_idx]
    val_examples = [ex for i, ex in enumerate(d.examples) if i in val_idx]
    base = d.meta.get("name", "dataset")
    prov = [{"name": base, "val_fraction": val_fraction, "stratified": stratified}]
    train = make_dataset(train_examples, name=f"{base}/train", seed=seed, created_from=prov)
    val = make_dataset(val_examples, name=f"{base}/val", seed=seed, created_from=prov)
    return train, val


def _stratified_val_indices(d: Dataset, n_val: int, rng: random.Random) -> set[int]:
    pos = [i for i, ex in enumerate(d.examples) if ex.label == 1]
    neg = [i for i, ex in enumerate(d.examples) if ex.label == 0]
    frac = n_val / len(d)
    want_pos = round(frac * len(pos))
    want_neg = round(frac * len(neg))
    # per-class rounding can drift off the target by one; settle the
    # difference on the larger class
    while want_pos + want_neg != n_val:
        delta = 1 if want_pos + want_neg < n_val else -1
        if len(neg) >= len(pos):
            want_neg += delta
        else:
            want_pos += delta
    want_pos = min(max(want_pos, 0), len(pos))
    want_neg = min(max(want_neg, 0), len(neg))
    rng.shuffle(pos)
    rng.shuffle(neg)
    return set(pos[:want_pos]) | set(neg[:want_neg])


def oversample(
    train: Dataset,
    mode: str = "minority",
    seed: int = 0,
    target_density: float | None = None,
) -> Dataset:
    """Duplicate positive examples until the target density is reached.

    ``minority`` balances the classes (density 0.5); ``target`` stops at
    ``target_density``.  Negatives are never touched, duplicates are drawn
    uniformly with replacement and get fresh ids with ``origin`` pointing
    at their source.  The duplicate count is minimal: dropping any single
    duplicate would fall below the target.
    """
    if mode == "minority":
        target = Fraction(1, 2)
    elif mode == "target":
        if target_density is None or not 0 < target_density < 1:
            raise DatasetError("target mode needs a target_density in (0, 1)")
        target = Fraction(str(target_density))
    else:
        raise DatasetError(f"unknown oversample mode {mode!r}")

    positives = [ex for ex in train.examples if ex.label == 1]
    n_pos, n = len(positives), len(train)
    if n_pos == 0:
        raise DatasetError("cannot oversample: dataset has no positive examples")
    if Fraction(n_pos, n) >= target:
        raise DatasetError(
            f"definition density {n_pos}/{n} already at or above the target "
            f"{float(target):.4g}; skip oversampling for this dataset"
        )
    # smallest k with (pos+k)/(n+k) >= target
    k = math.ceil((target * n - n_pos) / (1 - target))

    rng = random.Random(seed)
    existing = {ex.id for ex in train.examples}
    duplicates = []
    for seq in range(1, k + 1):
        src = positives[rng.randrange(n_pos)]
        dup_id = f"{src.id}~dup{seq}"
        while dup_id in existing:
            dup_id += "+"
        existing.add(dup_id)
        duplicates.append(
            replace(src, id=dup_id, origin=f"{_DUP_PREFIX}{src.id}")
        )
    base = train.meta.get("name", "dataset")
    prov = [{"name": base, "mode": mode, "target": float(target), "added": k}]
    return make_dataset(
        list(train.examples) + duplicates,
        name=f"{base}/oversampled",
        seed=seed,
        created_from=prov,
    )


def length_audit(d: Dataset, max_len: int = 512) -> list[tuple[str, int]]:
    """Examples whose text exceeds ``max_len`` characters, with lengths.

    Audit only: the pipeline never truncates; padding/truncation belongs to
    a model's own tokenization layer.
    """
    return [(ex.id, len(ex.text)) for ex in d.examples if len(ex.text) > max_len]


def validate(d: Dataset) -> None:
    """Check dataset invariants (duplicate origins, id uniqueness)."""
    by_id = {}
    for ex in d.examples:
        if ex.id in by_id:
            raise DatasetError(f"duplicate id {ex.id!r}")
        by_id[ex.id] = ex
    for ex in d.examples:
        if ex.origin == ORIGIN_ORIGINAL:
            continue
        if not ex.origin.startswith(_DUP_PREFIX):
            raise DatasetError(f"example {ex.id!r}: malformed origin {ex.origin!r}")
        src = by_id.get(ex.origin[len(_DUP_PREFIX):])
        if src is None:
            raise DatasetError(f"example {ex.id!r}: duplicate source not in dataset")
        if src.text != ex.text or src.label != ex.label:
            raise DatasetError(f"example {ex.id!r}: duplicate differs from its source")


# ---------------------------------------------------------------------------
# JSONL round trip

def to_records(d: Dataset) -> list[dict]:
    return [
        {
            "id": ex.id,
            "text": ex.text,
            "label": ex.label,
            "corpus": ex.corpus_tag,
            "origin": ex.origin,
        }
        for ex in d.examples
    ]


def save_dataset(d: Dataset, path: str | Path) -> int:
    return write_jsonl(path, to_records(d))


def load_dataset(path: str | Path, name: str | None = None) -> Dataset:
    examples = []
    for lineno, obj in read_jsonl(path):
        for key in ("id", "text", "label"):
            if key not in obj:
                raise SchemaError(f"{path}:{lineno}: missing key {key!r}")
        if obj["label"] not in (0, 1):
            raise SchemaError(f"{path}:{lineno}: label must be 0 or 1, got {obj['label']!r}")
        examples.append(
            LabeledExample(
                id=str(obj["id"]),
                text=str(obj["text"]),
                label=int(obj["label"]),
                corpus_tag=str(obj.get("corpus", "plain")),
                origin=str(obj.get("origin", ORIGIN_ORIGINAL)),
            )
        )
    try:
        return make_dataset(examples, name=name or str(path))
    except DatasetError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def load_annotations(path: str | Path) -> dict[str, int]:
    """Annotations JSONL: {"id":..., "label":...} per line."""
    annotations: dict[str, int] = {}
    for lineno, obj in read_jsonl(path):
        for key in ("id", "label"):
            if key not in obj:
                raise SchemaError(f"{path}:{lineno}: missing key {key!r}")
        if obj["label"] not in (0, 1):
            raise SchemaError(f"{path}:{lineno}: label must be 0 or 1, got {obj['label']!r}")
        sid = str(obj["id"])
        if sid in annotations:
            raise SchemaError(f"{path}:{lineno}: duplicate annotation for id {sid!r}")
        annotations[sid] = int(obj["label"])
    return annotations
