"""Native baseline classifier: logistic regression over hashed features.

No external ML runtime: features are signed-hash buckets of lowercased
word n-grams (math tokens collapse to ``<MATH>`` so formulas don't become
memorized one-off features), a handful of definitional cue phrases, and a
sentence-length bucket.  Training is plain mini-batch gradient descent on
mean binary cross-entropy with an L2 penalty, deterministic for a fixed
seed, so the whole train/predict/evaluate loop can be verified on a desk.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import sentencize
from .dataset import Dataset
from .errors import DatasetError, SchemaError

MATH_SYMBOL = "<MATH>"
CUE_PHRASES = ("is called", "we say", "is defined", "if and only if", "we call")

_MODEL_FORMAT = "mathdef-baseline-v1"


@dataclass(frozen=True)
class BaselineConfig:
    dim: int = 2**18
    ngram_min: int = 1
    ngram_max: int = 2
    lr: float = 0.1
    l2: float = 1e-4
    epochs: int = 3
    batch_size: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.dim <= 0 or (self.dim & (self.dim - 1)) != 0:
            raise DatasetError(f"feature dimension must be a power of two, got {self.dim}")
        if not (1 <= self.ngram_min <= self.ngram_max):
            raise DatasetError("need 1 <= ngram_min <= ngram_max")
        if self.lr <= 0:
            raise DatasetError("learning rate must be positive")
        if self.l2 < 0:
            raise DatasetError("l2 must be non-negative")


@dataclass
class BaselineModel:
    weights: np.ndarray
    bias: float
    config: BaselineConfig


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    score: float
    label: int


def _hash64(feature: str) -> int:
    digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def featurize(text: str, config: BaselineConfig) -> dict[int, float]:
    """Sparse signed-hash feature vector for one sentence."""
    if not text.strip():
        return {}
    tokens = sentencize.tokenize(text)
    words = [
        MATH_SYMBOL if t.kind == sentencize.MATH else t.text.lower() for t in tokens
    ]
    features = []
    for n in range(config.ngram_min, config.ngram_max + 1):
        for i in range(len(words) - n + 1):
            features.append("ng:" + " ".join(words[i : i + n]))
    lowered = text.lower()
    for cue in CUE_PHRASES:
        if cue in lowered:
            features.append("cue:" + cue)
    features.append(f"len:{min(len(words) // 5, 8)}")

    vec: dict[int, float] = {}
    mask = config.dim - 1
    for feat in features:
        h = _hash64(feat)
        idx = h & mask
        sign = 1.0 if (h >> 63) == 0 else -1.0
        vec[idx] = vec.get(idx, 0.0) + sign
    return {idx: val for idx, val in vec.items() if val != 0.0}


def _sigmoid(z):
    with np.errstate(over="ignore"):  # saturates to 0.0/1.0, which is fine
        return 1.0 / (1.0 + np.exp(-z))


def _dot(weights: np.ndarray, vec: Mapping[int, float]) -> float:
    if not vec:
        return 0.0
    idx = np.fromiter(vec.keys(), dtype=np.int64, count=len(vec))
    val = np.fromiter(vec.values(), dtype=np.float64, count=len(vec))
    return float(weights[idx] @ val)


def regularized_loss(
    weights: np.ndarray,
    bias: float,
    vectors: Sequence[Mapping[int, float]],
    labels: Sequence[float],
    l2: float,
) -> float:
    """Mean binary cross-entropy plus (l2/2)*||w||^2 (bias unpenalized)."""
    total = 0.0
    for vec, y in zip(vectors, labels):
        p = _sigmoid(_dot(weights, vec) + bias)
        p = min(max(p, 1e-15), 1.0 - 1e-15)
        total += -(y * math.log(p) + (1.0 - y) * math.log(1.0 - p))
    return total / len(labels) + 0.5 * l2 * float(weights @ weights)


def loss_gradient(
    weights: np.ndarray,
    bias: float,
    vectors: Sequence[Mapping[int, float]],
    labels: Sequence[float],
    l2: float,
) -> tuple[np.ndarray, float]:
    """Analytic gradient of :func:`regularized_loss` (dense, for checking)."""
    grad_w = l2 * weights.astype(np.float64).copy()
    grad_b = 0.0
    n = len(labels)
    for vec, y in zip(vectors, labels):
        err = (_sigmoid(_dot(weights, vec) + bias) - y) / n
        for idx, val in vec.items():
            grad_w[idx] += err * val
        grad_b += err
    return grad_w, grad_b


def train(
    train_set: Dataset,
    config: BaselineConfig = BaselineConfig(),
) -> tuple[BaselineModel, list[float]]:
    """Mini-batch gradient descent; returns the model and per-epoch losses.

    Batches are visited in a per-epoch shuffled order drawn from the seed,
    so (dataset, config) fully determines the result.
    """
    if not len(train_set):
        raise DatasetError("cannot train on an empty dataset")
    labels = np.array([ex.label for ex in train_set.examples], dtype=np.float64)
    if labels.min() == labels.max():
        raise DatasetError("training data contains a single class; need both labels")
    vectors = [featurize(ex.text, config) for ex in train_set.examples]

    w = np.zeros(config.dim, dtype=np.float64)
    b = 0.0
    rng = np.random.default_rng(config.seed)
    n = len(vectors)
    trace: list[float] = []
    for _ in range(config.epochs):
        order = rng.permutation(n)
        epoch_losses = []
        for lo in range(0, n, config.batch_size):
            batch = order[lo : lo + config.batch_size]
            zs = np.array([_dot(w, vectors[i]) + b for i in batch])
            ps = _sigmoid(zs)
            ys = labels[batch]
            clipped = np.clip(ps, 1e-15, 1.0 - 1e-15)
            ce = float(np.mean(-(ys * np.log(clipped) + (1 - ys) * np.log(1 - clipped))))
            with np.errstate(over="ignore"):  # inf here is caught just below
                loss = ce + 0.5 * config.l2 * float(w @ w)
            if not math.isfinite(loss):
                raise DatasetError(
                    "training diverged (non-finite loss); try a smaller learning rate"
                )
            epoch_losses.append(loss)
            # sparse gradient of the batch CE; the L2 term is the dense
            # shrink applied to all weights below
            grad: dict[int, float] = {}
            m = len(batch)
            for row, i in enumerate(batch):
                err = (ps[row] - ys[row]) / m
                for idx, val in vectors[i].items():
                    grad[idx] = grad.get(idx, 0.0) + err * val
            w *= 1.0 - config.lr * config.l2
            for idx, g in grad.items():
                w[idx] -= config.lr * g
            b -= config.lr * float(np.mean(ps - ys))
        trace.append(float(np.mean(epoch_losses)))
    if not np.all(np.isfinite(w)) or not math.isfinite(b):
        raise DatasetError(
            "training diverged (non-finite weights); try a smaller learning rate"
        )
    return BaselineModel(weights=w, bias=b, config=config), trace


def predict(
    model: BaselineModel,
    inputs: Dataset | Iterable,
    threshold: float = 0.5,
) -> list[PredictionRecord]:
    """Score inputs in order; label 1 iff score >= threshold."""
    if not np.all(np.isfinite(model.weights)) or not math.isfinite(model.bias):
        raise DatasetError("model weights are not finite")
    if isinstance(inputs, Dataset):
        items = [(ex.id, ex.text) for ex in inputs.examples]
    else:
        items = []
        for item in inputs:
            if isinstance(item, Mapping):
                items.append((str(item["id"]), str(item["text"])))
            else:
                items.append((str(item.id), str(item.text)))
    records = []
    for sid, text in items:
        score = float(_sigmoid(_dot(model.weights, featurize(text, model.config)) + model.bias))
        records.append(PredictionRecord(id=sid, score=score, label=int(score >= threshold)))
    return records


def prediction_records(preds: Iterable[PredictionRecord]) -> list[dict]:
    return [{"id": p.id, "score": p.score, "label": p.label} for p in preds]


# ---------------------------------------------------------------------------
# model file round trip (JSON with non-zero weights only)

def save_model(model: BaselineModel, path: str | Path) -> None:
    nz = np.nonzero(model.weights)[0]
    payload = {
        "format": _MODEL_FORMAT,
        "config": asdict(model.config),
        "bias": model.bias,
        "weights": {str(int(i)): float(model.weights[i]) for i in nz},
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(payload), encoding="utf-8")
    tmp.replace(path)


def load_model(path: str | Path) -> BaselineModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not a valid model file: {exc.msg}") from exc
    if payload.get("format") != _MODEL_FORMAT:
        raise SchemaError(f"{path}: unknown model format {payload.get('format')!r}")
    config = BaselineConfig(**payload["config"])
    weights = np.zeros(config.dim, dtype=np.float64)
    for key, val in payload["weights"].items():
        weights[int(key)] = float(val)
    return BaselineModel(weights=weights, bias=float(payload["bias"]), config=config)
