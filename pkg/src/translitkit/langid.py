"""Hashed character-n-gram linear classifier for language routing.

A multinomial logistic model over hashed character n-grams stands in for the
original FastText classifiers: the feature family is the same, and for
disjoint-script separation no embedding is needed. Softmax scores are sums of
per-n-gram weight rows plus a bias.
"""

from __future__ import annotations

import json
import struct
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .errors import ConfigError, FormatError, TrainingError

DEFAULT_LABELS = ("bo", "mn", "ug", "zh", "other")
DEFAULT_HASH_BUCKETS = 1 << 20

_MAGIC = b"TKLID\x01\n"
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class TrainingParams:
    """Hyperparameters; `dim` and `window` are recorded for provenance only
    (a linear model has no embedding), the rest drive training."""

    learning_rate: float = 0.1
    epochs: int = 25
    ngram_range: tuple[int, int] = (1, 3)
    min_count: int = 5
    dim: int = 100
    window: int = 5
    seed: int = 0

    @classmethod
    def input_defaults(cls) -> "TrainingParams":
        """Raw-text classifier preset."""
        return cls()

    @classmethod
    def output_defaults(cls) -> "TrainingParams":
        """Transliterated-text classifier preset; longer n-grams capture code patterns."""
        return cls(learning_rate=0.05, epochs=30, ngram_range=(2, 4), min_count=3, dim=150, window=7)


@dataclass
class Prediction:
    label: str
    confidence: float
    distribution: dict[str, float]


@dataclass
class LangIdModel:
    labels: list[str]
    ngram_range: tuple[int, int]
    hash_buckets: int
    weights: np.ndarray  # (hash_buckets, n_labels)
    bias: np.ndarray  # (n_labels,)
    training_params: TrainingParams

    def __post_init__(self):
        if self.weights.shape != (self.hash_buckets, len(self.labels)):
            raise ConfigError(
                f"weight shape {self.weights.shape} does not match "
                f"{self.hash_buckets} buckets x {len(self.labels)} labels"
            )


def _bucket(gram: str, buckets: int) -> int:
    h = 0
    for ch in gram:
        h = (h * 31 + ord(ch)) & _MASK64
    return h % buckets


def _ngram_counts(text: str, lo: int, hi: int) -> Counter[str]:
    grams: Counter[str] = Counter()
    n = len(text)
    for size in range(lo, hi + 1):
        if size > n:
            break
        for i in range(n - size + 1):
            grams[text[i : i + size]] += 1
    return grams


def _feature_arrays(
    grams: Counter[str],
    buckets: int,
    bucket_cache: dict[str, int],
    keep: frozenset[str] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    agg: Counter[int] = Counter()
    for g, c in grams.items():
        if keep is not None and g not in keep:
            continue
        b = bucket_cache.get(g)
        if b is None:
            b = bucket_cache[g] = _bucket(g, buckets)
        agg[b] += c
    idx = np.fromiter(agg.keys(), dtype=np.int64, count=len(agg))
    cnt = np.fromiter(agg.values(), dtype=np.float64, count=len(agg))
    return idx, cnt


def train(
    examples: Iterable[tuple[str, str]],
    params: TrainingParams | None = None,
    labels: Iterable[str] | None = None,
    hash_buckets: int = DEFAULT_HASH_BUCKETS,
) -> LangIdModel:
    """SGD over examples in the given order; deterministic for fixed inputs.

    N-grams occurring fewer than `min_count` times in the whole corpus are
    dropped before hashing.
    """
    params = params or TrainingParams()
    data = list(examples)
    seen = {lab for _, lab in data}
    label_list = list(labels) if labels is not None else sorted(seen)
    if len(seen) < 2:
        raise TrainingError(f"need examples from at least 2 labels, got {sorted(seen)}")
    stray = seen - set(label_list)
    if stray:
        raise TrainingError(f"examples carry labels outside the label set: {sorted(stray)}")
    lo, hi = params.ngram_range

    gram_totals: Counter[str] = Counter()
    per_example: list[Counter[str]] = []
    for text, _ in data:
        grams = _ngram_counts(text, lo, hi)
        per_example.append(grams)
        gram_totals.update(grams)
    keep = frozenset(g for g, c in gram_totals.items() if c >= params.min_count)

    label_idx = {lab: i for i, lab in enumerate(label_list)}
    bucket_cache: dict[str, int] = {}
    feats = [
        (*_feature_arrays(grams, hash_buckets, bucket_cache, keep), label_idx[lab])
        for grams, (_, lab) in zip(per_example, data)
    ]

    n_labels = len(label_list)
    weights = np.zeros((hash_buckets, n_labels))
    bias = np.zeros(n_labels)
    lr = params.learning_rate
    for _ in range(params.epochs):
        for idx, cnt, y in feats:
            if idx.size:
                scores = bias + cnt @ weights[idx]
            else:
                scores = bias.copy()
            scores -= scores.max()
            p = np.exp(scores)
            p /= p.sum()
            p[y] -= 1.0  # p is now the score gradient
            if idx.size:
                weights[idx] -= lr * cnt[:, None] * p
            bias -= lr * p
    return LangIdModel(label_list, (lo, hi), hash_buckets, weights, bias, params)


def predict(text: str, model: LangIdModel) -> Prediction:
    """Softmax over summed n-gram weights; empty text is "other" with a uniform distribution."""
    labels = model.labels
    if text == "":
        dist = {lab: 1.0 / len(labels) for lab in labels}
        label = "other" if "other" in labels else labels[0]
        return Prediction(label, dist[label], dist)
    grams = _ngram_counts(text, *model.ngram_range)
    idx, cnt = _feature_arrays(grams, model.hash_buckets, {})
    if idx.size:
        scores = model.bias + cnt @ model.weights[idx]
    else:
        scores = model.bias.copy()
    scores = scores - scores.max()
    p = np.exp(scores)
    p /= p.sum()
    best = int(np.argmax(p))
    return Prediction(labels[best], float(p[best]), {lab: float(p[i]) for i, lab in enumerate(labels)})


def evaluate(examples: Iterable[tuple[str, str]], model: LangIdModel) -> dict:
    """Per-label precision/recall/F1 plus macro F1 over (text, label) pairs."""
    tp: Counter[str] = Counter()
    fp: Counter[str] = Counter()
    fn: Counter[str] = Counter()
    for text, gold in examples:
        got = predict(text, model).label
        if got == gold:
            tp[gold] += 1
        else:
            fp[got] += 1
            fn[gold] += 1
    per_label = {}
    f1s = []
    for lab in model.labels:
        prec = tp[lab] / (tp[lab] + fp[lab]) if tp[lab] + fp[lab] else 0.0
        rec = tp[lab] / (tp[lab] + fn[lab]) if tp[lab] + fn[lab] else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        per_label[lab] = {"precision": prec, "recall": rec, "f1": f1}
        f1s.append(f1)
    return {"per_label": per_label, "macro_f1": sum(f1s) / len(f1s)}


def save_model(model: LangIdModel, path: str) -> None:
    """Versioned magic, JSON header, then little-endian float64 weights and bias."""
    header = {
        "labels": model.labels,
        "ngram_range": list(model.ngram_range),
        "hash_buckets": model.hash_buckets,
        "training_params": asdict(model.training_params),
    }
    blob = json.dumps(header, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(model.weights, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.bias, dtype="<f8").tobytes())


def load_model(path: str) -> LangIdModel:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ConfigError(f"{path}: not a translitkit language-id model (bad magic)")
        (blob_len,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(blob_len).decode("utf-8"))
        labels = list(header["labels"])
        buckets = int(header["hash_buckets"])
        tp = header["training_params"]
        tp["ngram_range"] = tuple(tp["ngram_range"])
        params = TrainingParams(**tp)
        n = buckets * len(labels)
        weights = np.frombuffer(fh.read(8 * n), dtype="<f8").reshape(buckets, len(labels)).copy()
        bias = np.frombuffer(fh.read(8 * len(labels)), dtype="<f8").copy()
    return LangIdModel(labels, tuple(header["ngram_range"]), buckets, weights, bias, params)


def read_labeled(path: str) -> list[tuple[str, str]]:
    """Parse `__label__<tag><TAB><text>` lines into (text, label) pairs."""
    examples = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            if not line.startswith("__label__") or "\t" not in line:
                raise FormatError(f"line {lineno}: expected '__label__<tag>\\t<text>'")
            tag, text = line.split("\t", 1)
            examples.append((text, tag[len("__label__") :]))
    return examples
