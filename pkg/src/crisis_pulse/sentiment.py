"""Three-class sentiment: a multinomial bag-of-words Bayes classifier plus import of external scores.

Ties between class scores resolve to the earliest label in ``LABELS``
order (negative, neutral, positive).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError

log = logging.getLogger(__name__)

LABELS = ("negative", "neutral", "positive")
SCORE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class LabeledDoc:
    tokens: tuple[str, ...]
    label: str


@dataclass(frozen=True)
class SentimentModel:
    labels: tuple[str, ...]
    class_log_priors: dict[str, float]
    word_log_likelihoods: dict[str, list[float]]  # label -> per-vocabulary-index log prob
    vocabulary: tuple[str, ...]
    smoothing: float

    @property
    def index(self):
        return {w: i for i, w in enumerate(self.vocabulary)}

    def to_json(self) -> str:
        return json.dumps({
            "labels": list(self.labels),
            "class_log_priors": self.class_log_priors,
            "vocabulary": list(self.vocabulary),
            "word_log_likelihoods": self.word_log_likelihoods,
            "smoothing": self.smoothing,
        }, ensure_ascii=False, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> SentimentModel:
        d = json.loads(text)
        return cls(tuple(d["labels"]), d["class_log_priors"], d["word_log_likelihoods"],
                   tuple(d["vocabulary"]), d["smoothing"])


@dataclass(frozen=True)
class SentimentPrediction:
    tweet_id: str
    label: str
    scores: dict[str, float]

    def to_dict(self):
        return {"tweet_id": self.tweet_id, "label": self.label, **self.scores}


@dataclass(frozen=True)
class EvalMetrics:
    labels: tuple[str, ...]
    accuracy: float
    precision: dict[str, float]
    recall: dict[str, float]
    f1: dict[str, float]
    confusion: list[list[int]]  # rows: true label, columns: predicted label

    def to_dict(self):
        return {"labels": list(self.labels), "accuracy": self.accuracy, "precision": self.precision,
                "recall": self.recall, "f1": self.f1, "confusion": self.confusion}


def argmax_label(scores: dict[str, float], labels: Sequence[str] = LABELS) -> str:
    best = labels[0]
    for label in labels[1:]:
        if scores[label] > scores[best]:
            best = label
    return best


def split_train_test(docs: Sequence[LabeledDoc], train_ratio: float = 0.9, seed: int = 0):
    """Stratified, seeded split; each class contributes round(n * ratio) docs to train."""
    if not 0 < train_ratio < 1:
        raise ValidationError("train_ratio must lie strictly between 0 and 1", train_ratio=train_ratio)
    by_label = defaultdict(list)
    for i, doc in enumerate(docs):
        by_label[doc.label].append(i)
    for label, members in by_label.items():
        if len(members) < 2:
            raise ValidationError(f"class {label!r} has fewer than 2 docs", label=label)
    rng = random.Random(seed)
    train_idx, test_idx = [], []
    for label in sorted(by_label):
        members = by_label[label][:]
        rng.shuffle(members)
        cut = min(max(round(len(members) * train_ratio), 1), len(members) - 1)
        train_idx += members[:cut]
        test_idx += members[cut:]
    return [docs[i] for i in sorted(train_idx)], [docs[i] for i in sorted(test_idx)]


def train(train_docs: Sequence[LabeledDoc], smoothing: float = 1.0,
          labels: Sequence[str] = LABELS) -> SentimentModel:
    if smoothing <= 0:
        raise ValidationError("smoothing must be positive", smoothing=smoothing)
    labels = tuple(labels)
    doc_counts = Counter(d.label for d in train_docs)
    for label in labels:
        if doc_counts[label] == 0:
            raise ValidationError(f"no training docs for class {label!r}", label=label)
    unknown = set(doc_counts) - set(labels)
    if unknown:
        raise ValidationError(f"unknown labels {sorted(unknown)}", labels=sorted(unknown))
    vocabulary = tuple(sorted({t for d in train_docs for t in d.tokens}))
    word_counts = {label: Counter() for label in labels}
    for d in train_docs:
        word_counts[d.label].update(d.tokens)
    n = len(train_docs)
    V = len(vocabulary)
    priors = {label: math.log(doc_counts[label] / n) for label in labels}
    likelihoods = {}
    for label in labels:
        denom = sum(word_counts[label].values()) + smoothing * V
        likelihoods[label] = [math.log((word_counts[label][w] + smoothing) / denom) for w in vocabulary]
    return SentimentModel(labels, priors, likelihoods, vocabulary, smoothing)


def predict(model: SentimentModel, tokens: Sequence[str], tweet_id: str = "",
            index: dict[str, int] | None = None) -> SentimentPrediction:
    index = model.index if index is None else index
    ids = [index[t] for t in tokens if t in index]
    log_post = {label: model.class_log_priors[label] + math.fsum(model.word_log_likelihoods[label][i] for i in ids)
                for label in model.labels}
    top = max(log_post.values())
    weights = {label: math.exp(v - top) for label, v in log_post.items()}
    total = math.fsum(weights.values())
    scores = {label: w / total for label, w in weights.items()}
    return SentimentPrediction(tweet_id, argmax_label(scores, model.labels), scores)


def predict_many(model: SentimentModel, items) -> list[SentimentPrediction]:
    """Predict ``(tweet_id, tokens)`` pairs."""
    index = model.index
    return [predict(model, tokens, tweet_id, index) for tweet_id, tokens in items]


def confusion_metrics(true_labels: Sequence[str], predicted: Sequence[str],
                      labels: Sequence[str] = LABELS) -> EvalMetrics:
    if not true_labels:
        raise ValidationError("empty test set")
    labels = tuple(labels)
    pos = {label: i for i, label in enumerate(labels)}
    confusion = [[0] * len(labels) for _ in labels]
    for t, p in zip(true_labels, predicted):
        confusion[pos[t]][pos[p]] += 1
    correct = sum(confusion[i][i] for i in range(len(labels)))
    precision, recall, f1 = {}, {}, {}
    for label, i in pos.items():
        predicted_i = sum(row[i] for row in confusion)
        actual_i = sum(confusion[i])
        precision[label] = confusion[i][i] / predicted_i if predicted_i else 0.0
        recall[label] = confusion[i][i] / actual_i if actual_i else 0.0
        pr = precision[label] + recall[label]
        f1[label] = 2 * precision[label] * recall[label] / pr if pr else 0.0
    return EvalMetrics(labels, correct / len(true_labels), precision, recall, f1, confusion)


def evaluate(model: SentimentModel, test_docs: Sequence[LabeledDoc]) -> EvalMetrics:
    index = model.index
    predicted = [predict(model, d.tokens, index=index).label for d in test_docs]
    return confusion_metrics([d.label for d in test_docs], predicted, model.labels)


def parse_external_scores(text: str, rejected: list | None = None) -> list[SentimentPrediction]:
    """Validate JSONL rows ``{tweet_id, negative, neutral, positive}`` from an external model.

    Rows whose scores are negative or do not sum to 1 within 1e-6 are
    rejected (appended to ``rejected`` as ``(line_number, reason)``);
    accepted rows are renormalized.
    """
    out = []

    def reject(number, reason):
        log.warning("external scores line %d rejected: %s", number, reason)
        if rejected is not None:
            rejected.append((number, reason))

    for number, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line, parse_int=str)
            tweet_id = str(row["tweet_id"])
            scores = {label: float(row[label]) for label in LABELS}
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            reject(number, f"malformed row: {exc}")
            continue
        if any(not math.isfinite(v) or v < 0 for v in scores.values()):
            reject(number, "negative or non-finite score")
            continue
        total = math.fsum(scores.values())
        if abs(total - 1.0) > SCORE_TOLERANCE:
            reject(number, f"scores sum to {total}")
            continue
        scores = {label: v / total for label, v in scores.items()}
        out.append(SentimentPrediction(tweet_id, argmax_label(scores), scores))
    return out


def import_external_scores(path, rejected: list | None = None) -> list[SentimentPrediction]:
    with open(path, encoding="utf-8") as fh:
        return parse_external_scores(fh.read(), rejected)


def load_labeled_corpus(path) -> list[tuple[str, str]]:
    """Read ``text,label`` CSV or ``{text, label}`` JSONL; returns (text, label) pairs."""
    with open(path, encoding="utf-8", newline="") as fh:
        content = fh.read()
    if str(path).endswith((".jsonl", ".ndjson")):
        rows = [json.loads(line) for line in content.split("\n") if line.strip()]
    else:
        rows = list(csv.DictReader(io.StringIO(content)))
    pairs = []
    for number, row in enumerate(rows, start=1):
        label = row.get("label")
        if label not in LABELS:
            raise ValidationError(f"row {number}: label must be one of {LABELS}", row=number, label=label)
        pairs.append((row["text"], label))
    return pairs
