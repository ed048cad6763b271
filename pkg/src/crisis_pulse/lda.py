"""LDA topic model fitted by collapsed Gibbs sampling.

Randomness comes from numpy's PCG64 generator seeded with the config seed:
one ``integers(0, K)`` draw per token for the initial assignment, then one
``random()`` draw per token per sweep, consumed in corpus order (documents
in input order, tokens in position order). Topic ``k`` is chosen as the
first index whose running sum of unnormalized conditionals exceeds
``u * total``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import _gibbs
from .errors import ValidationError

log = logging.getLogger(__name__)

PHI_DECIMALS = 10


@dataclass(frozen=True)
class Vocabulary:
    words: tuple[str, ...]
    index: dict[str, int]
    doc_freq: dict[str, int]

    @classmethod
    def from_words(cls, words, doc_freq=None):
        words = tuple(words)
        return cls(words, {w: i for i, w in enumerate(words)}, dict(doc_freq or {}))

    def __len__(self):
        return len(self.words)

    def encode(self, tokens) -> list[int]:
        return [self.index[t] for t in tokens if t in self.index]


def build_vocabulary(docs: Sequence[Sequence[str]], min_df: int = 1,
                     max_df_ratio: float = 1.0) -> Vocabulary:
    """Keep words whose document frequency lies in [min_df, max_df_ratio * D]."""
    if min_df < 1 or not 0 < max_df_ratio <= 1:
        raise ValidationError("need min_df >= 1 and 0 < max_df_ratio <= 1",
                              min_df=min_df, max_df_ratio=max_df_ratio)
    df = Counter()
    for doc in docs:
        df.update(set(doc))
    ceiling = max_df_ratio * len(docs)
    kept = sorted((w for w, c in df.items() if min_df <= c <= ceiling), key=lambda w: (-df[w], w))
    if not kept:
        raise ValidationError("vocabulary is empty; lower min_df or raise max_df_ratio",
                              min_df=min_df, max_df_ratio=max_df_ratio)
    return Vocabulary.from_words(kept, {w: df[w] for w in kept})


@dataclass(frozen=True)
class LdaConfig:
    K: int = 15
    alpha: float | None = None  # None means 50 / K
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.alpha is None:
            object.__setattr__(self, "alpha", 50.0 / self.K if self.K >= 1 else 0.0)
        if self.K < 1 or self.alpha <= 0 or self.beta <= 0 or self.iterations < 1:
            raise ValidationError("invalid LDA config: need K >= 1, alpha > 0, beta > 0, iterations >= 1",
                                  **asdict(self))
        if not 0 <= self.burn_in < self.iterations:
            raise ValidationError("burn_in must lie in [0, iterations)", burn_in=self.burn_in)


@dataclass
class LdaModel:
    config: LdaConfig
    vocab: Vocabulary
    phi: np.ndarray
    theta: np.ndarray | None = None
    z: list[np.ndarray] = field(default_factory=list)
    n_dk: np.ndarray | None = None
    n_kw: np.ndarray | None = None
    n_k: np.ndarray | None = None
    doc_ids: list[int] = field(default_factory=list)  # positions in the input doc list
    skipped_docs: list[int] = field(default_factory=list)
    perplexity_trace: list[float] = field(default_factory=list)

    @property
    def K(self):
        return self.config.K


def gibbs_conditional(n_dk, n_kw, n_k, d: int, w: int, alpha: float, beta: float) -> np.ndarray:
    """Topic distribution for one token whose own assignment is already removed from the counts."""
    n_dk = np.atleast_2d(np.asarray(n_dk, dtype=float))
    n_kw = np.asarray(n_kw, dtype=float)
    n_k = np.asarray(n_k, dtype=float)
    V = n_kw.shape[1]
    weights = (n_dk[d] + alpha) * (n_kw[:, w] + beta) / (n_k + V * beta)
    return weights / weights.sum()


def _flatten(encoded):
    words = np.fromiter((w for doc in encoded for w in doc), dtype=np.int64)
    docs = np.repeat(np.arange(len(encoded), dtype=np.int64), [len(d) for d in encoded])
    return words, docs


def _check_counts(words, docs, z, doc_len, n_dk, n_kw, n_k):
    if not np.array_equal(n_dk.sum(axis=1), doc_len):
        raise AssertionError("per-document topic counts do not sum to document length")
    if not np.array_equal(n_kw.sum(axis=1), n_k):
        raise AssertionError("topic-word counts do not sum to topic totals")
    rebuilt = np.zeros_like(n_kw)
    np.add.at(rebuilt, (z, words), 1)
    if not np.array_equal(rebuilt, n_kw):
        raise AssertionError("topic-word counts disagree with assignments")
    rebuilt = np.zeros_like(n_dk)
    np.add.at(rebuilt, (docs, z), 1)
    if not np.array_equal(rebuilt, n_dk):
        raise AssertionError("document-topic counts disagree with assignments")


def fit_lda(docs: Sequence[Sequence[str]], vocab: Vocabulary, config: LdaConfig,
            check_invariants: bool = False, trace: bool = False) -> LdaModel:
    """Fit LDA to token lists.

    Documents with no in-vocabulary token are skipped and listed in
    ``skipped_docs``. With ``check_invariants`` the count identities are
    verified after every sweep; with ``trace`` the in-sample perplexity is
    recorded after every sweep past ``burn_in``.
    """
    if len(vocab) == 0:
        raise ValidationError("vocabulary is empty")
    K, V = config.K, len(vocab)
    encoded, doc_ids, skipped = [], [], []
    for i, doc in enumerate(docs):
        ids = vocab.encode(doc)
        if ids:
            encoded.append(ids)
            doc_ids.append(i)
        else:
            skipped.append(i)
    if skipped:
        log.info("skipping %d documents with no in-vocabulary tokens", len(skipped))
    words, doc_index = _flatten(encoded)
    n_tokens = words.shape[0]
    if n_tokens == 0:
        raise ValidationError("no in-vocabulary tokens to fit")
    if K > n_tokens:
        log.warning("K=%d exceeds total token count %d", K, n_tokens)

    rng = np.random.Generator(np.random.PCG64(config.seed % 2**64))
    z = rng.integers(0, K, size=n_tokens).astype(np.int64)
    D = len(encoded)
    doc_len = np.array([len(d) for d in encoded], dtype=np.int64)
    n_dk = np.zeros((D, K), dtype=np.int64)
    n_kw = np.zeros((K, V), dtype=np.int64)
    np.add.at(n_dk, (doc_index, z), 1)
    np.add.at(n_kw, (z, words), 1)
    n_k = n_kw.sum(axis=1)

    alpha, beta = float(config.alpha), float(config.beta)
    perplexities = []
    for sweep in range(config.iterations):
        _gibbs.sweep(words, doc_index, z, n_dk, n_kw, n_k, alpha, beta, rng.random(n_tokens))
        if check_invariants:
            _check_counts(words, doc_index, z, doc_len, n_dk, n_kw, n_k)
        if trace and sweep >= config.burn_in:
            ll = _gibbs.log_likelihood(words, doc_index, doc_len, n_dk, n_kw, n_k, alpha, beta)
            perplexities.append(math.exp(-ll / n_tokens))

    phi = (n_kw + beta) / (n_k[:, None] + V * beta)
    theta = (n_dk + alpha) / (doc_len[:, None] + K * alpha)
    bounds = np.cumsum(doc_len)[:-1]
    return LdaModel(config, vocab, phi, theta, np.split(z, bounds), n_dk, n_kw, n_k,
                    doc_ids, skipped, perplexities)


def top_words(model: LdaModel, k: int, n: int) -> list[tuple[str, float]]:
    if not 0 <= k < model.phi.shape[0]:
        raise IndexError(f"topic {k} out of range 0..{model.phi.shape[0] - 1}")
    row = model.phi[k]
    order = sorted(range(len(model.vocab)), key=lambda w: (-row[w], model.vocab.words[w]))
    return [(model.vocab.words[w], float(row[w])) for w in order[:n]]


def perplexity(model: LdaModel, docs: Sequence[Sequence[str]]) -> float:
    """Perplexity of the documents the model was fitted on.

    ``docs`` is the list originally passed to ``fit_lda``; out-of-vocabulary
    tokens are ignored and documents without a fitted topic mixture are
    skipped.
    """
    row_of = {doc_id: row for row, doc_id in enumerate(model.doc_ids)}
    log_total = []
    skipped = 0
    for i, doc in enumerate(docs):
        ids = model.vocab.encode(doc)
        if not ids or i not in row_of:
            skipped += 1
            continue
        mix = model.theta[row_of[i]] @ model.phi[:, ids]
        log_total.extend(np.log(mix).tolist())
    if skipped:
        log.info("perplexity skipped %d documents", skipped)
    if not log_total:
        raise ValidationError("no scorable tokens for perplexity")
    return math.exp(-math.fsum(log_total) / len(log_total))


def _fixed(values) -> str:
    return "[" + ",".join(f"{v:.{PHI_DECIMALS}f}" for v in values) + "]"


def model_to_json(model: LdaModel, doc_labels: Sequence[str] | None = None,
                  extra: dict | None = None) -> str:
    """Serialize config, vocabulary and phi; phi entries use 10 fixed decimals."""
    head = {
        "config": asdict(model.config),
        "vocabulary": list(model.vocab.words),
        "doc_freq": [model.vocab.doc_freq.get(w, 0) for w in model.vocab.words],
    }
    if doc_labels is not None:
        head["documents"] = [doc_labels[i] for i in model.doc_ids]
        head["skipped_documents"] = [doc_labels[i] for i in model.skipped_docs]
    head.update(extra or {})
    body = json.dumps(head, ensure_ascii=False, indent=1)
    phi_rows = ",\n  ".join(_fixed(row) for row in model.phi)
    return body[:-2] + ',\n "phi": [\n  ' + phi_rows + "\n ]\n}\n"


def model_from_json(text: str) -> LdaModel:
    data = json.loads(text)
    vocab = Vocabulary.from_words(data["vocabulary"], dict(zip(data["vocabulary"], data["doc_freq"])))
    return LdaModel(LdaConfig(**data["config"]), vocab, np.array(data["phi"], dtype=float))


def save_assignments(model: LdaModel, path) -> None:
    """Binary sidecar: concatenated topic ids as little-endian int32 (.npy)."""
    flat = np.concatenate(model.z) if model.z else np.zeros(0)
    np.save(path, flat.astype("<i4"))


def topic_report_csv(model: LdaModel, n: int = 10) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["topic_id", "rank", "word", "probability"])
    for k in range(model.phi.shape[0]):
        for rank, (word, p) in enumerate(top_words(model, k, n), start=1):
            writer.writerow([k, rank, word, f"{p:.{PHI_DECIMALS}f}"])
    return buf.getvalue()
