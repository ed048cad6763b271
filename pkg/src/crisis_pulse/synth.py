"""Synthetic corpora with known generating structure, for recovery checks."""

from __future__ import annotations

import numpy as np

from .sentiment import LABELS, LabeledDoc


def planted_topics(n_topics=3, words_per_topic=30, n_docs=200, doc_len=50,
                   doc_alpha=0.1, decay=0.8, seed=0):
    """Documents drawn from topics with disjoint vocabularies.

    Topic ``t`` owns words ``t{t}w00 .. t{t}wNN`` with geometrically decaying
    weights, so word ``w00`` is its unambiguous top word. Returns
    ``(docs, topic_words)`` where ``topic_words[t]`` is ranked by true weight.
    """
    rng = np.random.default_rng(seed)
    weights = decay ** np.arange(words_per_topic)
    weights /= weights.sum()
    topic_words = [[f"t{t}w{j:02d}" for j in range(words_per_topic)] for t in range(n_topics)]
    docs = []
    for _ in range(n_docs):
        mix = rng.dirichlet([doc_alpha] * n_topics)
        topics = rng.choice(n_topics, size=doc_len, p=mix)
        docs.append([topic_words[t][rng.choice(words_per_topic, p=weights)] for t in topics])
    return docs, topic_words


def separable_sentiment(n_docs=1000, class_vocab=40, shared_vocab=20, doc_len=12,
                        noise=0.1, seed=0):
    """Labeled docs whose words come from a class-private vocabulary plus shared noise words.

    Each token is a shared noise word with probability ``noise``. Class sizes
    are as equal as ``n_docs`` allows.
    """
    rng = np.random.default_rng(seed)
    private = {lab: [f"{lab[:3]}{j:02d}" for j in range(class_vocab)] for lab in LABELS}
    shared = [f"ortak{j:02d}" for j in range(shared_vocab)]
    docs = []
    for i in range(n_docs):
        label = LABELS[i % len(LABELS)]
        tokens = []
        for _ in range(doc_len):
            if rng.random() < noise:
                tokens.append(shared[rng.integers(shared_vocab)])
            else:
                tokens.append(private[label][rng.integers(class_vocab)])
        docs.append(LabeledDoc(tuple(tokens), label))
    return docs
