"""Stratified 90/10 train-and-evaluate run of the naive Bayes classifier.

Uses a synthetic separable corpus by default, or a labeled CSV/JSONL file.

    python3 scripts/sentiment_protocol.py [--labeled tests/fixtures/labeled.csv] [--seed 0]
"""

import argparse
import json

from crisis_pulse.sentiment import LabeledDoc, evaluate, load_labeled_corpus, split_train_test, train
from crisis_pulse.synth import separable_sentiment
from crisis_pulse.textprep import default_stopwords, default_suffixes, tokens_for


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--labeled", help="text,label file; omit for the synthetic corpus")
    parser.add_argument("--docs", type=int, default=1000)
    parser.add_argument("--noise", type=float, default=0.1)
    parser.add_argument("--train-ratio", type=float, default=0.9)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if args.labeled:
        stop, suffixes = default_stopwords(), default_suffixes()
        docs = [LabeledDoc(tuple(tokens_for(text, stop, suffixes)), label)
                for text, label in load_labeled_corpus(args.labeled)]
    else:
        docs = separable_sentiment(n_docs=args.docs, noise=args.noise, seed=args.seed)
    train_docs, test_docs = split_train_test(docs, args.train_ratio, args.seed)
    metrics = evaluate(train(train_docs), test_docs)
    print(f"train {len(train_docs)}, test {len(test_docs)}, accuracy {metrics.accuracy:.4f}")
    print(json.dumps(metrics.to_dict(), indent=1))


if __name__ == "__main__":
    main()
