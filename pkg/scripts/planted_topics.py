"""Fit LDA to a synthetic corpus with known topics and report how well they come back.

    python3 scripts/planted_topics.py [--topics 3] [--iterations 300] [--seed 0]
"""

import argparse
import itertools

from crisis_pulse.lda import LdaConfig, build_vocabulary, fit_lda, perplexity, top_words
from crisis_pulse.synth import planted_topics


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--topics", type=int, default=3)
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--iterations", type=int, default=300)
    parser.add_argument("--burn-in", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    docs, planted = planted_topics(n_topics=args.topics, n_docs=args.docs, seed=args.seed)
    vocab = build_vocabulary(docs)
    config = LdaConfig(K=args.topics, iterations=args.iterations, burn_in=args.burn_in, seed=args.seed)
    model = fit_lda(docs, vocab, config, trace=True)

    fitted = [[w for w, _ in top_words(model, k, 10)] for k in range(model.K)]
    score, perm = max((min(len(set(fitted[k]) & set(planted[p[k]][:10])) for k in range(model.K)), p)
                      for p in itertools.permutations(range(args.topics)))
    for k, words in enumerate(fitted):
        print(f"topic {k} ~ planted {perm[k]}: {' '.join(words)}")
    print(f"worst top-10 overlap: {score}/10")
    trace = model.perplexity_trace
    print(f"in-sample perplexity: first {trace[0]:.2f}, last {trace[-1]:.2f}, final model {perplexity(model, docs):.2f}")


if __name__ == "__main__":
    main()
