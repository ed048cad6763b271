"""``crisis-pulse`` command line: one subcommand per pipeline stage.

Each stage reads the previous stage's files from the output directory and
writes only its own. Exit codes: 0 success, 1 validation failure (error JSON
on stderr), 2 missing prerequisite file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from collections import Counter
from pathlib import Path

from . import analytics, lda, sentiment
from .config import RunConfig, load_config, resolve_config_path
from .errors import MissingPrerequisite, ValidationError
from .features import extract_features, features_from_jsonl, features_to_csv, features_to_jsonl
from .ingest import RawTweet, filter_by_manifest, format_for, load_tag_manifest, parse_records
from .svg import render_svg_bar
from .textprep import CleanTweet, default_stopwords, default_suffixes, load_wordlist, preprocess, tokens_for

log = logging.getLogger("crisis_pulse")

TOP_N = 20
NGRAM_TOP = 20


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=1) + "\n"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _jsonl(rows) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows)


def _require(path: Path) -> Path:
    if not path.is_file():
        raise MissingPrerequisite(path)
    return path


def _read_jsonl(path: Path) -> list[dict]:
    with open(_require(path), encoding="utf-8") as fh:
        return [json.loads(line) for line in fh.read().split("\n") if line.strip()]


def _stopwords(cfg: RunConfig):
    return frozenset(load_wordlist(cfg.stopwords)) if cfg.stopwords else default_stopwords()


def _suffixes(cfg: RunConfig):
    return tuple(load_wordlist(cfg.suffixes)) if cfg.suffixes else default_suffixes()


def _load_clean(cfg: RunConfig) -> list[CleanTweet]:
    return [CleanTweet.from_dict(d) for d in _read_jsonl(cfg.out / "clean.jsonl")]


def cmd_ingest(cfg: RunConfig) -> list[Path]:
    manifest = load_tag_manifest(_require(cfg.manifest))
    records, errors = [], []
    for path in cfg.inputs:
        with open(_require(path), "rb") as fh:
            recs, errs = parse_records(fh, format_for(path))
        records += recs
        errors += [{"file": path.name, **e.to_dict()} for e in errs]
    tally = Counter()
    kept = filter_by_manifest(records, manifest, tally)
    report = {
        "parsed": len(records),
        "record_errors": dict(sorted(Counter(e["reason"] for e in errors).items())),
        "filter_skips": dict(sorted(tally.items())),
        "kept": len(kept),
    }
    outputs = [cfg.out / "raw.jsonl", cfg.out / "ingest_errors.jsonl", cfg.out / "ingest_report.json"]
    _write(outputs[0], _jsonl(r.to_dict() for r in kept))
    _write(outputs[1], _jsonl(errors))
    _write(outputs[2], _dump(report))
    return outputs


def cmd_clean(cfg: RunConfig) -> list[Path]:
    records = [RawTweet(d["hashtag"], d["datetime"], d["tweet_id"], d["text"], d["username"])
               for d in _read_jsonl(cfg.out / "raw.jsonl")]
    failures = []
    tweets, report = preprocess(records, _stopwords(cfg), _suffixes(cfg), failures)
    outputs = [cfg.out / "clean.jsonl", cfg.out / "clean_report.json"]
    _write(outputs[0], _jsonl(t.to_dict() for t in tweets))
    _write(outputs[1], _dump({**report.__dict__, "datetime_failures": [r.tweet_id for r in failures]}))
    return outputs


def cmd_features(cfg: RunConfig) -> list[Path]:
    tweets = _load_clean(cfg)
    stopwords = _stopwords(cfg)
    rows = [extract_features(t.raw_text, t, stopwords) for t in tweets]
    outputs = [cfg.out / "features.csv", cfg.out / "features.jsonl"]
    _write(outputs[0], features_to_csv(rows))
    _write(outputs[1], features_to_jsonl(rows))
    return outputs


def cmd_topics(cfg: RunConfig) -> list[Path]:
    tweets = _load_clean(cfg)
    s = cfg.lda
    docs = [list(t.tokens) for t in tweets]
    vocab = lda.build_vocabulary(docs, s.min_df, s.max_df_ratio)
    config = lda.LdaConfig(K=s.K, alpha=s.alpha, beta=s.beta, iterations=s.iterations,
                           burn_in=s.burn_in, seed=cfg.seed)
    model = lda.fit_lda(docs, vocab, config)
    shares = [round(v, 10) for v in (model.n_k / model.n_k.sum()).tolist()]
    text = lda.model_to_json(model, [t.tweet_id for t in tweets], {"topic_shares": shares})
    outputs = [cfg.out / "topics.json", cfg.out / "topics.csv"]
    _write(outputs[0], text)
    _write(outputs[1], lda.topic_report_csv(model, s.top_n))
    if s.save_assignments:
        lda.save_assignments(model, cfg.out / "topics_assignments.npy")
        outputs.append(cfg.out / "topics_assignments.npy")
    return outputs


def cmd_sentiment(cfg: RunConfig) -> list[Path]:
    tweets = _load_clean(cfg)
    s = cfg.sentiment
    outputs = []
    report: dict = {"mode": s.mode}
    if s.mode == "import":
        rejected = []
        imported = sentiment.import_external_scores(_require(s.scores), rejected)
        known = {t.tweet_id for t in tweets}
        by_id = {p.tweet_id: p for p in imported if p.tweet_id in known}
        report["rejected_rows"] = [{"line_number": n, "reason": r} for n, r in rejected]
        report["unknown_tweet_ids"] = sum(1 for p in imported if p.tweet_id not in known)
        if report["unknown_tweet_ids"]:
            log.warning("%d imported scores reference unknown tweet ids", report["unknown_tweet_ids"])
        predictions = [by_id[t.tweet_id] for t in tweets if t.tweet_id in by_id]
    else:
        if s.mode == "train":
            stopwords, suffixes = _stopwords(cfg), _suffixes(cfg)
            docs, empty = [], 0
            for text, label in sentiment.load_labeled_corpus(_require(s.labeled)):
                tokens = tuple(tokens_for(text, stopwords, suffixes))
                if tokens:
                    docs.append(sentiment.LabeledDoc(tokens, label))
                else:
                    empty += 1
            train_docs, test_docs = sentiment.split_train_test(docs, s.train_ratio, cfg.seed)
            model = sentiment.train(train_docs, s.smoothing)
            metrics = sentiment.evaluate(model, test_docs)
            report.update(train_size=len(train_docs), test_size=len(test_docs),
                          empty_docs_skipped=empty, evaluation=metrics.to_dict())
            outputs.append(cfg.out / "sentiment_model.json")
            _write(outputs[-1], model.to_json())
        else:
            model = sentiment.SentimentModel.from_json(_require(s.model).read_text("utf-8"))
        predictions = sentiment.predict_many(model, [(t.tweet_id, t.tokens) for t in tweets])
    report["predicted"] = len(predictions)
    report["label_counts"] = {lab: sum(1 for p in predictions if p.label == lab) for lab in sentiment.LABELS}
    outputs += [cfg.out / "sentiment.jsonl", cfg.out / "sentiment_report.json"]
    _write(cfg.out / "sentiment.jsonl", _jsonl(p.to_dict() for p in predictions))
    _write(cfg.out / "sentiment_report.json", _dump(report))
    return outputs


def _prediction(d) -> sentiment.SentimentPrediction:
    return sentiment.SentimentPrediction(d["tweet_id"], d["label"], {lab: d[lab] for lab in sentiment.LABELS})


def cmd_report(cfg: RunConfig) -> list[Path]:
    manifest = load_tag_manifest(_require(cfg.manifest))
    tweets = _load_clean(cfg)
    feats = features_from_jsonl(_require(cfg.out / "features.jsonl").read_text("utf-8"))
    topics_text = _require(cfg.out / "topics.json").read_text("utf-8")
    topics = json.loads(topics_text)
    predictions = [_prediction(d) for d in _read_jsonl(cfg.out / "sentiment.jsonl")]
    prep = json.loads(_require(cfg.out / "clean_report.json").read_text("utf-8"))
    ingest = json.loads(_require(cfg.out / "ingest_report.json").read_text("utf-8"))

    tags = analytics.tag_frequency(tweets)
    mentions = analytics.mention_frequency(feats)
    users = analytics.user_activity(tweets)
    links = analytics.link_distribution(feats)
    temporal = analytics.temporal_histograms(tweets, predictions, manifest.date_from, manifest.date_to)
    docs = [t.tokens for t in tweets]
    ngrams = {n: analytics.ngram_counts(docs, n) for n in (1, 2, 3)}

    model = lda.model_from_json(topics_text)
    top_n = cfg.lda.top_n
    topic_words = [[{"word": w, "probability": round(p, 10)} for w, p in lda.top_words(model, k, top_n)]
                   for k in range(model.K)]

    out = cfg.out
    tables = {"tags": tags, "mentions": mentions, "users": users, "links": links,
              "monthly": temporal.monthly, "hourly": temporal.hourly}
    outputs = []
    for name, table in tables.items():
        outputs.append(out / "tables" / f"{name}.csv")
        _write(outputs[-1], table.to_csv())
    outputs.append(out / "daily.csv")
    _write(outputs[-1], analytics.daily_to_csv(temporal.daily))

    charts = out / "charts"
    daily_series = {lab: [(d.date.strftime("%m-%d"), getattr(d, lab)) for d in temporal.daily]
                    for lab in sentiment.LABELS}
    outputs.append(render_svg_bar(daily_series, "Daily tweets by sentiment", charts / "daily_sentiment.svg"))
    if tags.entries:
        outputs.append(render_svg_bar(tags.head(TOP_N), "Top hashtags", charts / "top_hashtags.svg"))
    if mentions.entries:
        outputs.append(render_svg_bar(mentions.head(TOP_N), "Most mentioned accounts", charts / "top_mentions.svg"))
    panel = [(f"T{k}: " + " ".join(e["word"] for e in words[:3]), topics["topic_shares"][k])
             for k, words in enumerate(topic_words)]
    outputs.append(render_svg_bar(panel, "Topics by token share", charts / "topic_words.svg"))

    report = {
        "ingest": ingest,
        "preprocessing": prep,
        "tweet_count": len(tweets),
        "manifest": {"tags": list(manifest.tags), "date_from": manifest.date_from.isoformat(),
                     "date_to": manifest.date_to.isoformat()},
        "link_distribution": links.rows(),
        "tags": tags.rows()[:TOP_N],
        "mentions": mentions.rows()[:TOP_N],
        "top_users": users.rows()[:TOP_N],
        "monthly": temporal.monthly.rows(),
        "hourly": temporal.hourly.rows(),
        "daily": [d.to_dict() for d in temporal.daily],
        "unknown_predictions": temporal.unknown_predictions,
        "unscored_tweets": temporal.unscored_tweets,
        "ngrams": {str(n): [{"ngram": " ".join(g), "count": c} for g, c in table.head(NGRAM_TOP)]
                   for n, table in ngrams.items()},
        "topics": [{"topic_id": k, "share": topics["topic_shares"][k], "top_words": words}
                   for k, words in enumerate(topic_words)],
    }
    report_path = out / "report.json"
    artifacts = sorted({p.relative_to(out).as_posix() for p in out.rglob("*") if p.is_file()}
                       | {p.relative_to(out).as_posix() for p in outputs} | {"report.json"})
    report["artifacts"] = artifacts
    _write(report_path, _dump(report))
    return outputs + [report_path]


STAGES = {
    "ingest": cmd_ingest,
    "clean": cmd_clean,
    "features": cmd_features,
    "topics": cmd_topics,
    "sentiment": cmd_sentiment,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crisis-pulse", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=[*STAGES, "run"],
                        help="pipeline stage to run; 'run' executes all stages in order")
    parser.add_argument("--config", help="TOML run config (default: $CRISIS_PULSE_CONFIG)")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="override the output directory")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    stages = list(STAGES) if args.subcommand == "run" else [args.subcommand]
    timings = {}
    try:
        cfg = load_config(resolve_config_path(args.config), args.seed, args.out)
        for name in stages:
            start = time.perf_counter()
            STAGES[name](cfg)
            timings[name] = round((time.perf_counter() - start) * 1000, 1)
    except MissingPrerequisite as exc:
        print(json.dumps({"error": "missing_prerequisite", "path": exc.path}), file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(exc.to_json(), file=sys.stderr)
        return 1
    # timings go to stderr so output files stay byte-identical across runs
    print(json.dumps({"timings_ms": timings}), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
