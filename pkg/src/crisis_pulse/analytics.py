"""Corpus-level aggregates: frequency rankings, n-grams, link buckets and time series."""

from __future__ import annotations

import csv
import io
import logging
from collections import Counter
from dataclasses import dataclass
from datetime import date, timedelta
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .features import TweetFeatures, extract_hashtags
from .sentiment import LABELS, SentimentPrediction
from .textprep import CleanTweet

log = logging.getLogger(__name__)


def percent(count: int, total: int) -> str:
    """Share as a percentage string with one decimal, rounded half up from the exact ratio."""
    if total == 0:
        return "0.0"
    exact = Decimal(100 * count) / Decimal(total)
    return str(exact.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class FrequencyTable:
    entries: tuple[tuple[str, int], ...]
    total: int

    @classmethod
    def from_counter(cls, counts: Counter) -> FrequencyTable:
        entries = tuple(sorted(((k, c) for k, c in counts.items() if c > 0), key=lambda e: (-e[1], e[0])))
        return cls(entries, sum(c for _, c in entries))

    def as_dict(self) -> dict[str, int]:
        return dict(self.entries)

    def head(self, n: int) -> list[tuple[str, int]]:
        return list(self.entries[:n])

    def rows(self):
        return [{"key": k, "count": c, "percent": percent(c, self.total)} for k, c in self.entries]

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "count", "percent"])
        for row in self.rows():
            writer.writerow([row["key"], row["count"], row["percent"]])
        return buf.getvalue()


@dataclass(frozen=True)
class NgramTable:
    n: int
    entries: tuple[tuple[tuple[str, ...], int], ...]

    def head(self, k: int):
        return list(self.entries[:k])


@dataclass(frozen=True)
class DailySummary:
    date: date
    negative: int
    neutral: int
    positive: int
    total: int
    unscored: int = 0  # tweets on this day without a prediction

    def to_dict(self):
        return {"date": self.date.isoformat(), "negative": self.negative, "neutral": self.neutral,
                "positive": self.positive, "total": self.total, "unscored": self.unscored}


def ngram_counts(docs: Iterable[Sequence[str]], n: int) -> NgramTable:
    if n not in (1, 2, 3):
        raise ValueError("n must be 1, 2 or 3")
    counts = Counter()
    for doc in docs:
        counts.update(tuple(doc[i:i + n]) for i in range(len(doc) - n + 1))
    return NgramTable(n, tuple(sorted(counts.items(), key=lambda e: (-e[1], e[0]))))


def tag_frequency(tweets: Iterable[CleanTweet]) -> FrequencyTable:
    counts = Counter()
    for t in tweets:
        counts.update(extract_hashtags(t.raw_text)[0])
    return FrequencyTable.from_counter(counts)


def mention_frequency(features: Iterable[TweetFeatures]) -> FrequencyTable:
    counts = Counter()
    for f in features:
        counts.update(f.mentions)
    return FrequencyTable.from_counter(counts)


def user_activity(tweets: Iterable[CleanTweet]) -> FrequencyTable:
    return FrequencyTable.from_counter(Counter(t.username for t in tweets))


def link_bucket(url_count: int) -> str:
    return "2+" if url_count >= 2 else str(url_count)


def link_distribution(features: Iterable[TweetFeatures]) -> FrequencyTable:
    return FrequencyTable.from_counter(Counter(link_bucket(f.url_count) for f in features))


def _days(start: date, end: date) -> list[date]:
    return [start + timedelta(days=i) for i in range((end - start).days + 1)]


@dataclass(frozen=True)
class TemporalResult:
    monthly: FrequencyTable
    hourly: FrequencyTable
    daily: list[DailySummary]
    unknown_predictions: int
    unscored_tweets: int


def temporal_histograms(tweets: Sequence[CleanTweet], predictions: Iterable[SentimentPrediction],
                        date_from: date | None = None, date_to: date | None = None) -> TemporalResult:
    """Monthly and hourly counts plus a gap-free daily sentiment series.

    The daily series spans ``date_from..date_to`` (defaulting to the tweet
    date range); tweets outside it still count in the monthly and hourly
    tables. Predictions for unknown tweet ids are tallied and ignored.
    """
    ids = {t.tweet_id for t in tweets}
    label_of = {}
    unknown = 0
    for p in predictions:
        if p.tweet_id in ids:
            label_of[p.tweet_id] = p.label
        else:
            unknown += 1
    if unknown:
        log.warning("%d predictions reference unknown tweet ids", unknown)

    monthly = Counter(t.timestamp.strftime("%Y-%m") for t in tweets)
    hourly = Counter(t.timestamp.strftime("%H") for t in tweets)
    per_day: dict[date, Counter] = {}
    for t in tweets:
        per_day.setdefault(t.timestamp.date(), Counter())[label_of.get(t.tweet_id, "unscored")] += 1
    if tweets and date_from is None:
        date_from = min(per_day)
    if tweets and date_to is None:
        date_to = max(per_day)
    daily = []
    if date_from is not None and date_to is not None:
        for day in _days(date_from, date_to):
            c = per_day.get(day, Counter())
            daily.append(DailySummary(day, c["negative"], c["neutral"], c["positive"],
                                      sum(c.values()), c["unscored"]))
    unscored = sum(1 for t in tweets if t.tweet_id not in label_of)
    return TemporalResult(FrequencyTable.from_counter(monthly), FrequencyTable.from_counter(hourly),
                          daily, unknown, unscored)


def daily_to_csv(daily: Sequence[DailySummary]) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["date", *LABELS, "total"])
    for row in daily:
        writer.writerow([row.date.isoformat(), row.negative, row.neutral, row.positive, row.total])
    return buf.getvalue()
