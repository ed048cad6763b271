"""Per-tweet engineered features."""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import asdict, dataclass, fields

from .textprep import CleanTweet, URL_RE, _clean_token, turkish_lower

_MENTION = re.compile(r"(?<!\w)@(\w{1,15})(?!\w)")
_HASHTAG = re.compile(r"(?<!\w)#(\w+)")


@dataclass(frozen=True)
class TweetFeatures:
    tweet_id: str
    mentions: tuple[str, ...]
    hashtags: tuple[str, ...]
    hashtag_count: int
    url_count: int
    raw_word_count: int
    clean_word_count: int
    unique_word_count: int
    stopword_count: int
    avg_word_length: float
    raw_char_count: int
    clean_char_count: int
    word_count_diff: int

    def to_dict(self):
        d = asdict(self)
        d["mentions"] = list(self.mentions)
        d["hashtags"] = list(self.hashtags)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["mentions"] = tuple(d["mentions"])
        d["hashtags"] = tuple(d["hashtags"])
        return cls(**d)


FEATURE_COLUMNS = [f.name for f in fields(TweetFeatures)]


def extract_mentions(raw_text: str) -> list[str]:
    return _MENTION.findall(raw_text)


def extract_hashtags(raw_text: str) -> tuple[list[str], int]:
    tags = [turkish_lower(t) for t in _HASHTAG.findall(raw_text)]
    return tags, len(tags)


def count_urls(raw_text: str) -> int:
    return len(URL_RE.findall(raw_text))


def extract_features(raw, clean: CleanTweet, stopwords) -> TweetFeatures:
    """Compute all features; ``raw`` is a RawTweet or its text."""
    raw_text = raw if isinstance(raw, str) else raw.text
    raw_tokens = raw_text.split()
    stop_hits = sum(1 for t in raw_tokens if _clean_token(t) in stopwords)
    tokens = clean.tokens
    letters = sum(len(t) for t in tokens)
    hashtags, hashtag_count = extract_hashtags(raw_text)
    return TweetFeatures(
        tweet_id=clean.tweet_id,
        mentions=tuple(extract_mentions(raw_text)),
        hashtags=tuple(hashtags),
        hashtag_count=hashtag_count,
        url_count=count_urls(raw_text),
        raw_word_count=len(raw_tokens),
        clean_word_count=len(tokens),
        unique_word_count=len(set(tokens)),
        stopword_count=stop_hits,
        avg_word_length=letters / len(tokens) if tokens else 0.0,
        raw_char_count=len(raw_text),
        clean_char_count=len(clean.clean_text),
        word_count_diff=len(raw_tokens) - len(tokens),
    )


def features_to_csv(rows: list[TweetFeatures]) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FEATURE_COLUMNS)
    for f in rows:
        d = f.to_dict()
        d["mentions"] = " ".join(f.mentions)
        d["hashtags"] = " ".join(f.hashtags)
        d["avg_word_length"] = f"{f.avg_word_length:.6f}"
        writer.writerow([d[c] for c in FEATURE_COLUMNS])
    return buf.getvalue()


def features_to_jsonl(rows: list[TweetFeatures]) -> str:
    return "".join(json.dumps(f.to_dict(), ensure_ascii=False) + "\n" for f in rows)


def features_from_jsonl(text: str) -> list[TweetFeatures]:
    return [TweetFeatures.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]
