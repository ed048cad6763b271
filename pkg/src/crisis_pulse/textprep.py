"""Pre-processing: dedup, empty-text removal, timestamp normalization, text cleaning."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import ValidationError

if TYPE_CHECKING:
    from .ingest import RawTweet

LOCAL_TZ = timezone(timedelta(hours=3))
TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"
MIN_STEM = 2
MAX_STRIP_PASSES = 2

URL_RE = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
MENTION_RE = re.compile(r"(?<!\w)@\w+")

_NAIVE = re.compile(r"\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}")
_ISO_OFFSET = re.compile(r"\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}:\d{2}(?:\.\d{1,6})?(?:Z|[+-]\d{2}:\d{2})")


class DatetimeParseError(ValidationError):
    def __init__(self, raw):
        super().__init__(f"unrecognized datetime layout: {raw!r}", raw=raw)
        self.raw = raw


@dataclass(frozen=True)
class CleanTweet:
    tweet_id: str
    timestamp: datetime
    hashtag: str
    username: str
    raw_text: str
    clean_text: str
    tokens: tuple[str, ...]

    def to_dict(self):
        return {
            "tweet_id": self.tweet_id,
            "timestamp": format_timestamp(self.timestamp),
            "hashtag": self.hashtag,
            "username": self.username,
            "raw_text": self.raw_text,
            "clean_text": self.clean_text,
            "tokens": list(self.tokens),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["tweet_id"], parse_timestamp(d["timestamp"]), d["hashtag"],
                   d["username"], d["raw_text"], d["clean_text"], tuple(d["tokens"]))


@dataclass(frozen=True)
class PrepReport:
    input_count: int
    duplicate_count: int
    empty_text_count: int
    datetime_failure_count: int
    output_count: int

    def __post_init__(self):
        expected = (self.input_count - self.duplicate_count
                    - self.empty_text_count - self.datetime_failure_count)
        if expected != self.output_count:
            raise ValueError(f"inconsistent report: {self}")


def turkish_lower(text: str) -> str:
    return text.replace("I", "ı").replace("İ", "i").lower()


def load_wordlist(path=None, default: str = "stopwords_tr.txt") -> list[str]:
    """Read a one-entry-per-line UTF-8 table; ``#`` lines are comments."""
    if path is None:
        content = resources.files("crisis_pulse").joinpath("data", default).read_text("utf-8")
    else:
        content = Path(path).read_text("utf-8")
    entries = []
    for line in content.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return entries


def default_stopwords() -> frozenset[str]:
    return frozenset(load_wordlist())


def default_suffixes() -> tuple[str, ...]:
    return tuple(load_wordlist(default="suffixes_tr.txt"))


def dedupe(records: Sequence[RawTweet]) -> tuple[list[RawTweet], int]:
    seen = set()
    kept = []
    for record in records:
        if record.tweet_id in seen:
            continue
        seen.add(record.tweet_id)
        kept.append(record)
    return kept, len(records) - len(kept)


def drop_missing_text(records: Sequence[RawTweet]) -> tuple[list[RawTweet], int]:
    kept = [r for r in records if r.text.strip()]
    return kept, len(records) - len(kept)


def normalize_datetime(datetime_raw: str) -> datetime:
    """Parse an exported timestamp into +03:00 local time at second precision.

    Naive ``YYYY-MM-DD HH:MM:SS`` values are taken to be local time already.
    """
    s = datetime_raw.strip()
    try:
        if _NAIVE.fullmatch(s):
            parsed = datetime.strptime(s, TIMESTAMP_FORMAT).replace(tzinfo=LOCAL_TZ)
        elif _ISO_OFFSET.fullmatch(s):
            # fromisoformat on 3.10 rejects a trailing Z
            parsed = datetime.fromisoformat(s[:-1] + "+00:00" if s.endswith("Z") else s)
        else:
            raise DatetimeParseError(datetime_raw)
    except ValueError as exc:
        if isinstance(exc, DatetimeParseError):
            raise
        raise DatetimeParseError(datetime_raw) from None
    return parsed.astimezone(LOCAL_TZ).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(LOCAL_TZ).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(s: str) -> datetime:
    return datetime.strptime(s, TIMESTAMP_FORMAT).replace(tzinfo=LOCAL_TZ)


def _is_word_char(ch: str) -> bool:
    cat = unicodedata.category(ch)
    return cat[0] == "L" or cat == "Nd"


def _clean_token(token: str) -> str:
    # NFKC folds styled letters (math bold, fullwidth) into plain ones; repeat
    # until stable so the result is a fixpoint of cleaning.
    for _ in range(4):
        folded = turkish_lower(unicodedata.normalize("NFKC", token))
        folded = "".join(ch for ch in folded if _is_word_char(ch))
        if folded == token:
            break
        token = folded
    return token


def clean_text(raw: str) -> str:
    """Strip links, mentions, emoji and punctuation; lowercase with Turkish rules.

    Hashtags keep their word. Symbols inside a word are deleted rather than
    turned into separators, so cleaning never produces more words than the
    raw text had.
    """
    text = URL_RE.sub("", raw)
    text = MENTION_RE.sub("", text)
    words = (_clean_token(w) for w in text.split())
    return " ".join(w for w in words if w)


def tokenize(text: str) -> list[str]:
    return text.split()


def remove_stopwords(tokens: Iterable[str], stopwords) -> list[str]:
    return [t for t in tokens if t not in stopwords]


def strip_suffixes(token: str, suffix_table: Sequence[str]) -> str:
    """Remove the longest matching suffix, at most twice, keeping a stem of two letters."""
    ordered = sorted(suffix_table, key=len, reverse=True)
    for _ in range(MAX_STRIP_PASSES):
        for suffix in ordered:
            if token.endswith(suffix) and len(token) - len(suffix) >= MIN_STEM:
                token = token[: -len(suffix)]
                break
        else:
            break
    return token


def tokens_for(raw_text: str, stopwords, suffixes) -> list[str]:
    tokens = remove_stopwords(tokenize(clean_text(raw_text)), stopwords)
    return [strip_suffixes(t, suffixes) for t in tokens]


def preprocess(records: Sequence[RawTweet], stopwords=None, suffixes=None,
               failures: list | None = None) -> tuple[list[CleanTweet], PrepReport]:
    """Run dedup, empty-text removal, timestamp normalization and cleaning.

    Output is ordered by (timestamp, numeric tweet id). Records whose timestamp
    cannot be parsed are excluded; they are appended to ``failures`` if given.
    """
    stopwords = default_stopwords() if stopwords is None else stopwords
    suffixes = default_suffixes() if suffixes is None else suffixes
    unique, dup_count = dedupe(records)
    present, empty_count = drop_missing_text(unique)
    out = []
    bad_dates = 0
    for record in present:
        try:
            ts = normalize_datetime(record.datetime_raw)
        except DatetimeParseError:
            bad_dates += 1
            if failures is not None:
                failures.append(record)
            continue
        tokens = tuple(tokens_for(record.text, stopwords, suffixes))
        out.append(CleanTweet(record.tweet_id, ts, record.hashtag, record.username,
                              record.text, " ".join(tokens), tokens))
    out.sort(key=lambda t: (t.timestamp, int(t.tweet_id)))
    report = PrepReport(len(records), dup_count, empty_count, bad_dates, len(out))
    return out, report
