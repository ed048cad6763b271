"""Parsing and validation of exported tweet records and the tag manifest."""

from __future__ import annotations

import csv
import io
import json
import re
from collections import Counter
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import BinaryIO, Iterable

import tomli

from .errors import ValidationError
from .textprep import DatetimeParseError, normalize_datetime, turkish_lower

FIELDS = ("hashtag", "datetime", "tweet_id", "text", "username")

_DIGITS = re.compile(r"[0-9]+")
_SURROGATE = re.compile("[\udc80-\udcff]")


@dataclass(frozen=True)
class RawTweet:
    hashtag: str
    datetime_raw: str
    tweet_id: str
    text: str
    username: str

    def to_dict(self):
        return {
            "hashtag": self.hashtag,
            "datetime": self.datetime_raw,
            "tweet_id": self.tweet_id,
            "text": self.text,
            "username": self.username,
        }


@dataclass(frozen=True)
class RecordError:
    line_number: int
    reason: str  # missing_field | bad_id | bad_row
    detail: str

    def to_dict(self):
        return {"line_number": self.line_number, "reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class TagManifest:
    tags: tuple[str, ...]
    date_from: date
    date_to: date

    def __post_init__(self):
        if len(set(self.tags)) != len(self.tags):
            raise ValidationError("duplicate tags in manifest")
        if self.date_from > self.date_to:
            raise ValidationError(
                "manifest date range is inverted",
                date_from=self.date_from.isoformat(), date_to=self.date_to.isoformat())


def normalize_tag(tag: str) -> str:
    return turkish_lower(tag.strip().lstrip("#"))


def tag_key(tag: str) -> str:
    """Matching key: ASCII-typed tags ("IZMIR") often stand for dotted letters."""
    return normalize_tag(tag).replace("ı", "i")


def _validate(values: dict, line_number: int) -> RawTweet | RecordError:
    for key in FIELDS:
        if key not in values or values[key] is None:
            return RecordError(line_number, "missing_field", f"absent field {key!r}")
        if not isinstance(values[key], str):
            return RecordError(line_number, "bad_row", f"field {key!r} is not a string")
        if "\x00" in values[key]:
            return RecordError(line_number, "bad_row", f"field {key!r} contains a NUL character")
    tweet_id = values["tweet_id"]
    username = values["username"]
    if username.startswith("@"):
        username = username[1:]
    if not tweet_id:
        return RecordError(line_number, "missing_field", "empty tweet_id")
    if not username.strip():
        return RecordError(line_number, "missing_field", "empty username")
    if not _DIGITS.fullmatch(tweet_id):
        return RecordError(line_number, "bad_id", f"tweet_id {tweet_id!r} is not a digit string")
    return RawTweet(values["hashtag"], values["datetime"], tweet_id, values["text"], username)


def _parse_jsonl(text: str):
    records, errors = [], []
    # split on "\n" only: str.splitlines would also break on U+2028 inside strings
    for number, line in enumerate(text.split("\n"), start=1):
        line = line.removesuffix("\r")
        if not line.strip():
            continue
        if _SURROGATE.search(line):
            errors.append(RecordError(number, "bad_row", "line is not valid UTF-8"))
            continue
        try:
            # integers stay as digit strings so 64-bit ids never pass through a float
            obj = json.loads(line, parse_int=str)
        except json.JSONDecodeError as exc:
            errors.append(RecordError(number, "bad_row", f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            errors.append(RecordError(number, "bad_row", "line is not a JSON object"))
            continue
        if isinstance(obj.get("tweet_id"), float):
            errors.append(RecordError(number, "bad_id", f"tweet_id {obj['tweet_id']!r} is not a digit string"))
            continue
        result = _validate(obj, number)
        (records if isinstance(result, RawTweet) else errors).append(result)
    return records, errors


def _parse_csv(text: str):
    records, errors = [], []
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        return records, errors
    if tuple(header) != FIELDS:
        raise ValidationError("CSV header must be exactly " + ",".join(FIELDS), header=header)
    last_line = reader.line_num
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            errors.append(RecordError(last_line + 1, "bad_row", f"CSV error: {exc}"))
            last_line = reader.line_num
            continue
        start, last_line = last_line + 1, reader.line_num
        if not row:
            continue
        if any(_SURROGATE.search(cell) for cell in row):
            errors.append(RecordError(start, "bad_row", "line is not valid UTF-8"))
            continue
        if len(row) != len(FIELDS):
            errors.append(RecordError(start, "bad_row", f"expected 5 columns, got {len(row)}"))
            continue
        values = dict(zip(FIELDS, row))
        if not values["tweet_id"]:
            values["tweet_id"] = None
        if not values["username"]:
            values["username"] = None
        result = _validate(values, start)
        (records if isinstance(result, RawTweet) else errors).append(result)
    return records, errors


def parse_records(source: BinaryIO | bytes, format: str) -> tuple[list[RawTweet], list[RecordError]]:
    """Parse an exported byte stream into records and per-line errors.

    Undecodable bytes only invalidate the line that holds them.
    """
    data = source if isinstance(source, bytes) else source.read()
    if data.startswith(b"\xef\xbb\xbf"):
        data = data[3:]
    text = data.decode("utf-8", errors="surrogateescape")
    if format == "jsonl":
        return _parse_jsonl(text)
    if format == "csv":
        return _parse_csv(text)
    raise ValidationError(f"unknown input format {format!r}", format=format)


def serialize_records(records: Iterable[RawTweet], format: str) -> bytes:
    if format == "jsonl":
        return "".join(json.dumps(r.to_dict(), ensure_ascii=False) + "\n" for r in records).encode()
    if format == "csv":
        buf = io.StringIO(newline="")
        # CRLF terminator makes the writer quote fields holding a bare "\r"
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(FIELDS)
        for r in records:
            writer.writerow([r.hashtag, r.datetime_raw, r.tweet_id, r.text, r.username])
        return buf.getvalue().encode()
    raise ValidationError(f"unknown input format {format!r}", format=format)


def format_for(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".jsonl", ".ndjson"):
        return "jsonl"
    if suffix == ".csv":
        return "csv"
    raise ValidationError(f"cannot infer input format from {path}", path=str(path))


def _to_date(value, key):
    if isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except ValueError:
        raise ValidationError(f"{key} is not an ISO date", value=str(value)) from None


def manifest_from_mapping(data: dict) -> TagManifest:
    for key in ("tags", "date_from", "date_to"):
        if key not in data:
            raise ValidationError(f"manifest lacks key {key!r}", key=key)
    if not isinstance(data["tags"], list):
        raise ValidationError("manifest tags must be an array of strings")
    tags: list[str] = []
    for raw in data["tags"]:
        tag = normalize_tag(str(raw))
        if not tag:
            raise ValidationError("empty tag in manifest", tag=str(raw))
        if tag in tags:
            raise ValidationError(f"duplicate tag after normalization: {tag}", tag=tag)
        tags.append(tag)
    return TagManifest(tuple(tags), _to_date(data["date_from"], "date_from"),
                       _to_date(data["date_to"], "date_to"))


def load_tag_manifest(path) -> TagManifest:
    """Read a TOML manifest with ``tags``, ``date_from`` and ``date_to``."""
    with open(path, "rb") as fh:
        try:
            data = tomli.load(fh)
        except tomli.TOMLDecodeError as exc:
            raise ValidationError(f"manifest is not valid TOML: {exc}", path=str(path)) from None
    return manifest_from_mapping(data)


def filter_by_manifest(records: Iterable[RawTweet], manifest: TagManifest,
                       tally: Counter | None = None) -> list[RawTweet]:
    """Keep records collected by a manifest tag inside the manifest date range.

    Rejections are counted into ``tally`` under ``tag``, ``date_range`` and
    ``bad_datetime`` when a counter is supplied.
    """
    keys = {tag_key(t) for t in manifest.tags}
    kept = []
    for record in records:
        if tag_key(record.hashtag) not in keys:
            reason = "tag"
        else:
            try:
                day = normalize_datetime(record.datetime_raw).date()
            except DatetimeParseError:
                reason = "bad_datetime"
            else:
                if manifest.date_from <= day <= manifest.date_to:
                    kept.append(record)
                    continue
                reason = "date_range"
        if tally is not None:
            tally[reason] += 1
    return kept
