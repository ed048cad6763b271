import io
import json
import random
from collections import Counter
from datetime import date, datetime, timedelta

import pytest
from hypothesis import given, strategies as st

from crisis_pulse.errors import ValidationError
from crisis_pulse.ingest import (
    RawTweet,
    TagManifest,
    filter_by_manifest,
    load_tag_manifest,
    manifest_from_mapping,
    parse_records,
    serialize_records,
)

HEADER = "hashtag,datetime,tweet_id,text,username\n"


def jsonl(*rows):
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows).encode()


def test_jsonl_keeps_large_ids_exact():
    line = {"hashtag": "deprem", "datetime": "2020-10-30 14:51:00", "tweet_id": "1322200000000000001",
            "text": "geçmiş olsun", "username": "u1"}
    records, errors = parse_records(io.BytesIO(jsonl(line)), "jsonl")
    assert errors == []
    assert records[0].tweet_id == "1322200000000000001"


def test_jsonl_integer_id_never_passes_through_float():
    raw = b'{"hashtag":"d","datetime":"2020-10-30 14:51:00","tweet_id":1322200000000000001,"text":"x","username":"u"}\n'
    records, _ = parse_records(raw, "jsonl")
    assert records[0].tweet_id == "1322200000000000001"
    assert float(records[0].tweet_id) != 1322200000000000001  # would have been lost as a double


def test_csv_empty_username_is_missing_field():
    data = (HEADER + "deprem,2020-10-30 14:51:00,1,metin,\n").encode()
    records, errors = parse_records(data, "csv")
    assert records == []
    assert errors[0].reason == "missing_field"
    assert errors[0].line_number == 2


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_empty_input(fmt):
    assert parse_records(b"", fmt) == ([], [])


def test_bad_id_and_bad_row():
    data = (HEADER + "deprem,2020-10-30 14:51:00,12a3,metin,u\n"
            "deprem,2020-10-30 14:51:00,5,only four\n").encode()
    records, errors = parse_records(data, "csv")
    assert [e.reason for e in errors] == ["bad_id", "bad_row"]
    assert [e.line_number for e in errors] == [2, 3]


def test_undecodable_line_only_affects_itself():
    good = {"hashtag": "d", "datetime": "2020-10-30 14:51:00", "tweet_id": "1", "text": "a", "username": "u"}
    data = jsonl(good) + b'{"hashtag":"d","text":"\xff\xfe"}\n' + jsonl({**good, "tweet_id": "2"})
    records, errors = parse_records(data, "jsonl")
    assert [r.tweet_id for r in records] == ["1", "2"]
    assert [(e.line_number, e.reason) for e in errors] == [(2, "bad_row")]


def test_csv_multiline_text_reports_starting_line():
    data = (HEADER + 'deprem,2020-10-30 14:51:00,1,"iki\nsatır",u\n'
            "deprem,2020-10-30 14:51:00,x,metin,u\n").encode()
    records, errors = parse_records(data, "csv")
    assert records[0].text == "iki\nsatır"
    assert errors[0].line_number == 4


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_nul_character_is_bad_row(fmt):
    bad = RawTweet("d", "2020-10-30 14:51:00", "1", "a\x00b", "u")
    if fmt == "jsonl":
        data = serialize_records([bad], fmt)
    else:
        data = (HEADER + "d,2020-10-30 14:51:00,1,a\x00b,u\n").encode()
    records, errors = parse_records(data, fmt)
    assert records == [] and errors[0].reason == "bad_row"


def test_csv_header_must_match():
    with pytest.raises(ValidationError):
        parse_records(b"id,text\n1,a\n", "csv")


text_st = st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"), max_size=40)
record_st = st.builds(
    RawTweet,
    hashtag=text_st,
    datetime_raw=text_st,
    tweet_id=st.from_regex(r"[0-9]{1,20}", fullmatch=True),
    text=text_st,
    username=text_st.filter(lambda s: s.strip() and not s.startswith("@")),
)


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
@given(records=st.lists(record_st, max_size=8))
def test_round_trip(fmt, records):
    parsed, errors = parse_records(serialize_records(records, fmt), fmt)
    assert errors == []
    assert parsed == records
    again, _ = parse_records(serialize_records(parsed, fmt), fmt)
    assert again == parsed


@given(lines=st.lists(st.one_of(
    st.builds(lambda r: json.dumps(r.to_dict()), record_st),
    st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\n\r"), min_size=1),
), max_size=10))
def test_every_line_becomes_record_or_error(lines):
    data = "\n".join(lines).encode()
    records, errors = parse_records(data, "jsonl")
    assert len(records) + len(errors) == sum(1 for line in lines if line.strip())


PAPER_TAGS = [
    "#deprem", "#depremizmir", "#enkazaltında", "#egededeprem", "#egedepremi", "#enkaz",
    "#bayraklı", "#bayraklıdeprem", "#enkazaltinda", "#EnkazIhbarIzmir", "#gecmisolsunizmir",
    "#izmirdepremi", "#yanındayızimir", "#gecmisolsunizmirim", "#izmirdeprem", "#izmiryanindayiz",
    "#İzmirDepreminde", "#izmirdepremi", "#izmiryanindayiz", "#izmirgecmisolsun",
]


def test_source_tag_list_repeats_are_rejected(fixtures_dir):
    with pytest.raises(ValidationError, match="izmirdepremi"):
        load_tag_manifest(fixtures_dir / "manifest_paper_list.toml")


def test_bundled_manifest_has_the_unique_tags(fixtures_dir):
    manifest = load_tag_manifest(fixtures_dir / "manifest.toml")
    assert len(PAPER_TAGS) == 20
    assert len(manifest.tags) == len(set(PAPER_TAGS)) == 18
    assert manifest.tags[0] == "deprem"
    assert "izmirdepreminde" in manifest.tags
    assert (manifest.date_from, manifest.date_to) == (date(2020, 10, 30), date(2020, 11, 23))
    assert (manifest.date_to - manifest.date_from).days + 1 == 25


def test_manifest_normalization_and_errors(tmp_path):
    with pytest.raises(ValidationError, match="deprem"):
        manifest_from_mapping({"tags": ["#Deprem", "deprem"], "date_from": "2020-10-30", "date_to": "2020-11-23"})
    single = manifest_from_mapping({"tags": ["deprem"], "date_from": "2020-10-30", "date_to": "2020-10-30"})
    assert single.tags == ("deprem",)
    with pytest.raises(ValidationError):
        manifest_from_mapping({"tags": ["deprem"], "date_from": "2020-11-30", "date_to": "2020-10-30"})
    path = tmp_path / "m.toml"
    path.write_text('tags = ["#İzmirDeprem"]\ndate_from = 2020-10-30\ndate_to = 2020-11-23\n', encoding="utf-8")
    assert load_tag_manifest(path).tags == ("izmirdeprem",)


MANIFEST = TagManifest(("izmirdeprem", "deprem"), date(2020, 10, 30), date(2020, 11, 23))


def rec(tag, when, tid="1"):
    return RawTweet(tag, when, tid, "metin", "u")


def test_filter_case_insensitive_and_range():
    kept = filter_by_manifest([rec("IZMIRDEPREM", "2020-10-30 15:00:00"),
                               rec("#deprem", "2020-11-24 00:00:00"),
                               rec("deprem", "2020-11-23T20:59:59Z")], MANIFEST)
    assert [r.hashtag for r in kept] == ["IZMIRDEPREM", "deprem"]


def test_filter_tallies_bad_datetimes():
    tally = Counter()
    kept = filter_by_manifest([rec("deprem", "30/10/2020"), rec("tsunami", "2020-10-30 15:00:00")], MANIFEST, tally)
    assert kept == [] and tally == Counter(bad_datetime=1, tag=1)


def test_filter_hundred_records_with_seven_out_of_range():
    rng = random.Random(7)
    base = datetime(2020, 10, 30)
    records, inside = [], 0
    out_slots = set(rng.sample(range(100), 7))
    for i in range(100):
        if i in out_slots:
            day = base + timedelta(days=rng.choice([-3, -1, 25, 26, 40]))
        else:
            day = base + timedelta(days=rng.randrange(25))
        when = day.replace(hour=rng.randrange(24), minute=rng.randrange(60))
        records.append(rec("deprem", when.strftime("%Y-%m-%d %H:%M:%S"), str(i)))
        # brute-force comparison on the calendar date string
        inside += "2020-10-30" <= when.strftime("%Y-%m-%d") <= "2020-11-23"
    kept = filter_by_manifest(records, MANIFEST)
    assert inside == 93
    assert len(kept) == 93


@given(st.lists(st.builds(rec, st.sampled_from(["deprem", "IZMIRDEPREM", "x"]),
                          st.sampled_from(["2020-10-29 10:00:00", "2020-11-01 10:00:00", "bad",
                                           "2020-11-23T22:00:00Z"])), max_size=20))
def test_filter_idempotent(records):
    once = filter_by_manifest(records, MANIFEST)
    assert filter_by_manifest(once, MANIFEST) == once
