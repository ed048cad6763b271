"""Regenerate the bundled fixture corpus under tests/fixtures/.

The output is deterministic: rerunning rewrites identical bytes.

    python scripts/make_fixture.py [--out tests/fixtures]
"""

import argparse
import csv
import io
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

PAPER_TAGS = [
    "#deprem", "#depremizmir", "#enkazaltında", "#egededeprem", "#egedepremi", "#enkaz",
    "#bayraklı", "#bayraklıdeprem", "#enkazaltinda", "#EnkazIhbarIzmir", "#gecmisolsunizmir",
    "#izmirdepremi", "#yanındayızimir", "#gecmisolsunizmirim", "#izmirdeprem", "#izmiryanindayiz",
    "#İzmirDepreminde", "#izmirdepremi", "#izmiryanindayiz", "#izmirgecmisolsun",
]

USERS = ["TumDepremler"] * 6 + ["zelzeleler"] * 3 + ["EMSC"] * 2 + [f"kullanici{i}" for i in range(25)]
MENTIONS = ["AFADBaskanlik", "AFADBaskanlik", "izmirbld", "izmirbld", "RTErdogan", "Kizilay", "ahbap"]
PHRASES = [
    "Geçmiş olsun İzmir", "geçmiş olsun izmir", "Geçmiş olsun Türkiye", "Allah yardımcımız olsun",
    "enkaz altında bebek sesi var", "yardım bekleyen aileler için destek", "Bayraklı'da bina yıkıldı",
    "deprem bölgesine yardım gidiyor", "İzmir'de arama kurtarma sürüyor", "bebek enkazdan kurtarıldı",
    "AFAD açıklama yaptı", "büyüklüğü 6.6 olarak ölçüldü", "çok korkunç bir gün", "umut hâlâ var",
]
EMOJI = ["🙏", "💔", "😢", "🇹🇷", "❤️", "🙏🏻"]
START = datetime(2020, 10, 30, 14, 51, tzinfo=timezone(timedelta(hours=3)))


def tweet_text(rng):
    parts = [rng.choice(PHRASES)]
    if rng.random() < 0.35:
        parts.insert(0, "@" + rng.choice(MENTIONS))
    if rng.random() < 0.15:
        parts.append("@" + rng.choice(MENTIONS))
    parts.append(rng.choice(PAPER_TAGS))
    if rng.random() < 0.4:
        parts.append(rng.choice(PAPER_TAGS[:6]))
    if rng.random() < 0.3:
        parts.append(rng.choice(EMOJI))
    links = rng.choices([0, 1, 2], weights=[51, 45, 4])[0]
    parts += [f"https://t.co/{rng.randrange(16**6):06x}" for _ in range(links)]
    return " ".join(parts)


def timestamp(rng):
    # most activity in the first five days, tapering over the collection window
    day = min(int(rng.expovariate(1 / 3.5)), 24)
    moment = START.replace(hour=0, minute=0) + timedelta(days=day, seconds=rng.randrange(86400))
    if moment < START:
        moment = START + timedelta(seconds=rng.randrange(9 * 3600))
    style = rng.randrange(3)
    if style == 0:
        return moment.strftime("%Y-%m-%d %H:%M:%S")
    utc = moment.astimezone(timezone.utc)
    return utc.strftime("%Y-%m-%dT%H:%M:%S") + ("Z" if style == 1 else "+00:00")


def build_rows(rng):
    rows = []
    next_id = 1322200000000000001
    for _ in range(162):
        rows.append([rng.choice(PAPER_TAGS).lstrip("#"), timestamp(rng), str(next_id),
                     tweet_text(rng), rng.choice(USERS)])
        next_id += rng.randrange(1, 5000)
    # 17 duplicate ids (retweet-style copies and re-exports)
    for src in rng.sample(range(162), 17):
        dup = list(rows[src])
        if rng.random() < 0.5:
            dup[3] = dup[3] + " RT"
        rows.append(dup)
    # 5 empty or whitespace-only texts
    for blank in ["", "   ", "\t", "", " \n "]:
        rows.append(["deprem", timestamp(rng), str(next_id), blank, rng.choice(USERS)])
        next_id += 7
    # 4 malformed timestamps
    for bad in ["30/10/2020 15:02", "2020-10-31", "31 Ekim 2020 09:00", "2020/11/01 10:00:00"]:
        rows.append(["izmirdeprem", bad, str(next_id), tweet_text(rng), rng.choice(USERS)])
        next_id += 11
    # 6 outside the collection window and 3 fetched by an unlisted tag
    for when in ["2020-10-29 23:59:59", "2020-11-24 00:00:01", "2020-11-25 10:00:00",
                 "2020-11-23T21:30:00Z", "2020-10-29T19:59:59-01:00", "2020-12-01 12:00:00"]:
        rows.append(["deprem", when, str(next_id), tweet_text(rng), rng.choice(USERS)])
        next_id += 13
    for _ in range(3):
        rows.append(["tsunami", timestamp(rng), str(next_id), tweet_text(rng), rng.choice(USERS)])
        next_id += 17
    rng.shuffle(rows)
    # 3 rows that fail validation
    rows.insert(40, ["deprem", "2020-10-30 15:00:00", "13222e18", "geçmiş olsun", "u_bad"])
    rows.insert(90, ["deprem", "2020-10-30 15:00:00", "", "geçmiş olsun", "u_noid"])
    rows.insert(150, ["deprem", "2020-10-30 15:00:00", str(next_id), "geçmiş olsun", ""])
    return rows


LEXICON = {
    "negative": ["çok üzgünüm", "acı haber", "yıkıldık", "korkunç bir felaket", "kayıplar var",
                 "ağır hasar", "kalbimiz yanıyor", "öldü", "yardım gelmedi", "kötü durumda"],
    "neutral": ["büyüklüğünde deprem kaydedildi", "merkez üssü Seferihisar açıkları", "saat 14:51",
                "AFAD açıklama yaptı", "toplanma alanları listesi", "bilgi notu yayımlandı",
                "ölçüldü", "derinlik 16 km", "son durum raporu", "duyuru"],
    "positive": ["enkazdan sağ kurtarıldı", "mucize kurtuluş", "çok sevindik", "umut var",
                 "teşekkürler kahramanlar", "harika haber", "mutlu son", "bebek kurtarıldı",
                 "dayanışma güzel", "şükürler olsun"],
}


def labeled_rows(rng, n=150):
    labels = list(LEXICON)
    rows = []
    for i in range(n):
        label = labels[i % 3]
        words = rng.sample(LEXICON[label], 2) + [rng.choice(["izmir", "deprem", "bugün"])]
        rng.shuffle(words)
        rows.append([" ".join(words), label])
    return rows


def write_csv(path, header, rows):
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buf.getvalue(), encoding="utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "fixtures"))
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20201030)
    write_csv(out / "tweets.csv", ["hashtag", "datetime", "tweet_id", "text", "username"], build_rows(rng))
    write_csv(out / "labeled.csv", ["text", "label"], labeled_rows(rng))
    unique = list(dict.fromkeys(PAPER_TAGS))
    (out / "manifest.toml").write_text(
        "# Collection tags (the source list repeats two tags; repeats removed)\n"
        f"tags = {json.dumps(unique, ensure_ascii=False)}\n"
        'date_from = "2020-10-30"\ndate_to = "2020-11-23"\n', encoding="utf-8")
    (out / "manifest_paper_list.toml").write_text(
        "# Source tag list verbatim, including its repeats\n"
        f"tags = {json.dumps(PAPER_TAGS, ensure_ascii=False)}\n"
        'date_from = "2020-10-30"\ndate_to = "2020-11-23"\n', encoding="utf-8")
    (out / "config.toml").write_text(
        'inputs = ["tweets.csv"]\nmanifest = "manifest.toml"\nout = "out"\nseed = 42\n\n'
        "[lda]\nK = 15\niterations = 1000\nmin_df = 2\nmax_df_ratio = 0.9\ntop_n = 10\n\n"
        '[sentiment]\nmode = "train"\nlabeled = "labeled.csv"\ntrain_ratio = 0.9\nsmoothing = 1.0\n',
        encoding="utf-8")


if __name__ == "__main__":
    main()
