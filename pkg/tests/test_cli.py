import json
import shutil
import subprocess
import sys

import pytest

from crisis_pulse.cli import main
from crisis_pulse.config import CONFIG_ENV, load_config


@pytest.fixture
def workdir(tmp_path, fixtures_dir):
    for name in ("tweets.csv", "labeled.csv", "manifest.toml", "config.toml"):
        shutil.copy(fixtures_dir / name, tmp_path / name)
    config = tmp_path / "config.toml"
    text = config.read_text("utf-8").replace("iterations = 1000", "iterations = 50")
    config.write_text(text, encoding="utf-8")
    return tmp_path


def run(workdir, *args):
    return main([*args, "--config", str(workdir / "config.toml")])


def test_topics_before_clean_is_missing_prerequisite(workdir, capsys):
    assert run(workdir, "topics") == 2
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "missing_prerequisite" and err["path"].endswith("clean.jsonl")


def test_validation_error_exit_code(workdir, capsys):
    (workdir / "manifest.toml").write_text('tags = ["#Deprem", "deprem"]\ndate_from = "2020-10-30"\n'
                                           'date_to = "2020-11-23"\n', encoding="utf-8")
    assert run(workdir, "ingest") == 1
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert "deprem" in json.dumps(err, ensure_ascii=False)


def test_bad_config_is_validation_error(workdir):
    (workdir / "config.toml").write_text('inputs = ["tweets.csv"]\nmanifest = "manifest.toml"\n'
                                         '[sentiment]\nmode = "apply"\n', encoding="utf-8")
    assert run(workdir, "ingest") == 1


def test_stages_in_order_and_restartable(workdir):
    out = workdir / "out"
    for stage in ("ingest", "clean", "features", "topics", "sentiment", "report"):
        assert run(workdir, stage) == 0
    report = json.loads((out / "report.json").read_text("utf-8"))
    assert report["tweet_count"] == report["preprocessing"]["output_count"]
    for name in ("clean.jsonl", "features.csv", "topics.json", "topics.csv", "sentiment.jsonl",
                 "charts/daily_sentiment.svg"):
        assert name in report["artifacts"]
    before = {p: p.read_bytes() for p in out.rglob("*") if p.is_file()}
    assert run(workdir, "features") == 0
    after = {p: p.read_bytes() for p in out.rglob("*") if p.is_file()}
    assert before == after


def test_env_var_supplies_config(workdir, monkeypatch):
    monkeypatch.setenv(CONFIG_ENV, str(workdir / "config.toml"))
    assert main(["ingest", "--out", str(workdir / "elsewhere")]) == 0
    assert (workdir / "elsewhere" / "raw.jsonl").is_file()


def test_no_config_at_all(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)
    assert main(["ingest"]) == 1


def test_import_mode(workdir):
    assert run(workdir, "ingest") == 0 and run(workdir, "clean") == 0
    ids = [json.loads(line)["tweet_id"] for line in (workdir / "out" / "clean.jsonl").read_text("utf-8").splitlines()]
    rows = [{"tweet_id": i, "negative": 0.1, "neutral": 0.2, "positive": 0.7} for i in ids[:10]]
    rows.append({"tweet_id": "1", "negative": 0.5, "neutral": 0.5, "positive": 0.5})
    rows.append({"tweet_id": "999", "negative": 1.0, "neutral": 0.0, "positive": 0.0})
    (workdir / "scores.jsonl").write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    config = workdir / "config.toml"
    text = config.read_text("utf-8").split("[sentiment]")[0] + '[sentiment]\nmode = "import"\nscores = "scores.jsonl"\n'
    config.write_text(text, encoding="utf-8")
    assert run(workdir, "sentiment") == 0
    report = json.loads((workdir / "out" / "sentiment_report.json").read_text("utf-8"))
    assert report["predicted"] == 10 and report["label_counts"]["positive"] == 10
    assert len(report["rejected_rows"]) == 1 and report["unknown_tweet_ids"] == 1


def test_apply_mode_reuses_saved_model(workdir):
    assert run(workdir, "run") == 0
    shutil.copy(workdir / "out" / "sentiment_model.json", workdir / "model.json")
    first = (workdir / "out" / "sentiment.jsonl").read_bytes()
    config = workdir / "config.toml"
    text = config.read_text("utf-8").split("[sentiment]")[0] + '[sentiment]\nmode = "apply"\nmodel = "model.json"\n'
    config.write_text(text, encoding="utf-8")
    assert run(workdir, "sentiment") == 0
    assert (workdir / "out" / "sentiment.jsonl").read_bytes() == first


def test_config_paths_resolve_against_config_dir(workdir):
    cfg = load_config(workdir / "config.toml", seed=7)
    assert cfg.inputs == [workdir / "tweets.csv"] and cfg.seed == 7
    assert cfg.sentiment.labeled == workdir / "labeled.csv"


def test_console_entry_point(workdir):
    proc = subprocess.run([sys.executable, "-m", "crisis_pulse.cli", "ingest", "--config",
                           str(workdir / "config.toml")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "timings_ms" in proc.stderr
