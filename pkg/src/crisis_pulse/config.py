"""Run configuration loaded from a TOML file."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import tomli

from .errors import MissingPrerequisite, ValidationError

CONFIG_ENV = "CRISIS_PULSE_CONFIG"
SENTIMENT_MODES = ("train", "apply", "import")


@dataclass
class LdaSettings:
    K: int = 15
    alpha: float | None = None
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 0
    min_df: int = 2
    max_df_ratio: float = 0.9
    top_n: int = 10
    save_assignments: bool = False


@dataclass
class SentimentSettings:
    mode: str = "train"
    labeled: Path | None = None
    model: Path | None = None
    scores: Path | None = None
    train_ratio: float = 0.9
    smoothing: float = 1.0


@dataclass
class RunConfig:
    inputs: list[Path]
    manifest: Path
    out: Path
    seed: int = 42
    stopwords: Path | None = None
    suffixes: Path | None = None
    lda: LdaSettings = field(default_factory=LdaSettings)
    sentiment: SentimentSettings = field(default_factory=SentimentSettings)

    def __post_init__(self):
        if self.sentiment.mode not in SENTIMENT_MODES:
            raise ValidationError(f"sentiment.mode must be one of {SENTIMENT_MODES}",
                                  mode=self.sentiment.mode)
        source = {"train": "labeled", "apply": "model", "import": "scores"}[self.sentiment.mode]
        if getattr(self.sentiment, source) is None:
            raise ValidationError(f"sentiment mode {self.sentiment.mode!r} needs sentiment.{source}",
                                  mode=self.sentiment.mode)


def _section(cls, data, base: Path, name: str):
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown keys in [{name}]: {sorted(unknown)}", section=name)
    values = dict(data)
    for key in ("labeled", "model", "scores"):
        if values.get(key) is not None:
            values[key] = base / values[key]
    return cls(**values)


def resolve_config_path(cli_value: str | None) -> Path:
    value = cli_value or os.environ.get(CONFIG_ENV)
    if not value:
        raise ValidationError(f"no config given; pass --config or set {CONFIG_ENV}")
    return Path(value)


def load_config(path, seed: int | None = None, out: str | None = None) -> RunConfig:
    """Read a run config; relative paths resolve against the config file's directory."""
    path = Path(path)
    if not path.is_file():
        raise MissingPrerequisite(path)
    with open(path, "rb") as fh:
        try:
            data = tomli.load(fh)
        except tomli.TOMLDecodeError as exc:
            raise ValidationError(f"config is not valid TOML: {exc}", path=str(path)) from None
    base = path.parent
    for key in ("inputs", "manifest"):
        if key not in data:
            raise ValidationError(f"config lacks key {key!r}", key=key)
    known = {"inputs", "manifest", "out", "seed", "stopwords", "suffixes", "lda", "sentiment"}
    if set(data) - known:
        raise ValidationError(f"unknown config keys: {sorted(set(data) - known)}")

    def rel(value):
        return None if value is None else base / value

    return RunConfig(
        inputs=[base / p for p in data["inputs"]],
        manifest=base / data["manifest"],
        out=Path(out) if out is not None else base / data.get("out", "out"),
        seed=int(seed if seed is not None else data.get("seed", 42)),
        stopwords=rel(data.get("stopwords")),
        suffixes=rel(data.get("suffixes")),
        lda=_section(LdaSettings, data.get("lda", {}), base, "lda"),
        sentiment=_section(SentimentSettings, data.get("sentiment", {}), base, "sentiment"),
    )
