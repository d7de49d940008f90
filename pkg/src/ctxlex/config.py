"""Flat ``key = value`` pipeline configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .extraction import PROFILES
from .evaluation import METHODS
from .solver import HyperParams

ENV_VAR = "CTXLEX_CONFIG"

PATH_KEYS = ("corpus", "positive", "negative", "negation", "and_words", "but_words", "seeds_positive",
             "seeds_negative", "tag_dict", "gold", "pool", "annotations", "output")
WORDSET_ROLES = {"positive": "positive", "negative": "negative", "negation": "negation", "and_words": "and",
                 "but_words": "but", "seeds_positive": "seeds_positive", "seeds_negative": "seeds_negative"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    corpus: str | None = None
    corpus_format: str = "jsonl"
    wordset_format: str = "plain"
    positive: str | None = None
    negative: str | None = None
    negation: str | None = None
    and_words: str | None = None
    but_words: str | None = None
    seeds_positive: str | None = None
    seeds_negative: str | None = None
    tag_dict: str | None = None
    freq: int = 10
    pmi: float = 0.005
    cor: float = 0.05
    discriminators: tuple[str, ...] = ()
    min_conj: int = 1
    profile: str = "adj"
    lambda1: float = 1.0
    lambda2: float = 1.0
    lambda3: float = 1.0
    lambda4: float = 1.0
    delta: float = 0.01
    max_iters: int = 100
    init_epsilon: float = 0.1
    review_labels: str = "classify"
    gold: str | None = None
    pool: str | None = None
    annotations: str | None = None
    output: str = "out"
    base_dir: str = field(default=".", compare=False)

    @property
    def hyperparams(self) -> HyperParams:
        return HyperParams(self.lambda1, self.lambda2, self.lambda3, self.lambda4, self.delta, self.max_iters,
                           self.init_epsilon)

    def path(self, key: str) -> Path | None:
        value = getattr(self, key)
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else Path(self.base_dir) / p

    @property
    def out_dir(self) -> Path:
        return self.path("output")

    def validate(self) -> None:
        if self.freq < 0 or self.pmi < 0 or self.cor < 0 or self.min_conj < 0:
            raise ConfigError("thresholds freq, pmi, cor and min_conj must be >= 0")
        if self.profile not in PROFILES:
            raise ConfigError(f"profile must be one of {sorted(PROFILES)}, got {self.profile!r}")
        if self.corpus_format not in ("jsonl", "tsv"):
            raise ConfigError(f"corpus_format must be jsonl or tsv, got {self.corpus_format!r}")
        if self.wordset_format not in ("plain", "mpqa"):
            raise ConfigError(f"wordset_format must be plain or mpqa, got {self.wordset_format!r}")
        if self.review_labels not in METHODS:
            raise ConfigError(f"review_labels must be one of {METHODS}, got {self.review_labels!r}")
        try:
            self.hyperparams.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def require(self, *keys: str) -> None:
        """Fail unless each key is set and, for input paths, exists."""
        for key in keys:
            p = self.path(key)
            if p is None:
                raise ConfigError(f"config key {key!r} is required for this command")
            if key != "output" and not p.exists():
                raise ConfigError(f"{key}: file not found: {p}")

    def word_set_paths(self) -> dict[str, Path]:
        return {role: self.path(key) for key, role in WORDSET_ROLES.items() if getattr(self, key) is not None}


_FIELDS = {f.name: f for f in fields(PipelineConfig) if f.name != "base_dir"}
KEYS = tuple(_FIELDS)


def _coerce(key: str, raw: Any) -> Any:
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    if raw is None:
        return None
    kind = _FIELDS[key].type
    try:
        if key == "discriminators":
            if isinstance(raw, (list, tuple)):
                return tuple(str(d).strip() for d in raw if str(d).strip())
            return tuple(d.strip() for d in str(raw).split(",") if d.strip())
        if kind == "int":
            f = float(raw)
            if f != int(f):
                raise ValueError
            return int(f)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot read {raw!r} as {kind}") from None
    return str(raw)


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _coerce(key, value)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    return values


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
    """Config file values, then overrides on top; relative paths resolve against the file's directory.

    With no path, ``$CTXLEX_CONFIG`` is used if set; otherwise only overrides
    and defaults apply, relative to the working directory.
    """
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    values: dict[str, Any] = {}
    base = Path.cwd()
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        values = parse_config_text(p.read_text(encoding="utf-8"), str(p))
        base = p.resolve().parent
    cfg = PipelineConfig(base_dir=str(base), **values)
    cfg = apply_overrides(cfg, overrides or {})
    cfg.validate()
    return cfg


def apply_overrides(cfg: PipelineConfig, overrides: Mapping[str, Any]) -> PipelineConfig:
    """Command-line values; relative paths here resolve against the working directory."""
    changes = {}
    for key, raw in overrides.items():
        if raw is None:
            continue
        value = _coerce(key, raw)
        if key in PATH_KEYS:
            value = str(Path(value).resolve())
        changes[key] = value
    return replace(cfg, **changes)


def write_config(cfg: PipelineConfig, path: str | Path) -> None:
    lines = []
    for key in KEYS:
        v = getattr(cfg, key)
        if v is None:
            continue
        lines.append(f"{key} = {','.join(v) if isinstance(v, tuple) else v}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
