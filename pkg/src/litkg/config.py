"""Run configuration: one JSON manifest wiring every pipeline stage.

Relative paths resolve against the config file's directory so a corpus
directory is self-contained.  CLI flags override config keys.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path

from .data import default_semtype_rules_path, default_whitelist_path
from .embed.training import TrainConfig
from .errors import ConfigError


@dataclass
class RunConfig:
    predications: Path
    output_dir: Path
    whitelist: Path = field(default_factory=default_whitelist_path)
    semtype_rules: Path = field(default_factory=default_semtype_rules_path)
    scores: Path | None = None
    candidates: dict[str, Path] = field(default_factory=dict)
    strict_parse: bool = False
    keep: int | None = None
    score_threshold: float = 0.5
    strict_scores: bool = False
    train: TrainConfig = field(default_factory=TrainConfig)
    train_cutoff: dt.date | None = None
    test_cutoff: dt.date | None = None
    eval_mode: str = "raw"
    top_n: int = 10
    novel_only: bool = False
    relations: list[str] | None = None

    def validate_paths(self) -> None:
        required = {"predications": self.predications}
        optional = {
            "whitelist": self.whitelist,
            "semtype_rules": self.semtype_rules,
            "scores": self.scores,
            **{f"candidates[{label}]": p for label, p in self.candidates.items()},
        }
        for name, path in {**required, **optional}.items():
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{name} file not found: {path}")


def load_config(path) -> RunConfig:
    """Parse a JSON run manifest; see the README for the schema."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    base = path.parent

    def resolve(p):
        return (base / p).resolve() if p is not None else None

    paths = raw.get("paths", {})
    if "predications" not in paths:
        raise ConfigError(f"config {path} missing paths.predications")
    filter_section = raw.get("filter", {})
    train_section = dict(raw.get("train", {}))
    split = raw.get("split", {})
    evaluate = raw.get("evaluate", {})
    predict = raw.get("predict", {})

    try:
        train_cfg = TrainConfig(**train_section)
    except TypeError as exc:
        raise ConfigError(f"bad train section: {exc}") from exc

    def parse_date(value):
        if value is None:
            return None
        try:
            return dt.date.fromisoformat(value)
        except ValueError as exc:
            raise ConfigError(f"bad date {value!r} in split section") from exc

    cfg = RunConfig(
        predications=resolve(paths["predications"]),
        output_dir=resolve(paths.get("output_dir", "out")),
        whitelist=resolve(paths["whitelist"]) if "whitelist" in paths else default_whitelist_path(),
        semtype_rules=(
            resolve(paths["semtype_rules"])
            if "semtype_rules" in paths
            else default_semtype_rules_path()
        ),
        scores=resolve(paths.get("scores")),
        candidates={label: resolve(p) for label, p in paths.get("candidates", {}).items()},
        strict_parse=bool(raw.get("strict_parse", False)),
        keep=filter_section.get("keep"),
        score_threshold=float(filter_section.get("score_threshold", 0.5)),
        strict_scores=bool(filter_section.get("strict_scores", False)),
        train=train_cfg,
        train_cutoff=parse_date(split.get("train_cutoff")),
        test_cutoff=parse_date(split.get("test_cutoff")),
        eval_mode=evaluate.get("mode", "raw"),
        top_n=int(predict.get("top_n", 10)),
        novel_only=bool(predict.get("novel_only", False)),
        relations=predict.get("relations"),
    )
    if cfg.keep is not None and cfg.keep < 0:
        raise ConfigError(f"filter.keep must be non-negative, got {cfg.keep}")
    if not 0.0 <= cfg.score_threshold <= 1.0:
        raise ConfigError(f"filter.score_threshold outside [0, 1]: {cfg.score_threshold}")
    if cfg.eval_mode not in ("raw", "filtered"):
        raise ConfigError(f"evaluate.mode must be 'raw' or 'filtered', got {cfg.eval_mode!r}")
    if cfg.top_n <= 0:
        raise ConfigError(f"predict.top_n must be positive, got {cfg.top_n}")
    return cfg
