"""Pipeline configuration: every tunable constant lives here."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    seed: int
    window: int = 2
    smoothing: float = 1e-4
    softtfidf_theta: float = 0.9
    link_candidate_threshold: float = 0.6
    link_pair_threshold: float = 0.1
    pmi_quantile: float = 0.25
    svm_c: float = 1.0
    folds: int = 10
    dataset: str = "coord-pmi"
    feature_set: str = "all"
    graph_threshold: float = 0.0
    graph_top_k: int | None = None
    one_doc_per_line: bool = False
    corpus: list[str] = field(default_factory=list)
    source_root: str = ""
    out_dir: str = "artifacts"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an integer")
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        if not 0.0 < self.smoothing < 1.0:
            raise ConfigError("smoothing must lie in (0, 1)")
        for name in ("softtfidf_theta", "link_candidate_threshold", "link_pair_threshold"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        if not 0.0 < self.pmi_quantile <= 0.5:
            raise ConfigError("pmi_quantile must lie in (0, 0.5]")
        if self.svm_c <= 0:
            raise ConfigError("svm_c must be positive")
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")
        if self.dataset not in ("coord", "coord-pmi"):
            raise ConfigError("dataset must be 'coord' or 'coord-pmi'")
        if self.feature_set not in ("all", "corpus", "code"):
            raise ConfigError("feature_set must be 'all', 'corpus' or 'code'")
        if self.graph_top_k is not None and self.graph_top_k < 1:
            raise ConfigError("graph_top_k must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    def echo(self) -> str:
        """Canonical one-line JSON rendering, embedded in artifact headers."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        if "seed" not in data:
            raise ConfigError("config is missing mandatory 'seed'")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: line {e.lineno}: {e.msg}") from e
        cfg = cls.from_dict(data)
        # relative paths in the config resolve against the config's directory
        base = path.parent
        cfg.corpus = [str(base / p) for p in cfg.corpus]
        if cfg.source_root:
            cfg.source_root = str(base / cfg.source_root)
        cfg.out_dir = str(base / cfg.out_dir)
        return cfg
