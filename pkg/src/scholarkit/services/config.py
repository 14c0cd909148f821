"""Service configuration.

A single JSON file lists the corpora to register at startup, the
word-vector file, the scorer parameters, downstream service addresses and
request defaults.  The ``SCILIT_CONFIG`` environment variable points at it
when no explicit path is given.  Relative paths are resolved against the
config file's directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from scholarkit.services.registry import CorpusRegistration

CONFIG_ENV_VAR = "SCILIT_CONFIG"


@dataclass
class ServiceConfig:
    corpora: list[CorpusRegistration] = field(default_factory=list)
    word_vectors: Path | None = None
    scorer: Path | None = None
    stopwords: Path | None = None
    np_default: int = 100
    k_default: int = 10
    highlights_budget: int = 5
    highlights_tradeoff: float = 0.6
    highlights_url: str | None = None
    cite_url: str | None = None
    generator_url: str | None = None
    service_timeout: float = 10.0

    @classmethod
    def from_dict(cls, obj: dict, base_dir: Path | None = None) -> "ServiceConfig":
        def resolve(raw: str | None) -> Path | None:
            if raw is None:
                return None
            p = Path(raw)
            if base_dir is not None and not p.is_absolute():
                p = base_dir / p
            return p

        defaults = obj.get("defaults", {})
        highlights = obj.get("highlights", {})
        services = obj.get("services", {})
        return cls(
            corpora=[CorpusRegistration.from_dict(c, base_dir) for c in obj.get("corpora", [])],
            word_vectors=resolve(obj.get("word_vectors")),
            scorer=resolve(obj.get("scorer")),
            stopwords=resolve(obj.get("stopwords")),
            np_default=int(defaults.get("np", 100)),
            k_default=int(defaults.get("k", 10)),
            highlights_budget=int(highlights.get("budget", 5)),
            highlights_tradeoff=float(highlights.get("tradeoff", 0.6)),
            highlights_url=services.get("highlights_url"),
            cite_url=services.get("cite_url"),
            generator_url=services.get("generator_url"),
            service_timeout=float(services.get("timeout", 10.0)),
        )


def load_config(path: str | Path | None = None) -> ServiceConfig:
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
        if not path:
            raise ValueError(f"no config path given and {CONFIG_ENV_VAR} is not set")
    path = Path(path)
    obj = json.loads(path.read_text("utf-8"))
    return ServiceConfig.from_dict(obj, base_dir=path.parent.resolve())
