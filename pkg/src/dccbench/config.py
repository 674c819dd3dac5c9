"""Workbench configuration: thresholds, suggestion service, scorer endpoints.

Config files are YAML with one section per concern; every key is optional
and falls back to the documented default. Scorer endpoints are listed in
checkpoint order (position = checkpoint index).

    region:
      var_threshold: 0.2
      conf_low: 0.5
      conf_high: 0.8
    miner:
      k: 10
      sim_min: 0.9
      n_diff: 1
      agreement_min: 0.75
      min_annotations: 3
    display_neighbors: 4
    suggestion:
      endpoint: "mock:0"          # or an HTTP(S) URL
      api_key_env: null           # env var holding the API key
      temperature: 0.7
      max_tokens: 128
      parallelism: 1
      retries: 0
    scorers:
      - "mock:1"
      - "mock:2"
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .datamap import RegionConfig
from .errors import ConfigInvalid
from .mining import DEFAULT_DISPLAY_NEIGHBORS, MinerConfig


@dataclass(frozen=True)
class SuggestionConfig:
    endpoint: str = "mock:0"
    api_key_env: str | None = None
    temperature: float = 0.7
    max_tokens: int = 128
    parallelism: int = 1
    retries: int = 0  # re-requests for unparseable completions


@dataclass(frozen=True)
class WorkbenchConfig:
    region: RegionConfig = field(default_factory=RegionConfig)
    miner: MinerConfig = field(default_factory=MinerConfig)
    display_neighbors: int = DEFAULT_DISPLAY_NEIGHBORS
    suggestion: SuggestionConfig = field(default_factory=SuggestionConfig)
    scorers: tuple[str, ...] = ()


def _section(data: dict, name: str) -> dict:
    value = data.get(name, {})
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigInvalid(f"config section {name!r} must be a mapping")
    return value


def config_from_dict(data: dict) -> WorkbenchConfig:
    unknown = set(data) - {"region", "miner", "display_neighbors", "suggestion", "scorers"}
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
    scorers = data.get("scorers", [])
    if scorers is None:
        scorers = []
    if not isinstance(scorers, list) or not all(isinstance(s, str) for s in scorers):
        raise ConfigInvalid("scorers must be a list of target strings")
    try:
        return WorkbenchConfig(
            region=RegionConfig(**_section(data, "region")),
            miner=MinerConfig(**_section(data, "miner")),
            display_neighbors=int(data.get("display_neighbors", DEFAULT_DISPLAY_NEIGHBORS)),
            suggestion=SuggestionConfig(**_section(data, "suggestion")),
            scorers=tuple(scorers),
        )
    except TypeError as exc:
        raise ConfigInvalid(str(exc)) from exc


def load_config(path: str | Path | None) -> WorkbenchConfig:
    """Load a YAML config file; None means all defaults.

    An explicit path that does not exist raises, so a typo never silently
    falls back to defaults.
    """
    if path is None:
        return WorkbenchConfig()
    text = Path(path).read_text(encoding="utf-8")
    data = yaml.safe_load(text)
    if data is None:
        return WorkbenchConfig()
    if not isinstance(data, dict):
        raise ConfigInvalid(f"config file {path} must contain a mapping")
    return config_from_dict(data)
