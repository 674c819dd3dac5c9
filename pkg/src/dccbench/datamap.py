"""Training-dynamics statistics and data-map regions.

Per example: confidence is the mean probability the model assigned to the
gold label across checkpoints, variability is the population standard
deviation of that series. Each example is then classified into one of four
regions (the three usual ones plus an explicit "other" catch-all so the
classification is total).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import CorpusHandle
from .errors import ConfigInvalid, TooFewCheckpoints


class Region(enum.Enum):
    EASY_TO_LEARN = "easy_to_learn"
    AMBIGUOUS = "ambiguous"
    HARD_TO_LEARN = "hard_to_learn"
    OTHER = "other"


# Regions eligible for DCC mining; "other" and "easy_to_learn" never qualify.
DCC_ELIGIBLE_REGIONS = frozenset({Region.HARD_TO_LEARN, Region.AMBIGUOUS})


@dataclass(frozen=True)
class RegionConfig:
    """Thresholds for the region classification (the regions themselves are
    qualitative, so the cutoffs are configuration with stated defaults)."""

    var_threshold: float = 0.2
    conf_low: float = 0.5
    conf_high: float = 0.8

    def __post_init__(self) -> None:
        if not 0.0 < self.conf_low < self.conf_high < 1.0:
            raise ConfigInvalid(
                f"need 0 < conf_low < conf_high < 1, got {self.conf_low}, {self.conf_high}"
            )
        if not 0.0 < self.var_threshold < 0.5:
            raise ConfigInvalid(f"need 0 < var_threshold < 0.5, got {self.var_threshold}")


@dataclass(frozen=True)
class DataMapCoords:
    id: str
    confidence: float
    variability: float
    region: Region


def mean_population_std(values: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation (divide by N, not N-1).

    Sums go through math.fsum, which computes the exact sum before a single
    rounding — so the result is identical under any permutation of values.
    """
    n = len(values)
    if n == 0:
        raise ValueError("empty series")
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(variance)


def classify_region(confidence: float, variability: float, config: RegionConfig) -> Region:
    """Total, deterministic region rule; the variability test runs first."""
    if variability >= config.var_threshold:
        return Region.AMBIGUOUS
    if confidence <= config.conf_low:
        return Region.HARD_TO_LEARN
    if confidence >= config.conf_high:
        return Region.EASY_TO_LEARN
    return Region.OTHER


def coords_from_series(
    record_id: str, gold_probs: Sequence[float], config: RegionConfig
) -> DataMapCoords:
    """Data-map coordinates for one gold-label probability series."""
    if len(gold_probs) < 2:
        raise TooFewCheckpoints(
            f"need >= 2 checkpoints, got {len(gold_probs)} for {record_id!r}"
        )
    confidence, variability = mean_population_std(gold_probs)
    return DataMapCoords(
        id=record_id,
        confidence=confidence,
        variability=variability,
        region=classify_region(confidence, variability, config),
    )


def compute_coords(
    corpus: CorpusHandle, config: RegionConfig | None = None
) -> dict[str, DataMapCoords]:
    """Data-map coordinates for every example in the corpus."""
    config = config or RegionConfig()
    if len(corpus.checkpoints) < 2:
        raise TooFewCheckpoints(
            f"need >= 2 checkpoints, corpus has {len(corpus.checkpoints)}"
        )
    return {
        pid: coords_from_series(pid, corpus.gold_probs(pid), config)
        for pid in corpus.ids
    }


def coords_to_jsonl(coords: Iterable[DataMapCoords]) -> str:
    """Serialize coordinates as JSON lines, one object per example."""
    lines = []
    for c in coords:
        lines.append(
            json.dumps(
                {
                    "id": c.id,
                    "confidence": c.confidence,
                    "variability": c.variability,
                    "region": c.region.value,
                }
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def write_coords_jsonl(coords: Mapping[str, DataMapCoords], path: str | Path) -> None:
    ordered = [coords[pid] for pid in sorted(coords)]
    Path(path).write_text(coords_to_jsonl(ordered), encoding="utf-8")
