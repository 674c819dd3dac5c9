"""Data-map location estimates for new examples, without retraining.

One scorer per saved checkpoint returns a label-probability triple for the
candidate pair; confidence/variability over P(user label) then place the
example on the map exactly like corpus points. Estimation is all-or-nothing:
if any scorer fails, no partial average is produced.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Protocol, Sequence

import httpx

from .corpus import Label, ProbTriple, LABELS, PROB_SUM_TOLERANCE
from .datamap import Region, RegionConfig, classify_region, mean_population_std
from .errors import ConfigInvalid, ScorerUnavailable


@dataclass(frozen=True)
class ScorerEndpoint:
    checkpoint_index: int
    target: str  # HTTP(S) URL or "mock:<seed>"


@dataclass(frozen=True)
class LocationEstimate:
    confidence: float
    variability: float
    region: Region
    per_checkpoint: tuple[ProbTriple, ...]  # checkpoint order, for UI display

    def to_dict(self) -> dict:
        return {
            "confidence": self.confidence,
            "variability": self.variability,
            "region": self.region.value,
            "per_checkpoint": [list(triple) for triple in self.per_checkpoint],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LocationEstimate":
        return cls(
            confidence=data["confidence"],
            variability=data["variability"],
            region=Region(data["region"]),
            per_checkpoint=tuple(
                (float(t[0]), float(t[1]), float(t[2])) for t in data["per_checkpoint"]
            ),
        )


class Scorer(Protocol):
    """One saved checkpoint's view of an arbitrary premise/hypothesis pair."""

    def score(self, premise: str, hypothesis: str) -> ProbTriple: ...


class HttpScorer:
    """POST {"premise", "hypothesis"} -> {"probs": {label: p, ...}}."""

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url
        self.timeout = timeout

    def score(self, premise: str, hypothesis: str) -> ProbTriple:
        try:
            response = httpx.post(
                self.url,
                json={"premise": premise, "hypothesis": hypothesis},
                timeout=self.timeout,
            )
            response.raise_for_status()
            body = response.json()
        except httpx.HTTPError as exc:
            raise ConnectionError(f"scorer at {self.url}: {exc}") from exc
        except ValueError:
            raise ConnectionError(f"scorer at {self.url} returned non-JSON body")
        probs = body.get("probs") if isinstance(body, dict) else None
        if not isinstance(probs, dict):
            raise ConnectionError(f"scorer at {self.url} response missing 'probs'")
        try:
            triple = tuple(float(probs[label.value]) for label in LABELS)
        except (KeyError, TypeError, ValueError):
            raise ConnectionError(f"scorer at {self.url} returned malformed probs")
        if abs(math.fsum(triple) - 1.0) > PROB_SUM_TOLERANCE:
            raise ConnectionError(f"scorer at {self.url} probs not normalized")
        return triple  # type: ignore[return-value]


class MockScorer:
    """Deterministic scorer: hashes (premise, hypothesis, seed) to a triple."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def score(self, premise: str, hypothesis: str) -> ProbTriple:
        digest = hashlib.sha256(f"{self.seed}|{premise}|{hypothesis}".encode("utf-8")).digest()
        weights = [
            1 + int.from_bytes(digest[i * 4 : (i + 1) * 4], "big") % 1000 for i in range(3)
        ]
        total = sum(weights)
        return (weights[0] / total, weights[1] / total, weights[2] / total)


def scorer_from_target(target: str) -> Scorer:
    if target.startswith("mock:"):
        return MockScorer(seed=int(target.split(":", 1)[1]))
    return HttpScorer(target)


def _validate_endpoints(scorers: Sequence[ScorerEndpoint]) -> list[ScorerEndpoint]:
    if len(scorers) < 2:
        raise ConfigInvalid(f"need >= 2 scorers, got {len(scorers)}")
    ordered = sorted(scorers, key=lambda s: s.checkpoint_index)
    indices = [s.checkpoint_index for s in ordered]
    if indices != list(range(len(ordered))):
        raise ConfigInvalid(f"checkpoint indices must be 0..n-1 without gaps, got {indices}")
    return ordered


def estimate_location(
    premise: str,
    hypothesis: str,
    user_label: Label,
    scorers: Sequence[ScorerEndpoint],
    config: RegionConfig | None = None,
    parallelism: int = 4,
    scorer_impls: Sequence[Scorer] | None = None,
) -> LocationEstimate:
    """Query every checkpoint scorer and aggregate into a map location.

    Scorers are aggregated in checkpoint-index order regardless of the order
    they were passed (or finished) in, so permuting the scorer list cannot
    change the result. Any scorer failure aborts the whole estimate with
    ScorerUnavailable naming the checkpoint.

    scorer_impls: optional pre-built Scorer per endpoint (matching order);
    defaults to resolving each endpoint's target.
    """
    config = config or RegionConfig()
    if not premise.strip() or not hypothesis.strip():
        raise ValueError("premise and hypothesis must be non-empty")
    by_target = dict(zip(scorers, scorer_impls)) if scorer_impls is not None else {}
    ordered = _validate_endpoints(scorers)
    impls = [by_target.get(ep) or scorer_from_target(ep.target) for ep in ordered]

    def query(item: tuple[ScorerEndpoint, Scorer]) -> ProbTriple:
        endpoint, scorer = item
        try:
            return scorer.score(premise, hypothesis)
        except Exception as exc:
            raise ScorerUnavailable(endpoint.checkpoint_index, str(exc)) from exc

    workers = max(1, min(parallelism, len(ordered)))
    if workers == 1:
        triples = [query(item) for item in zip(ordered, impls)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            triples = list(pool.map(query, zip(ordered, impls)))

    series = [triple[user_label.rank] for triple in triples]
    confidence, variability = mean_population_std(series)
    return LocationEstimate(
        confidence=confidence,
        variability=variability,
        region=classify_region(confidence, variability, config),
        per_checkpoint=tuple(triples),
    )


class Estimator:
    """Session-scoped estimator with a (premise, hypothesis, label) cache,
    keeping the refine loop responsive on repeated identical requests."""

    def __init__(
        self,
        scorers: Sequence[ScorerEndpoint],
        config: RegionConfig | None = None,
        parallelism: int = 4,
        scorer_impls: Sequence[Scorer] | None = None,
    ):
        self.scorers = _validate_endpoints(list(scorers))
        if scorer_impls is not None:
            ordered = sorted(
                zip(scorers, scorer_impls), key=lambda pair: pair[0].checkpoint_index
            )
            scorer_impls = [impl for _, impl in ordered]
        self._impls = scorer_impls
        self.config = config or RegionConfig()
        self.parallelism = parallelism
        self._cache: dict[tuple[str, str, Label], LocationEstimate] = {}

    def estimate(self, premise: str, hypothesis: str, user_label: Label) -> LocationEstimate:
        key = (premise, hypothesis, user_label)
        if key not in self._cache:
            self._cache[key] = estimate_location(
                premise,
                hypothesis,
                user_label,
                self.scorers,
                self.config,
                self.parallelism,
                scorer_impls=self._impls,
            )
        return self._cache[key]
