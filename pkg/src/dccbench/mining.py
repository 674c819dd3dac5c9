"""Mining data-constrained counterfactuals.

A point qualifies when all three conditions hold:

  (i)   at least n_diff of its k nearest neighbors have a different gold
        label at cosine similarity >= sim_min,
  (ii)  its data-map region is hard_to_learn or ambiguous,
  (iii) it carries >= min_annotations annotations whose majority label
        equals the gold label with agreement fraction >= agreement_min
        (filters likely mislabels).

A bare "similar neighbor exists" test would be vacuous without a floor, so
both the neighborhood size k and the similarity floor sim_min are explicit
configuration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import CorpusHandle, majority_vote
from .datamap import DCC_ELIGIBLE_REGIONS, DataMapCoords
from .errors import ConfigInvalid, NotADcc
from .neighbors import Neighbor, NeighborIndex, NeighborSet

DEFAULT_DISPLAY_NEIGHBORS = 4


@dataclass(frozen=True)
class MinerConfig:
    k: int = 10
    sim_min: float = 0.9
    n_diff: int = 1
    agreement_min: float = 0.75
    min_annotations: int = 3

    def __post_init__(self) -> None:
        if not self.k >= self.n_diff >= 1:
            raise ConfigInvalid(f"need k >= n_diff >= 1, got k={self.k}, n_diff={self.n_diff}")
        if not 0.0 < self.sim_min < 1.0:
            raise ConfigInvalid(f"need 0 < sim_min < 1, got {self.sim_min}")
        if not 0.5 <= self.agreement_min <= 1.0:
            raise ConfigInvalid(f"need 0.5 <= agreement_min <= 1, got {self.agreement_min}")
        if self.min_annotations < 1:
            raise ConfigInvalid(f"need min_annotations >= 1, got {self.min_annotations}")


@dataclass(frozen=True)
class DccRecord:
    id: str
    coords: DataMapCoords
    neighbors: NeighborSet
    triggering_neighbors: tuple[Neighbor, ...]
    majority_fraction: float


class DccMiner:
    """Evaluates the three DCC conditions over a corpus.

    Mining is deterministic: identical inputs and config produce an
    identical ordered record list (confidence ascending, id ascending).
    """

    def __init__(
        self,
        corpus: CorpusHandle,
        coords: Mapping[str, DataMapCoords],
        index: NeighborIndex,
        config: MinerConfig | None = None,
        display_k: int = DEFAULT_DISPLAY_NEIGHBORS,
    ):
        self._corpus = corpus
        self._coords = coords
        self._index = index
        self._config = config or MinerConfig()
        self._display_k = display_k
        self._records: dict[str, DccRecord] | None = None

    @property
    def config(self) -> MinerConfig:
        return self._config

    def _evaluate(self, record_id: str) -> DccRecord | None:
        corpus = self._corpus
        config = self._config
        point = corpus.point(record_id)

        coords = self._coords[record_id]
        if coords.region not in DCC_ELIGIBLE_REGIONS:
            return None

        if len(point.annotations) < config.min_annotations:
            return None
        vote = majority_vote(point)
        if vote is None:
            return None
        majority_label, fraction = vote
        if majority_label is not point.gold_label or fraction < config.agreement_min:
            return None

        k_eff = min(config.k, len(corpus) - 1)
        if k_eff < 1:
            return None
        triggering = tuple(
            nb
            for nb in self._index.knn(record_id, k_eff)
            if nb.label is not point.gold_label and nb.similarity >= config.sim_min
        )
        if len(triggering) < config.n_diff:
            return None

        display_k = min(self._display_k, len(corpus) - 1)
        return DccRecord(
            id=record_id,
            coords=coords,
            neighbors=self._index.label_split(record_id, display_k),
            triggering_neighbors=triggering,
            majority_fraction=fraction,
        )

    def mine(self) -> list[DccRecord]:
        """All DCCs, ordered by (confidence asc, id asc) — hardest first."""
        if self._records is None:
            found = {}
            for record_id in self._corpus.ids:
                record = self._evaluate(record_id)
                if record is not None:
                    found[record_id] = record
            self._records = found
        ordered = sorted(
            self._records.values(), key=lambda r: (r.coords.confidence, r.id)
        )
        return ordered

    def detail(self, record_id: str) -> DccRecord:
        """Full record for one mined id; NotADcc for anything else."""
        if self._records is None:
            self.mine()
        assert self._records is not None
        if record_id not in self._records:
            raise NotADcc(f"{record_id!r} is not a DCC under the current config")
        return self._records[record_id]

    def dcc_ids(self) -> frozenset[str]:
        if self._records is None:
            self.mine()
        assert self._records is not None
        return frozenset(self._records)


def mine_dccs(
    corpus: CorpusHandle,
    coords: Mapping[str, DataMapCoords],
    index: NeighborIndex,
    config: MinerConfig | None = None,
    display_k: int = DEFAULT_DISPLAY_NEIGHBORS,
) -> list[DccRecord]:
    """One-shot mining without keeping the miner around."""
    return DccMiner(corpus, coords, index, config, display_k).mine()


def _neighbor_to_dict(neighbor: Neighbor) -> dict:
    return {
        "id": neighbor.id,
        "similarity": neighbor.similarity,
        "label": neighbor.label.value,
    }


def dcc_to_dict(record: DccRecord) -> dict:
    """JSON-ready view of a record, stable field order."""
    return {
        "id": record.id,
        "confidence": record.coords.confidence,
        "variability": record.coords.variability,
        "region": record.coords.region.value,
        "majority_fraction": record.majority_fraction,
        "triggering_neighbors": [_neighbor_to_dict(n) for n in record.triggering_neighbors],
        "different_label_neighbors": [
            _neighbor_to_dict(n) for n in record.neighbors.different_label
        ],
        "same_label_neighbors": [_neighbor_to_dict(n) for n in record.neighbors.same_label],
    }


def dccs_to_jsonl(records: Iterable[DccRecord]) -> str:
    lines = [json.dumps(dcc_to_dict(r)) for r in records]
    return "\n".join(lines) + ("\n" if lines else "")
