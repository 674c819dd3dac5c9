"""Exact k-nearest-neighbor retrieval by cosine similarity.

A full scan over unit-normalized embedding rows — no approximation, so
results are deterministic and reproducible. Ordering is always
(similarity descending, id ascending); the query point is never its own
neighbor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import CorpusHandle, Label
from .errors import DimensionMismatch, KTooLarge, UnknownId, ZeroNorm


@dataclass(frozen=True)
class Neighbor:
    id: str
    similarity: float
    label: Label


@dataclass(frozen=True)
class NeighborSet:
    """Label-filtered neighbor views of one query point.

    ``different_label`` holds the top neighbors whose gold label differs
    from the query's, ``same_label`` those sharing it; both sorted by
    (similarity desc, id asc).
    """

    query_id: str
    different_label: tuple[Neighbor, ...]
    same_label: tuple[Neighbor, ...]


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    """dot(a, b) / (|a| * |b|), clamped to [-1, 1] against rounding."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"dimensions differ: {va.shape[0]} vs {vb.shape[0]}")
    norm_a = float(np.linalg.norm(va))
    norm_b = float(np.linalg.norm(vb))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroNorm("cosine similarity undefined for zero-norm vector")
    value = float(np.dot(va, vb)) / (norm_a * norm_b)
    return min(1.0, max(-1.0, value))


class NeighborIndex:
    """Immutable cosine-similarity index over a corpus's embeddings."""

    def __init__(self, corpus: CorpusHandle):
        self._corpus = corpus
        self._ids = np.array(corpus.ids)
        norms = np.linalg.norm(corpus.embeddings, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            raise ZeroNorm("corpus contains a zero-norm embedding")
        self._unit = corpus.embeddings / norms
        self._unit.setflags(write=False)

    def __len__(self) -> int:
        return len(self._ids)

    def similarities(self, query_id: str) -> np.ndarray:
        """Cosine similarity of the query against every corpus row."""
        if query_id not in self._corpus:
            raise UnknownId(f"unknown id {query_id!r}")
        row = self._corpus.row_index(query_id)
        sims = self._unit @ self._unit[row]
        return np.clip(sims, -1.0, 1.0)

    def _ranked(self, query_id: str) -> list[Neighbor]:
        """All other points ordered by (similarity desc, id asc)."""
        sims = self.similarities(query_id)
        row = self._corpus.row_index(query_id)
        order = np.lexsort((self._ids, -sims))
        ranked = []
        for idx in order:
            if idx == row:
                continue
            pid = str(self._ids[idx])
            ranked.append(
                Neighbor(
                    id=pid,
                    similarity=float(sims[idx]),
                    label=self._corpus.point(pid).gold_label,
                )
            )
        return ranked

    def knn(self, query_id: str, k: int) -> list[Neighbor]:
        """The k most similar other points, fully ordered."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if query_id not in self._corpus:
            raise UnknownId(f"unknown id {query_id!r}")
        if k > len(self._ids) - 1:
            raise KTooLarge(f"k={k} but corpus has {len(self._ids)} points")
        return self._ranked(query_id)[:k]

    def label_split(self, query_id: str, k_each: int) -> NeighborSet:
        """Top k_each different-label and same-label neighbors.

        Either list may come back shorter than k_each when the corpus does
        not contain enough points with that label; that is not an error.
        """
        if k_each < 1:
            raise ValueError(f"k_each must be >= 1, got {k_each}")
        if query_id not in self._corpus:
            raise UnknownId(f"unknown id {query_id!r}")
        if k_each > len(self._ids) - 1:
            raise KTooLarge(f"k_each={k_each} but corpus has {len(self._ids)} points")
        gold = self._corpus.point(query_id).gold_label
        different: list[Neighbor] = []
        same: list[Neighbor] = []
        for neighbor in self._ranked(query_id):
            bucket = same if neighbor.label is gold else different
            if len(bucket) < k_each:
                bucket.append(neighbor)
            if len(same) == k_each and len(different) == k_each:
                break
        return NeighborSet(
            query_id=query_id,
            different_label=tuple(different),
            same_label=tuple(same),
        )
