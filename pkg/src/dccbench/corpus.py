"""Corpus ingestion and keyed access.

Loads three kinds of JSON-lines files — the dataset itself, one embedding
vector per example, and one label-probability file per training checkpoint —
validates them against each other, and exposes an immutable handle that the
rest of the workbench reads from.

File formats:
  dataset     {"id", "premise", "hypothesis", "gold_label", "annotations"?}
  embeddings  optional header {"dim": d}, then {"id", "vector": [d floats]}
  checkpoint  {"id", "probs": {"entailment": p, "neutral": p, "contradiction": p}}
"""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    MalformedRecord,
    MissingId,
    ProbabilityNotNormalized,
)

PROB_SUM_TOLERANCE = 1e-6


class Label(enum.Enum):
    """The three NLI labels, with a fixed order used for all tie-breaking."""

    ENTAILMENT = "entailment"
    NEUTRAL = "neutral"
    CONTRADICTION = "contradiction"

    @property
    def rank(self) -> int:
        """Position in the fixed order entailment < neutral < contradiction."""
        return _LABEL_RANK[self]

    @classmethod
    def from_string(cls, value: str) -> "Label":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"not an NLI label: {value!r}") from None


LABELS: tuple[Label, Label, Label] = (
    Label.ENTAILMENT,
    Label.NEUTRAL,
    Label.CONTRADICTION,
)
_LABEL_RANK = {label: i for i, label in enumerate(LABELS)}

# (p_entailment, p_neutral, p_contradiction), indexed by Label.rank
ProbTriple = tuple[float, float, float]


def argmax_label(probs: ProbTriple) -> Label:
    """Most probable label; exact ties go to the earlier label in the order."""
    best = LABELS[0]
    for label in LABELS[1:]:
        if probs[label.rank] > probs[best.rank]:
            best = label
    return best


@dataclass(frozen=True)
class DataPoint:
    """One NLI example: a premise/hypothesis pair with its gold label."""

    id: str
    premise: str
    hypothesis: str
    gold_label: Label
    annotations: tuple[Label, ...] = ()


@dataclass(frozen=True)
class CheckpointPredictionSet:
    """Label probabilities from one training checkpoint, keyed by example id."""

    checkpoint_index: int
    entries: dict[str, ProbTriple]

    def probs(self, record_id: str) -> ProbTriple:
        return self.entries[record_id]


@dataclass(frozen=True)
class CorpusHandle:
    """Immutable view of a loaded corpus.

    Embedding rows are ordered to match ``ids`` (ids sorted ascending), so
    the matrix can be shared with the neighbor index without copying.
    """

    points: dict[str, DataPoint]
    ids: tuple[str, ...]
    dim: int
    embeddings: np.ndarray  # shape (len(ids), dim), rows aligned with ids
    checkpoints: tuple[CheckpointPredictionSet, ...]
    _row_of: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        self.embeddings.setflags(write=False)
        self._row_of.update({pid: i for i, pid in enumerate(self.ids)})

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, record_id: str) -> bool:
        return record_id in self.points

    def point(self, record_id: str) -> DataPoint:
        return self.points[record_id]

    def vector(self, record_id: str) -> np.ndarray:
        return self.embeddings[self._row_of[record_id]]

    def row_index(self, record_id: str) -> int:
        return self._row_of[record_id]

    def gold_probs(self, record_id: str) -> list[float]:
        """P(gold label) at every checkpoint, in checkpoint order."""
        gold = self.points[record_id].gold_label
        return [cp.probs(record_id)[gold.rank] for cp in self.checkpoints]


def majority_vote(point: DataPoint) -> tuple[Label, float] | None:
    """Majority annotation label and its fraction, or None if unannotated.

    Ties between equally frequent labels go to the earlier label in the
    fixed order; the fraction is unaffected by the tie-break.
    """
    if not point.annotations:
        return None
    counts = Counter(point.annotations)
    top = max(counts.values())
    majority = min((lab for lab, c in counts.items() if c == top), key=lambda l: l.rank)
    return majority, top / len(point.annotations)


def majority_fraction(point: DataPoint) -> float | None:
    """Fraction of annotators agreeing on the most frequent label."""
    vote = majority_vote(point)
    return None if vote is None else vote[1]


# --- parsing helpers --------------------------------------------------------

def _iter_jsonl(path: Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_no, object) for every non-blank line; malformed lines raise."""
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(str(path), line_no, f"invalid JSON: {exc.msg}")
            if not isinstance(obj, dict):
                raise MalformedRecord(str(path), line_no, "line is not a JSON object")
            yield line_no, obj


def _require(obj: dict, key: str, path: Path, line_no: int):
    if key not in obj:
        raise MalformedRecord(str(path), line_no, f"missing field {key!r}")
    return obj[key]


def _parse_label(value, path: Path, line_no: int) -> Label:
    try:
        return Label.from_string(value)
    except (ValueError, TypeError):
        raise MalformedRecord(str(path), line_no, f"invalid label {value!r}")


def _read_dataset(path: Path) -> dict[str, DataPoint]:
    points: dict[str, DataPoint] = {}
    for line_no, obj in _iter_jsonl(path):
        record_id = _require(obj, "id", path, line_no)
        if not isinstance(record_id, str) or not record_id:
            raise MalformedRecord(str(path), line_no, "id must be a non-empty string")
        if record_id in points:
            raise MalformedRecord(str(path), line_no, f"duplicate id {record_id!r}")
        premise = _require(obj, "premise", path, line_no)
        hypothesis = _require(obj, "hypothesis", path, line_no)
        if not isinstance(premise, str) or not premise.strip():
            raise MalformedRecord(str(path), line_no, "premise is empty")
        if not isinstance(hypothesis, str) or not hypothesis.strip():
            raise MalformedRecord(str(path), line_no, "hypothesis is empty")
        gold = _parse_label(_require(obj, "gold_label", path, line_no), path, line_no)
        raw_annotations = obj.get("annotations", [])
        if not isinstance(raw_annotations, list):
            raise MalformedRecord(str(path), line_no, "annotations must be a list")
        annotations = tuple(_parse_label(a, path, line_no) for a in raw_annotations)
        points[record_id] = DataPoint(
            id=record_id,
            premise=premise,
            hypothesis=hypothesis,
            gold_label=gold,
            annotations=annotations,
        )
    return points


def _read_embeddings(path: Path) -> tuple[int, dict[str, list[float]]]:
    vectors: dict[str, list[float]] = {}
    declared_dim: int | None = None
    for line_no, obj in _iter_jsonl(path):
        if "id" not in obj and "dim" in obj:
            # header object, only meaningful on the first line
            if vectors or declared_dim is not None:
                raise MalformedRecord(str(path), line_no, "header after records")
            dim = obj["dim"]
            if not isinstance(dim, int) or dim < 1:
                raise MalformedRecord(str(path), line_no, f"invalid dim {dim!r}")
            declared_dim = dim
            continue
        record_id = _require(obj, "id", path, line_no)
        if record_id in vectors:
            raise MalformedRecord(str(path), line_no, f"duplicate id {record_id!r}")
        vector = _require(obj, "vector", path, line_no)
        if not isinstance(vector, list) or not vector:
            raise MalformedRecord(str(path), line_no, "vector must be a non-empty list")
        values: list[float] = []
        for entry in vector:
            if not isinstance(entry, (int, float)) or isinstance(entry, bool):
                raise MalformedRecord(str(path), line_no, "vector entries must be numbers")
            entry = float(entry)
            if not math.isfinite(entry):
                raise MalformedRecord(str(path), line_no, "vector entry not finite")
            values.append(entry)
        if declared_dim is None:
            declared_dim = len(values)
        if len(values) != declared_dim:
            raise DimensionMismatch(
                f"{path}:{line_no}: vector for {record_id!r} has dimension "
                f"{len(values)}, expected {declared_dim}"
            )
        if not any(v != 0.0 for v in values):
            raise MalformedRecord(str(path), line_no, f"zero-norm vector for {record_id!r}")
        vectors[record_id] = values
    if declared_dim is None:
        raise MalformedRecord(str(path), 0, "embeddings file is empty")
    return declared_dim, vectors


def _read_checkpoint(path: Path, checkpoint_index: int) -> CheckpointPredictionSet:
    entries: dict[str, ProbTriple] = {}
    for line_no, obj in _iter_jsonl(path):
        record_id = _require(obj, "id", path, line_no)
        if record_id in entries:
            raise MalformedRecord(str(path), line_no, f"duplicate id {record_id!r}")
        probs = _require(obj, "probs", path, line_no)
        if not isinstance(probs, dict):
            raise MalformedRecord(str(path), line_no, "probs must be an object")
        triple = []
        for label in LABELS:
            if label.value not in probs:
                raise MalformedRecord(str(path), line_no, f"probs missing {label.value!r}")
            p = probs[label.value]
            if not isinstance(p, (int, float)) or isinstance(p, bool) or not math.isfinite(p):
                raise MalformedRecord(str(path), line_no, f"invalid probability {p!r}")
            p = float(p)
            if not 0.0 <= p <= 1.0:
                raise MalformedRecord(str(path), line_no, f"probability {p} outside [0, 1]")
            triple.append(p)
        total = math.fsum(triple)
        if abs(total - 1.0) > PROB_SUM_TOLERANCE:
            raise ProbabilityNotNormalized(
                f"{path}:{line_no}: probs for {record_id!r} sum to {total!r}"
            )
        entries[record_id] = (triple[0], triple[1], triple[2])
    return CheckpointPredictionSet(checkpoint_index=checkpoint_index, entries=entries)


def load_corpus(
    dataset_path: str | Path,
    embeddings_path: str | Path,
    checkpoint_paths: Sequence[str | Path],
) -> CorpusHandle:
    """Load and cross-validate all corpus files.

    Every data point must have exactly one embedding and one probability
    triple per checkpoint; any id appearing in one file but not another
    raises MissingId. Probabilities are validated, never renormalized.
    """
    dataset_path = Path(dataset_path)
    embeddings_path = Path(embeddings_path)
    points = _read_dataset(dataset_path)
    dim, vectors = _read_embeddings(embeddings_path)
    checkpoints = tuple(
        _read_checkpoint(Path(p), i) for i, p in enumerate(checkpoint_paths)
    )

    point_ids = set(points)
    for record_id in sorted(point_ids - set(vectors)):
        raise MissingId(record_id, f"no embedding in {embeddings_path}")
    for record_id in sorted(set(vectors) - point_ids):
        raise MissingId(record_id, f"embedding has no data point ({embeddings_path})")
    for cp, path in zip(checkpoints, checkpoint_paths):
        cp_ids = set(cp.entries)
        for record_id in sorted(point_ids - cp_ids):
            raise MissingId(record_id, f"no probabilities in {path}")
        for record_id in sorted(cp_ids - point_ids):
            raise MissingId(record_id, f"prediction has no data point ({path})")

    ids = tuple(sorted(points))
    matrix = np.array([vectors[pid] for pid in ids], dtype=np.float64)
    if matrix.size == 0:
        matrix = matrix.reshape(0, dim)
    return CorpusHandle(
        points={pid: points[pid] for pid in ids},
        ids=ids,
        dim=dim,
        embeddings=matrix,
        checkpoints=checkpoints,
    )


def save_corpus(
    handle: CorpusHandle,
    dataset_path: str | Path,
    embeddings_path: str | Path,
    checkpoint_paths: Sequence[str | Path],
) -> None:
    """Write a corpus back to disk in the load_corpus formats (ids sorted)."""
    if len(checkpoint_paths) != len(handle.checkpoints):
        raise ValueError(
            f"need {len(handle.checkpoints)} checkpoint paths, got {len(checkpoint_paths)}"
        )
    with open(dataset_path, "w", encoding="utf-8") as fh:
        for pid in handle.ids:
            point = handle.point(pid)
            record = {
                "id": point.id,
                "premise": point.premise,
                "hypothesis": point.hypothesis,
                "gold_label": point.gold_label.value,
            }
            if point.annotations:
                record["annotations"] = [a.value for a in point.annotations]
            fh.write(json.dumps(record) + "\n")
    with open(embeddings_path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dim": handle.dim}) + "\n")
        for pid in handle.ids:
            fh.write(json.dumps({"id": pid, "vector": list(handle.vector(pid))}) + "\n")
    for cp, path in zip(handle.checkpoints, checkpoint_paths):
        with open(path, "w", encoding="utf-8") as fh:
            for pid in handle.ids:
                triple = cp.probs(pid)
                probs = {label.value: triple[label.rank] for label in LABELS}
                fh.write(json.dumps({"id": pid, "probs": probs}) + "\n")
