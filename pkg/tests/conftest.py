"""Shared fixture corpora.

Corpora are described as plain row dicts and written to JSON-lines files in
a temp directory, exercising the real loaders everywhere. Embeddings are
2-D unit vectors given by an angle in degrees, so pairwise cosine
similarity is just cos(angle difference) and fixtures can plant exact
neighborhood structure.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from dccbench.corpus import load_corpus


def triple_for(label: str, gold_p: float) -> dict[str, float]:
    """Probability triple putting gold_p on `label`, remainder split evenly."""
    rest = (1.0 - gold_p) / 2.0
    triple = {"entailment": rest, "neutral": rest, "contradiction": rest}
    triple[label] = gold_p
    return triple


def vector_at(angle_deg: float) -> list[float]:
    rad = math.radians(angle_deg)
    return [math.cos(rad), math.sin(rad)]


def write_corpus_files(tmp_path: Path, rows: list[dict], subdir: str = "corpus"):
    """Write dataset/embeddings/checkpoint files for the given rows.

    Row keys: id, label, annotations (list[str]), gold_probs (list[float]),
    and either angle (degrees) or vector; optional premise/hypothesis.
    Returns (dataset_path, embeddings_path, [checkpoint paths]).
    """
    base = tmp_path / subdir
    base.mkdir(parents=True, exist_ok=True)
    n_checkpoints = len(rows[0]["gold_probs"])
    dataset = base / "dataset.jsonl"
    embeddings = base / "embeddings.jsonl"
    checkpoints = [base / f"checkpoint_{i}.jsonl" for i in range(n_checkpoints)]

    with open(dataset, "w", encoding="utf-8") as fh:
        for row in rows:
            record = {
                "id": row["id"],
                "premise": row.get("premise", f"A person described by {row['id']} stands outside."),
                "hypothesis": row.get("hypothesis", f"Someone in {row['id']} is outdoors."),
                "gold_label": row["label"],
            }
            if row.get("annotations"):
                record["annotations"] = row["annotations"]
            fh.write(json.dumps(record) + "\n")

    with open(embeddings, "w", encoding="utf-8") as fh:
        first_vec = row_vector(rows[0])
        fh.write(json.dumps({"dim": len(first_vec)}) + "\n")
        for row in rows:
            fh.write(json.dumps({"id": row["id"], "vector": row_vector(row)}) + "\n")

    for i, path in enumerate(checkpoints):
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                probs = triple_for(row["label"], row["gold_probs"][i])
                fh.write(json.dumps({"id": row["id"], "probs": probs}) + "\n")

    return dataset, embeddings, checkpoints


def row_vector(row: dict) -> list[float]:
    return row["vector"] if "vector" in row else vector_at(row["angle"])


def load_rows(tmp_path: Path, rows: list[dict], subdir: str = "corpus"):
    return load_corpus(*write_corpus_files(tmp_path, rows, subdir))


# --- the 8-point mining fixture ----------------------------------------------
#
# Exactly one point (m-seed) satisfies all three DCC conditions under the
# default miner config. Every other point fails at least one:
#   m-twin      easy_to_learn region (but sits 10 deg from m-seed: the trigger)
#   m-lowagree  annotation agreement 0.5 < 0.75
#   m-fewann    only 1 annotation < 3
#   m-other     region "other"
#   m-nosim     no different-label neighbor at similarity >= 0.9
#   m-contra    no different-label neighbor at similarity >= 0.9
#   m-contra2   easy_to_learn region

def mining_rows(
    seed_probs: list[float] | None = None,
    seed_annotations: list[str] | None = None,
    twin_angle: float = 10.0,
) -> list[dict]:
    return [
        {
            "id": "m-seed",
            "angle": 0.0,
            "label": "neutral",
            "annotations": seed_annotations or ["neutral", "neutral", "neutral", "entailment"],
            "gold_probs": seed_probs or [0.2, 0.3],
            "premise": "A large group of people walks toward something, most carrying backpacks.",
            "hypothesis": "A group of people moves toward something that requires a backpack.",
        },
        {
            "id": "m-twin",
            "angle": twin_angle,
            "label": "entailment",
            "annotations": ["entailment"] * 4,
            "gold_probs": [0.9, 0.95],
            "premise": "A large group of people with backpacks walks toward a trailhead.",
            "hypothesis": "A group of people is moving toward something.",
        },
        {
            "id": "m-lowagree",
            "angle": 20.0,
            "label": "neutral",
            "annotations": ["neutral", "neutral", "entailment", "entailment"],
            "gold_probs": [0.2, 0.25],
            "premise": "Several hikers walk along a ridge carrying heavy packs.",
            "hypothesis": "The hikers are carrying camping gear.",
        },
        {
            "id": "m-fewann",
            "angle": 30.0,
            "label": "neutral",
            "annotations": ["neutral"],
            "gold_probs": [0.3, 0.35],
            "premise": "A crowd gathers near the mountain path with bags.",
            "hypothesis": "The crowd is waiting for a guide.",
        },
        {
            "id": "m-other",
            "angle": 40.0,
            "label": "neutral",
            "annotations": ["neutral"] * 4,
            "gold_probs": [0.6, 0.7],
            "premise": "People in hiking boots stand at the base of a hill.",
            "hypothesis": "The people plan to climb the hill.",
        },
        {
            "id": "m-nosim",
            "angle": 90.0,
            "label": "neutral",
            "annotations": ["neutral"] * 3,
            "gold_probs": [0.2, 0.3],
            "premise": "A chef plates a dessert in a busy kitchen.",
            "hypothesis": "The chef is preparing the final course.",
        },
        {
            "id": "m-contra",
            "angle": 170.0,
            "label": "contradiction",
            "annotations": ["contradiction"] * 3 + ["neutral"],
            "gold_probs": [0.4, 0.6],
            "premise": "A man wearing only red pants does a trick on a ladder.",
            "hypothesis": "The man is wearing a black shirt.",
        },
        {
            "id": "m-contra2",
            "angle": 180.0,
            "label": "contradiction",
            "annotations": ["contradiction"] * 3,
            "gold_probs": [0.9, 0.9],
            "premise": "A woman sleeps on a couch with a cat.",
            "hypothesis": "The woman is running a marathon.",
        },
    ]


# --- the golden-prompt fixture ------------------------------------------------
#
# g-dcc is mined (hard region, unanimous annotations, g-trigger 5 deg away
# with a different label). Its four same-label neighbors sit at cosine
# similarities 0.80 / 0.85 / 0.90 / 0.95 exactly by construction.

_GOLDEN_NEIGHBORS = [
    ("g-n80", 0.80, "A vendor arranges fruit at a market stall.",
     "The vendor is selling apples."),
    ("g-n85", 0.85, "A child rides a scooter down the sidewalk.",
     "The child is racing a friend."),
    ("g-n90", 0.90, "A woman reads a novel on the subway.",
     "She is reading a mystery novel."),
    ("g-n95", 0.95, "Two men carry a sofa up the stairs.",
     "The men are professional movers."),
]

_SECOND_LABEL = {"neutral": "entailment", "entailment": "neutral",
                 "contradiction": "neutral"}


def golden_rows(seed_label: str = "neutral") -> list[dict]:
    other = _SECOND_LABEL[seed_label]
    rows = [
        {
            "id": "g-dcc",
            "vector": [1.0, 0.0],
            "label": seed_label,
            "annotations": [seed_label] * 4,
            "gold_probs": [0.25, 0.35],
            "premise": "A large group of hikers walks toward the summit, most carrying backpacks.",
            "hypothesis": "The group moves toward something that requires climbing gear.",
        },
        {
            "id": "g-trigger",
            "angle": 5.0,
            "label": other,
            "annotations": [other] * 4,
            "gold_probs": [0.9, 0.95],
            "premise": "A hiker with a backpack walks toward the summit.",
            "hypothesis": "A person is hiking.",
        },
    ]
    for name, sim, premise, hypothesis in _GOLDEN_NEIGHBORS:
        rows.append(
            {
                "id": name,
                "vector": [sim, math.sqrt(1.0 - sim * sim)],
                "label": seed_label,
                "annotations": [],
                "gold_probs": [0.9, 0.95],
                "premise": premise,
                "hypothesis": hypothesis,
            }
        )
    return rows


@pytest.fixture
def mining_corpus(tmp_path):
    return load_rows(tmp_path, mining_rows(), "mining")


@pytest.fixture
def golden_corpus(tmp_path):
    return load_rows(tmp_path, golden_rows(), "golden")


class ScriptedScorer:
    """Test scorer returning pre-scripted triples keyed by (premise, hypothesis),
    with an optional default."""

    def __init__(self, script=None, default=(1.0, 0.0, 0.0)):
        self.script = dict(script or {})
        self.default = default
        self.calls = 0

    def score(self, premise, hypothesis):
        self.calls += 1
        return self.script.get((premise, hypothesis), self.default)


class FailingScorer:
    def score(self, premise, hypothesis):
        raise ConnectionError("scripted outage")


class ScriptedSuggestionClient:
    """Returns a fixed list of completions regardless of prompt."""

    def __init__(self, completions):
        self.completions = list(completions)
        self.calls = 0

    def complete(self, prompt, n):
        self.calls += 1
        return self.completions[:n]
