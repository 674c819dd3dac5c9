from __future__ import annotations

import json
import random

import pytest

from dccbench.corpus import (
    Label,
    load_corpus,
    majority_fraction,
    majority_vote,
    save_corpus,
    DataPoint,
    argmax_label,
)
from dccbench.errors import (
    DimensionMismatch,
    MalformedRecord,
    MissingId,
    ProbabilityNotNormalized,
)

from conftest import load_rows, write_corpus_files

THREE_ROWS = [
    {"id": "x1", "vector": [1.0, 0.0, 0.0, 0.0], "label": "entailment",
     "annotations": ["entailment"] * 3, "gold_probs": [0.9, 0.8]},
    {"id": "x2", "vector": [0.0, 1.0, 0.0, 0.0], "label": "neutral",
     "annotations": [], "gold_probs": [0.5, 0.6]},
    {"id": "x3", "vector": [0.0, 0.0, 1.0, 1.0], "label": "contradiction",
     "annotations": ["contradiction", "neutral"], "gold_probs": [0.2, 0.4]},
]


def test_load_three_point_fixture(tmp_path):
    corpus = load_rows(tmp_path, THREE_ROWS)
    assert len(corpus) == 3
    assert corpus.ids == ("x1", "x2", "x3")
    assert corpus.dim == 4
    assert len(corpus.checkpoints) == 2
    point = corpus.point("x1")
    assert point.gold_label is Label.ENTAILMENT
    assert corpus.vector("x3").tolist() == [0.0, 0.0, 1.0, 1.0]
    assert corpus.gold_probs("x2") == [0.5, 0.6]


def test_missing_embedding_id_raises(tmp_path):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    kept = [
        line
        for line in embeddings.read_text().splitlines()
        if '"x2"' not in line
    ]
    embeddings.write_text("\n".join(kept) + "\n")
    with pytest.raises(MissingId) as excinfo:
        load_corpus(dataset, embeddings, checkpoints)
    assert excinfo.value.record_id == "x2"


def test_missing_checkpoint_id_raises(tmp_path):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    kept = [
        line
        for line in checkpoints[1].read_text().splitlines()
        if '"x3"' not in line
    ]
    checkpoints[1].write_text("\n".join(kept) + "\n")
    with pytest.raises(MissingId) as excinfo:
        load_corpus(dataset, embeddings, checkpoints)
    assert excinfo.value.record_id == "x3"


def test_unnormalized_probs_raise(tmp_path):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    lines = checkpoints[0].read_text().splitlines()
    bad = json.dumps(
        {"id": "x1", "probs": {"entailment": 0.5, "neutral": 0.5, "contradiction": 0.5}}
    )
    lines[0] = bad
    checkpoints[0].write_text("\n".join(lines) + "\n")
    with pytest.raises(ProbabilityNotNormalized):
        load_corpus(dataset, embeddings, checkpoints)


def test_probs_not_renormalized_silently(tmp_path):
    # 0.998 total is outside the 1e-6 tolerance: fail loudly, never rescale
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    lines = checkpoints[0].read_text().splitlines()
    lines[0] = json.dumps(
        {"id": "x1", "probs": {"entailment": 0.5, "neutral": 0.3, "contradiction": 0.198}}
    )
    checkpoints[0].write_text("\n".join(lines) + "\n")
    with pytest.raises(ProbabilityNotNormalized):
        load_corpus(dataset, embeddings, checkpoints)


@pytest.mark.parametrize(
    "reason,line",
    [
        ("not json", "{nope"),
        ("missing premise", '{"id": "z", "hypothesis": "h", "gold_label": "neutral"}'),
        ("blank premise", '{"id": "z", "premise": "  ", "hypothesis": "h", "gold_label": "neutral"}'),
        ("bad label", '{"id": "z", "premise": "p", "hypothesis": "h", "gold_label": "maybe"}'),
        ("bad annotation", '{"id": "z", "premise": "p", "hypothesis": "h", "gold_label": "neutral", "annotations": ["yes"]}'),
    ],
)
def test_malformed_dataset_lines_carry_line_number(tmp_path, reason, line):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    with open(dataset, "a", encoding="utf-8") as fh:
        fh.write(line + "\n")
    with pytest.raises(MalformedRecord) as excinfo:
        load_corpus(dataset, embeddings, checkpoints)
    assert excinfo.value.line_no == 4


def test_duplicate_dataset_id_rejected(tmp_path):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    first = dataset.read_text().splitlines()[0]
    with open(dataset, "a", encoding="utf-8") as fh:
        fh.write(first + "\n")
    with pytest.raises(MalformedRecord) as excinfo:
        load_corpus(dataset, embeddings, checkpoints)
    assert "duplicate" in excinfo.value.reason


def test_embedding_dimension_mismatch(tmp_path):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    lines = embeddings.read_text().splitlines()
    lines[1] = json.dumps({"id": "x1", "vector": [1.0, 0.0]})
    embeddings.write_text("\n".join(lines) + "\n")
    with pytest.raises(DimensionMismatch):
        load_corpus(dataset, embeddings, checkpoints)


def test_embedding_dim_inferred_without_header(tmp_path):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    lines = embeddings.read_text().splitlines()
    embeddings.write_text("\n".join(lines[1:]) + "\n")  # drop the {"dim": 4} header
    corpus = load_corpus(dataset, embeddings, checkpoints)
    assert corpus.dim == 4


@pytest.mark.parametrize(
    "vector", [[1.0, float("nan"), 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]]
)
def test_bad_vectors_rejected(tmp_path, vector):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    lines = embeddings.read_text().splitlines()
    lines[1] = json.dumps({"id": "x1", "vector": vector}).replace("NaN", "1e999")
    embeddings.write_text("\n".join(lines) + "\n")
    with pytest.raises((MalformedRecord, DimensionMismatch)):
        load_corpus(dataset, embeddings, checkpoints)


def test_round_trip_identical(tmp_path):
    corpus = load_rows(tmp_path, THREE_ROWS, "orig")
    out = tmp_path / "saved"
    out.mkdir()
    paths = (out / "d.jsonl", out / "e.jsonl", [out / "c0.jsonl", out / "c1.jsonl"])
    save_corpus(corpus, *paths)
    reloaded = load_corpus(*paths)
    assert reloaded.ids == corpus.ids
    assert reloaded.dim == corpus.dim
    for pid in corpus.ids:
        assert reloaded.point(pid) == corpus.point(pid)
        assert reloaded.vector(pid).tolist() == corpus.vector(pid).tolist()
    for cp_a, cp_b in zip(reloaded.checkpoints, corpus.checkpoints):
        assert cp_a.entries == cp_b.entries


def test_loading_is_line_order_insensitive(tmp_path):
    dataset, embeddings, checkpoints = write_corpus_files(tmp_path, THREE_ROWS)
    corpus_a = load_corpus(dataset, embeddings, checkpoints)

    rng = random.Random(7)
    for path in [dataset, *checkpoints]:
        lines = path.read_text().splitlines()
        rng.shuffle(lines)
        path.write_text("\n".join(lines) + "\n")
    # embeddings: keep the header first, shuffle the rest
    header, *rest = embeddings.read_text().splitlines()
    rng.shuffle(rest)
    embeddings.write_text("\n".join([header, *rest]) + "\n")

    corpus_b = load_corpus(dataset, embeddings, checkpoints)
    assert corpus_b.ids == corpus_a.ids
    for pid in corpus_a.ids:
        assert corpus_b.point(pid) == corpus_a.point(pid)
        assert corpus_b.vector(pid).tolist() == corpus_a.vector(pid).tolist()
    for cp_a, cp_b in zip(corpus_a.checkpoints, corpus_b.checkpoints):
        assert cp_a.entries == cp_b.entries


# --- majority vote -----------------------------------------------------------

def _point(annotations: list[Label]) -> DataPoint:
    return DataPoint("p", "premise", "hypothesis", Label.ENTAILMENT, tuple(annotations))


def test_majority_fraction_boundary():
    point = _point([Label.ENTAILMENT] * 3 + [Label.NEUTRAL])
    assert majority_fraction(point) == 0.75


def test_majority_fraction_empty_is_none():
    assert majority_fraction(_point([])) is None


def test_majority_tie_broken_by_label_order():
    point = _point([Label.ENTAILMENT, Label.ENTAILMENT, Label.NEUTRAL, Label.NEUTRAL])
    label, fraction = majority_vote(point)
    assert fraction == 0.5
    assert label is Label.ENTAILMENT


def test_majority_fraction_range_property():
    rng = random.Random(42)
    labels = list(Label)
    for _ in range(300):
        n = rng.randint(1, 9)
        annotations = [rng.choice(labels) for _ in range(n)]
        fraction = majority_fraction(_point(annotations))
        assert fraction in {k / n for k in range(1, n + 1)}
        assert fraction >= 1.0 / len(set(annotations))


def test_argmax_label_tie_order():
    third = 1.0 / 3.0
    assert argmax_label((third, third, third)) is Label.ENTAILMENT
    assert argmax_label((0.2, 0.5, 0.3)) is Label.NEUTRAL
    assert argmax_label((0.1, 0.4, 0.5)) is Label.CONTRADICTION
    assert argmax_label((0.3, 0.3, 0.4)) is Label.CONTRADICTION
    assert argmax_label((0.4, 0.4, 0.2)) is Label.ENTAILMENT
