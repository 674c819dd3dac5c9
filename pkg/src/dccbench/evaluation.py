"""Adversarial-suite export and accuracy evaluation.

Submitted drafts export to a JSON-lines suite, one object per draft,
deterministically ordered by draft id. A suite is evaluated by asking a
single checkpoint scorer for each item and counting argmax predictions
against the gold label; accuracy is kept as an exact rational.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Label, argmax_label
from .drafts import CounterfactualDraft
from .errors import EmptySuite, MalformedSuite, ScorerUnavailable
from .estimate import Scorer, ScorerEndpoint, scorer_from_target


@dataclass(frozen=True)
class SuiteItem:
    id: str
    premise: str
    hypothesis: str
    gold_label: Label
    seed_dcc_id: str
    tags: tuple[str, ...]


@dataclass(frozen=True)
class EvaluationItem:
    item_id: str
    predicted: Label
    gold: Label


@dataclass(frozen=True)
class EvaluationReport:
    suite_size: int
    correct: int
    per_item: tuple[EvaluationItem, ...]

    @property
    def accuracy(self) -> Fraction:
        return Fraction(self.correct, self.suite_size)

    def to_dict(self) -> dict:
        return {
            "suite_size": self.suite_size,
            "correct": self.correct,
            "accuracy": float(self.accuracy),
            "accuracy_exact": f"{self.accuracy.numerator}/{self.accuracy.denominator}",
            "per_item": [
                {"id": i.item_id, "predicted": i.predicted.value, "gold": i.gold.value}
                for i in self.per_item
            ],
        }


def matches_tags(draft_tags: Iterable[str], wanted: Sequence[str]) -> bool:
    """Empty filter matches everything; otherwise any shared tag matches."""
    if not wanted:
        return True
    tags = set(draft_tags)
    return any(tag in tags for tag in wanted)


def export_suite(drafts: Sequence[CounterfactualDraft], tags: Sequence[str] = ()) -> str:
    """Submitted drafts matching the tag filter, as deterministic JSONL."""
    chosen = [
        d for d in drafts if d.status == "submitted" and matches_tags(d.tags, tags)
    ]
    if not chosen:
        raise EmptySuite(f"no submitted drafts match tags {list(tags)!r}")
    chosen.sort(key=lambda d: d.draft_id)
    lines = []
    for draft in chosen:
        lines.append(
            json.dumps(
                {
                    "id": draft.draft_id,
                    "premise": draft.premise,
                    "hypothesis": draft.hypothesis,
                    "gold_label": draft.user_label.value,
                    "seed_dcc_id": draft.seed_dcc_id,
                    "tags": list(draft.tags),
                }
            )
        )
    return "\n".join(lines) + "\n"


def parse_suite(text: str, source: str = "<suite>") -> list[SuiteItem]:
    items: list[SuiteItem] = []
    seen: set[str] = set()
    for line_no, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedSuite(f"{source}:{line_no}: invalid JSON: {exc.msg}")
        try:
            item = SuiteItem(
                id=obj["id"],
                premise=obj["premise"],
                hypothesis=obj["hypothesis"],
                gold_label=Label.from_string(obj["gold_label"]),
                seed_dcc_id=obj.get("seed_dcc_id", ""),
                tags=tuple(obj.get("tags", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedSuite(f"{source}:{line_no}: {exc}")
        if item.id in seen:
            raise MalformedSuite(f"{source}:{line_no}: duplicate id {item.id!r}")
        seen.add(item.id)
        items.append(item)
    if not items:
        raise MalformedSuite(f"{source}: suite is empty")
    return items


def load_suite(path: str | Path) -> list[SuiteItem]:
    return parse_suite(Path(path).read_text(encoding="utf-8"), source=str(path))


def evaluate_suite(
    items: Sequence[SuiteItem],
    scorer_endpoint: ScorerEndpoint,
    scorer: Scorer | None = None,
) -> EvaluationReport:
    """Accuracy of one scorer on a suite; argmax ties go to the earlier label."""
    if not items:
        raise MalformedSuite("suite is empty")
    impl = scorer or scorer_from_target(scorer_endpoint.target)
    per_item = []
    correct = 0
    for item in items:
        try:
            triple = impl.score(item.premise, item.hypothesis)
        except Exception as exc:
            raise ScorerUnavailable(scorer_endpoint.checkpoint_index, str(exc)) from exc
        predicted = argmax_label(triple)
        if predicted is item.gold_label:
            correct += 1
        per_item.append(EvaluationItem(item_id=item.id, predicted=predicted, gold=item.gold_label))
    return EvaluationReport(
        suite_size=len(items), correct=correct, per_item=tuple(per_item)
    )
