"""Counterfactual drafts with full provenance, on an append-only event log.

Every mutation (created / edited / estimated / submitted) is one JSON line;
the in-memory state is a pure fold over the log, so replaying the file at
startup reconstructs every draft, its edit history, and its estimates
exactly. Provenance is the product — the log is the storage format.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import Label
from .datamap import Region
from .errors import MalformedRecord, NoEstimate, UnknownDraft
from .estimate import LocationEstimate

ORIGIN_LLM = "llm_suggestion"
ORIGIN_MANUAL = "manual"

STATUS_DRAFT = "draft"
STATUS_SUBMITTED = "submitted"


@dataclass(frozen=True)
class EditEntry:
    timestamp: float
    premise: str
    hypothesis: str
    user_label: Label


@dataclass
class CounterfactualDraft:
    draft_id: str
    seed_dcc_id: str
    premise: str
    hypothesis: str
    user_label: Label
    origin: str  # ORIGIN_LLM or ORIGIN_MANUAL
    suggestion_fingerprint: str | None
    tags: list[str]
    edit_history: list[EditEntry] = field(default_factory=list)
    estimate_history: list[LocationEstimate] = field(default_factory=list)
    status: str = STATUS_DRAFT
    submit_warning: bool = False

    @property
    def latest_estimate(self) -> LocationEstimate | None:
        return self.estimate_history[-1] if self.estimate_history else None

    def to_dict(self) -> dict:
        return {
            "draft_id": self.draft_id,
            "seed_dcc_id": self.seed_dcc_id,
            "premise": self.premise,
            "hypothesis": self.hypothesis,
            "user_label": self.user_label.value,
            "origin": self.origin,
            "suggestion_fingerprint": self.suggestion_fingerprint,
            "tags": list(self.tags),
            "edit_history": [
                {
                    "timestamp": e.timestamp,
                    "premise": e.premise,
                    "hypothesis": e.hypothesis,
                    "user_label": e.user_label.value,
                }
                for e in self.edit_history
            ],
            "estimate_history": [e.to_dict() for e in self.estimate_history],
            "latest_estimate": (
                self.latest_estimate.to_dict() if self.latest_estimate else None
            ),
            "status": self.status,
            "submit_warning": self.submit_warning,
        }


class DraftStore:
    """Single-writer draft store over one JSON-lines event log."""

    def __init__(self, log_path: str | Path):
        self._log_path = Path(log_path)
        self._lock = threading.Lock()
        self._drafts: dict[str, CounterfactualDraft] = {}
        self._created = 0
        self._last_ts = 0.0
        if self._log_path.exists():
            self._replay()

    # -- event log ------------------------------------------------------

    def _replay(self) -> None:
        with open(self._log_path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise MalformedRecord(str(self._log_path), line_no, f"invalid JSON: {exc.msg}")
                self._apply(event)

    def _append(self, event: dict) -> None:
        self._apply(event)
        with open(self._log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _next_ts(self) -> float:
        # wall clock, clamped so event timestamps never go backwards
        now = max(time.time(), self._last_ts)
        return now

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        ts = float(event["ts"])
        self._last_ts = max(self._last_ts, ts)
        if kind == "draft_created":
            draft = CounterfactualDraft(
                draft_id=event["draft_id"],
                seed_dcc_id=event["seed_dcc_id"],
                premise=event["premise"],
                hypothesis=event["hypothesis"],
                user_label=Label.from_string(event["user_label"]),
                origin=event["origin"],
                suggestion_fingerprint=event.get("suggestion_fingerprint"),
                tags=list(event.get("tags", [])),
            )
            draft.edit_history.append(
                EditEntry(ts, draft.premise, draft.hypothesis, draft.user_label)
            )
            self._drafts[draft.draft_id] = draft
            self._created += 1
        elif kind == "draft_edited":
            draft = self._drafts[event["draft_id"]]
            draft.premise = event["premise"]
            draft.hypothesis = event["hypothesis"]
            draft.user_label = Label.from_string(event["user_label"])
            if "tags" in event:
                draft.tags = list(event["tags"])
            draft.edit_history.append(
                EditEntry(ts, draft.premise, draft.hypothesis, draft.user_label)
            )
        elif kind == "draft_estimated":
            draft = self._drafts[event["draft_id"]]
            draft.premise = event["premise"]
            draft.hypothesis = event["hypothesis"]
            draft.user_label = Label.from_string(event["user_label"])
            draft.edit_history.append(
                EditEntry(ts, draft.premise, draft.hypothesis, draft.user_label)
            )
            draft.estimate_history.append(LocationEstimate.from_dict(event["estimate"]))
        elif kind == "draft_submitted":
            draft = self._drafts[event["draft_id"]]
            draft.status = STATUS_SUBMITTED
            draft.submit_warning = bool(event.get("warning", False))
        else:
            raise MalformedRecord(str(self._log_path), 0, f"unknown event kind {kind!r}")

    # -- public API -------------------------------------------------------

    def create(
        self,
        seed_dcc_id: str,
        premise: str,
        hypothesis: str,
        user_label: Label,
        origin: str = ORIGIN_MANUAL,
        suggestion_fingerprint: str | None = None,
        tags: Iterable[str] = (),
    ) -> CounterfactualDraft:
        if origin not in (ORIGIN_LLM, ORIGIN_MANUAL):
            raise ValueError(f"unknown origin {origin!r}")
        if not premise.strip() or not hypothesis.strip():
            raise ValueError("premise and hypothesis must be non-empty")
        with self._lock:
            draft_id = f"draft-{self._created + 1:06d}"
            self._append(
                {
                    "event": "draft_created",
                    "ts": self._next_ts(),
                    "draft_id": draft_id,
                    "seed_dcc_id": seed_dcc_id,
                    "premise": premise,
                    "hypothesis": hypothesis,
                    "user_label": user_label.value,
                    "origin": origin,
                    "suggestion_fingerprint": suggestion_fingerprint,
                    "tags": list(tags),
                }
            )
            return self._drafts[draft_id]

    def edit(
        self,
        draft_id: str,
        premise: str,
        hypothesis: str,
        user_label: Label,
        tags: Iterable[str] | None = None,
    ) -> CounterfactualDraft:
        with self._lock:
            self._require(draft_id)
            event = {
                "event": "draft_edited",
                "ts": self._next_ts(),
                "draft_id": draft_id,
                "premise": premise,
                "hypothesis": hypothesis,
                "user_label": user_label.value,
            }
            if tags is not None:
                event["tags"] = list(tags)
            self._append(event)
            return self._drafts[draft_id]

    def record_estimate(
        self,
        draft_id: str,
        premise: str,
        hypothesis: str,
        user_label: Label,
        estimate: LocationEstimate,
    ) -> CounterfactualDraft:
        with self._lock:
            self._require(draft_id)
            self._append(
                {
                    "event": "draft_estimated",
                    "ts": self._next_ts(),
                    "draft_id": draft_id,
                    "premise": premise,
                    "hypothesis": hypothesis,
                    "user_label": user_label.value,
                    "estimate": estimate.to_dict(),
                }
            )
            return self._drafts[draft_id]

    def submit(self, draft_id: str) -> CounterfactualDraft:
        """Mark a draft submitted; warns (never blocks) on easy_to_learn."""
        with self._lock:
            draft = self._require(draft_id)
            estimate = draft.latest_estimate
            if estimate is None:
                raise NoEstimate(f"draft {draft_id!r} has never been estimated")
            warning = estimate.region is Region.EASY_TO_LEARN
            self._append(
                {
                    "event": "draft_submitted",
                    "ts": self._next_ts(),
                    "draft_id": draft_id,
                    "warning": warning,
                }
            )
            return self._drafts[draft_id]

    def _require(self, draft_id: str) -> CounterfactualDraft:
        if draft_id not in self._drafts:
            raise UnknownDraft(f"no draft {draft_id!r}")
        return self._drafts[draft_id]

    def get(self, draft_id: str) -> CounterfactualDraft:
        with self._lock:
            return self._require(draft_id)

    def all_drafts(self) -> list[CounterfactualDraft]:
        with self._lock:
            return sorted(self._drafts.values(), key=lambda d: d.draft_id)

    def submitted(self) -> list[CounterfactualDraft]:
        return [d for d in self.all_drafts() if d.status == STATUS_SUBMITTED]
