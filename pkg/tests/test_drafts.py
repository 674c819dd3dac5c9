from __future__ import annotations

import pytest

from dccbench.corpus import Label
from dccbench.datamap import Region
from dccbench.drafts import DraftStore, ORIGIN_LLM
from dccbench.errors import NoEstimate, UnknownDraft
from dccbench.estimate import LocationEstimate

HARD = LocationEstimate(0.2, 0.05, Region.HARD_TO_LEARN, ((0.2, 0.6, 0.2), (0.2, 0.6, 0.2)))
EASY = LocationEstimate(0.95, 0.01, Region.EASY_TO_LEARN, ((0.9, 0.05, 0.05), (1.0, 0.0, 0.0)))


def _store(tmp_path, name="log.jsonl"):
    return DraftStore(tmp_path / name)


def _create(store, **overrides):
    defaults = dict(
        seed_dcc_id="m-seed",
        premise="A premise.",
        hypothesis="A hypothesis.",
        user_label=Label.NEUTRAL,
        origin=ORIGIN_LLM,
        suggestion_fingerprint="abc123",
        tags=["bias"],
    )
    defaults.update(overrides)
    return store.create(**defaults)


def test_create_draft(tmp_path):
    store = _store(tmp_path)
    draft = _create(store)
    assert draft.draft_id == "draft-000001"
    assert draft.status == "draft"
    assert draft.origin == ORIGIN_LLM
    assert draft.suggestion_fingerprint == "abc123"
    assert len(draft.edit_history) == 1
    assert draft.edit_history[0].premise == "A premise."
    assert draft.latest_estimate is None


def test_create_rejects_empty_text(tmp_path):
    store = _store(tmp_path)
    with pytest.raises(ValueError):
        _create(store, premise="   ")
    with pytest.raises(ValueError):
        _create(store, origin="robot")


def test_edit_updates_fields_and_history(tmp_path):
    store = _store(tmp_path)
    draft = _create(store)
    store.edit(draft.draft_id, "New premise.", "New hypothesis.", Label.CONTRADICTION)
    draft = store.get(draft.draft_id)
    assert draft.premise == "New premise."
    assert draft.user_label is Label.CONTRADICTION
    assert len(draft.edit_history) == 2


def test_estimates_append_to_both_histories(tmp_path):
    store = _store(tmp_path)
    draft = _create(store)
    store.record_estimate(draft.draft_id, "P v2.", "H v2.", Label.NEUTRAL, HARD)
    store.record_estimate(draft.draft_id, "P v3.", "H v3.", Label.NEUTRAL, HARD)
    draft = store.get(draft.draft_id)
    assert len(draft.edit_history) == 3  # creation + two estimates
    assert len(draft.estimate_history) == 2
    assert draft.premise == "P v3."
    assert draft.latest_estimate == HARD


def test_submit_requires_estimate(tmp_path):
    store = _store(tmp_path)
    draft = _create(store)
    with pytest.raises(NoEstimate):
        store.submit(draft.draft_id)


def test_submit_hard_region_no_warning(tmp_path):
    store = _store(tmp_path)
    draft = _create(store)
    store.record_estimate(draft.draft_id, "P.", "H.", Label.NEUTRAL, HARD)
    submitted = store.submit(draft.draft_id)
    assert submitted.status == "submitted"
    assert submitted.submit_warning is False


def test_submit_easy_region_warns_but_does_not_block(tmp_path):
    store = _store(tmp_path)
    draft = _create(store)
    store.record_estimate(draft.draft_id, "P.", "H.", Label.NEUTRAL, EASY)
    submitted = store.submit(draft.draft_id)
    assert submitted.status == "submitted"
    assert submitted.submit_warning is True


def test_unknown_draft(tmp_path):
    store = _store(tmp_path)
    with pytest.raises(UnknownDraft):
        store.get("draft-zzz")
    with pytest.raises(UnknownDraft):
        store.submit("draft-zzz")


def test_timestamps_monotone(tmp_path):
    store = _store(tmp_path)
    draft = _create(store)
    for i in range(5):
        store.edit(draft.draft_id, f"P {i}.", "H.", Label.NEUTRAL)
    history = store.get(draft.draft_id).edit_history
    stamps = [entry.timestamp for entry in history]
    assert stamps == sorted(stamps)


def test_replay_reconstructs_everything(tmp_path):
    store = _store(tmp_path)
    a = _create(store)
    b = _create(store, tags=["artifact"], origin="manual", suggestion_fingerprint=None)
    store.record_estimate(a.draft_id, "P v2.", "H v2.", Label.NEUTRAL, HARD)
    store.record_estimate(a.draft_id, "P v3.", "H v3.", Label.CONTRADICTION, EASY)
    store.submit(a.draft_id)

    reloaded = _store(tmp_path)  # same log file
    assert [d.draft_id for d in reloaded.all_drafts()] == [a.draft_id, b.draft_id]
    for draft_id in (a.draft_id, b.draft_id):
        assert reloaded.get(draft_id).to_dict() == store.get(draft_id).to_dict()
    replayed = reloaded.get(a.draft_id)
    assert replayed.status == "submitted"
    assert len(replayed.estimate_history) == 2
    assert replayed.latest_estimate == EASY
    assert replayed.suggestion_fingerprint == "abc123"


def test_draft_ids_continue_after_replay(tmp_path):
    store = _store(tmp_path)
    _create(store)
    _create(store)
    reloaded = _store(tmp_path)
    third = _create(reloaded)
    assert third.draft_id == "draft-000003"


def test_corrupt_log_raises_with_location(tmp_path):
    from dccbench.errors import MalformedRecord

    store = _store(tmp_path)
    _create(store)
    log = tmp_path / "log.jsonl"
    log.write_text(log.read_text() + "{broken\n")
    with pytest.raises(MalformedRecord) as excinfo:
        _store(tmp_path)
    assert excinfo.value.line_no == 2


def test_log_is_append_only_jsonl(tmp_path):
    import json

    store = _store(tmp_path)
    draft = _create(store)
    store.record_estimate(draft.draft_id, "P.", "H.", Label.NEUTRAL, HARD)
    store.submit(draft.draft_id)
    lines = (tmp_path / "log.jsonl").read_text().splitlines()
    kinds = [json.loads(line)["event"] for line in lines]
    assert kinds == ["draft_created", "draft_estimated", "draft_submitted"]
