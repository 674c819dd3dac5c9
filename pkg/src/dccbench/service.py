"""The workbench facade and its HTTP JSON API.

The Workbench object ties the pipeline together — corpus, data map,
neighbor index, miner, suggestion client, estimator, draft store — for one
diagnosis session; corpus and config are fixed at startup. create_app wraps
it in a FastAPI application exposing:

    GET  /api/datamap
    GET  /api/dccs
    GET  /api/dccs/{id}
    POST /api/dccs/{id}/suggest      {"n": int}
    POST /api/drafts                 {seed_dcc_id, premise, hypothesis, ...}
    POST /api/drafts/{id}/estimate   {premise, hypothesis, user_label}
    POST /api/drafts/{id}/submit
    GET  /api/export?tags=a,b
    POST /api/evaluate               {"suite_path" | "items", "scorer"}
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .config import WorkbenchConfig
from .corpus import CorpusHandle, Label, load_corpus
from .datamap import compute_coords
from .drafts import DraftStore, ORIGIN_MANUAL
from .errors import (
    ConfigInvalid,
    EmptySuite,
    InsufficientNeighbors,
    MalformedSuite,
    NoEstimate,
    NotADcc,
    NotLoaded,
    ScorerUnavailable,
    ServiceUnavailable,
    UnknownDraft,
    UnknownId,
    WorkbenchError,
)
from .estimate import Estimator, Scorer, ScorerEndpoint
from .evaluation import EvaluationReport, evaluate_suite, export_suite, parse_suite
from .mining import DccMiner, DccRecord, dcc_to_dict
from .neighbors import NeighborIndex
from .suggest import SuggestionClient, Suggestion, build_prompt, client_from_target, fetch_suggestions


class Workbench:
    """One diagnosis session over one corpus."""

    def __init__(
        self,
        corpus: CorpusHandle,
        config: WorkbenchConfig,
        log_path: str | Path,
        suggestion_client: SuggestionClient | None = None,
        scorer_impls: Sequence[Scorer] | None = None,
    ):
        if len(corpus) == 0:
            raise NotLoaded("corpus is empty")
        self.corpus = corpus
        self.config = config
        self.coords = compute_coords(corpus, config.region)
        self.index = NeighborIndex(corpus)
        self.miner = DccMiner(
            corpus, self.coords, self.index, config.miner, config.display_neighbors
        )
        self.drafts = DraftStore(log_path)
        self.suggestion_client = suggestion_client or client_from_target(
            config.suggestion.endpoint,
            temperature=config.suggestion.temperature,
            max_tokens=config.suggestion.max_tokens,
            api_key_env=config.suggestion.api_key_env,
            parallelism=config.suggestion.parallelism,
        )
        self._scorer_endpoints = tuple(
            ScorerEndpoint(i, target) for i, target in enumerate(config.scorers)
        )
        if scorer_impls is not None and len(self._scorer_endpoints) < len(scorer_impls):
            self._scorer_endpoints = tuple(
                ScorerEndpoint(i, f"injected:{i}") for i in range(len(scorer_impls))
            )
        self._estimator: Estimator | None = None
        if len(self._scorer_endpoints) == 1:
            # a lone checkpoint cannot produce variability: refuse loudly at
            # startup instead of failing on the first estimate
            raise ConfigInvalid("need >= 2 scorer endpoints, got 1")
        if self._scorer_endpoints:
            self._estimator = Estimator(
                list(self._scorer_endpoints),
                config.region,
                scorer_impls=list(scorer_impls) if scorer_impls is not None else None,
            )

    @classmethod
    def from_paths(
        cls,
        dataset_path: str | Path,
        embeddings_path: str | Path,
        checkpoint_paths: Sequence[str | Path],
        config: WorkbenchConfig,
        log_path: str | Path,
        **kwargs,
    ) -> "Workbench":
        corpus = load_corpus(dataset_path, embeddings_path, checkpoint_paths)
        return cls(corpus, config, log_path, **kwargs)

    # -- read side --------------------------------------------------------

    def list_datamap(self) -> dict:
        """Every example's coordinates, with DCC flags and hover text."""
        dcc_ids = self.miner.dcc_ids()
        points = []
        for pid in self.corpus.ids:
            coords = self.coords[pid]
            point = self.corpus.point(pid)
            points.append(
                {
                    "id": pid,
                    "confidence": coords.confidence,
                    "variability": coords.variability,
                    "region": coords.region.value,
                    "is_dcc": pid in dcc_ids,
                    "gold_label": point.gold_label.value,
                    "premise": point.premise,
                    "hypothesis": point.hypothesis,
                }
            )
        return {"count": len(points), "points": points}

    def list_dccs(self) -> dict:
        records = self.miner.mine()
        return {"count": len(records), "dccs": [self._dcc_summary(r) for r in records]}

    def _dcc_summary(self, record: DccRecord) -> dict:
        point = self.corpus.point(record.id)
        return {
            "id": record.id,
            "premise": point.premise,
            "hypothesis": point.hypothesis,
            "gold_label": point.gold_label.value,
            "confidence": record.coords.confidence,
            "variability": record.coords.variability,
            "region": record.coords.region.value,
            "majority_fraction": record.majority_fraction,
        }

    def get_dcc(self, record_id: str) -> dict:
        """Full DCC view: both neighbor boxes with per-neighbor labels
        (the label drives the marker shape client-side)."""
        record = self.miner.detail(record_id)
        body = dcc_to_dict(record)
        point = self.corpus.point(record_id)
        body["premise"] = point.premise
        body["hypothesis"] = point.hypothesis
        body["gold_label"] = point.gold_label.value
        for bucket in ("triggering_neighbors", "different_label_neighbors", "same_label_neighbors"):
            for entry in body[bucket]:
                neighbor_point = self.corpus.point(entry["id"])
                entry["premise"] = neighbor_point.premise
                entry["hypothesis"] = neighbor_point.hypothesis
                neighbor_coords = self.coords[entry["id"]]
                entry["confidence"] = neighbor_coords.confidence
                entry["variability"] = neighbor_coords.variability
        return body

    # -- refine loop --------------------------------------------------------

    def suggest(self, record_id: str, n: int) -> dict:
        """Suggestions for one DCC, plus the exact prompt that produced them."""
        record = self.miner.detail(record_id)
        prompt = build_prompt(record, self.corpus, self.index)
        results = fetch_suggestions(
            prompt, n, self.suggestion_client, retries=self.config.suggestion.retries
        )
        suggestions = []
        failures = []
        for result in results:
            if isinstance(result, Suggestion):
                suggestions.append(
                    {
                        "premise": result.premise,
                        "hypothesis": result.hypothesis,
                        "source": result.source,
                        "raw_completion": result.raw_completion,
                        "prompt_fingerprint": result.prompt_fingerprint,
                    }
                )
            else:
                failures.append({"raw_completion": result.raw_completion})
        return {
            "dcc_id": record_id,
            "prompt": prompt.rendered,
            "prompt_fingerprint": prompt.fingerprint,
            "context_word": prompt.context_word,
            "suggestions": suggestions,
            "failures": failures,
        }

    def create_draft(
        self,
        seed_dcc_id: str,
        premise: str,
        hypothesis: str,
        user_label: Label,
        origin: str = ORIGIN_MANUAL,
        suggestion_fingerprint: str | None = None,
        tags: Sequence[str] = (),
    ) -> dict:
        self.miner.detail(seed_dcc_id)  # drafts must trace to a mined DCC
        draft = self.drafts.create(
            seed_dcc_id=seed_dcc_id,
            premise=premise,
            hypothesis=hypothesis,
            user_label=user_label,
            origin=origin,
            suggestion_fingerprint=suggestion_fingerprint,
            tags=tags,
        )
        return draft.to_dict()

    def estimate_draft(
        self, draft_id: str, premise: str, hypothesis: str, user_label: Label
    ) -> dict:
        if self._estimator is None:
            raise ConfigInvalid("no scorer endpoints configured")
        self.drafts.get(draft_id)
        estimate = self._estimator.estimate(premise, hypothesis, user_label)
        draft = self.drafts.record_estimate(draft_id, premise, hypothesis, user_label, estimate)
        return {"draft": draft.to_dict(), "estimate": estimate.to_dict()}

    def submit_draft(self, draft_id: str) -> dict:
        draft = self.drafts.submit(draft_id)
        return {"draft": draft.to_dict(), "warning_easy_to_learn": draft.submit_warning}

    def export(self, tags: Sequence[str] = ()) -> str:
        return export_suite(self.drafts.all_drafts(), tags)

    def evaluate(
        self, suite_text: str, scorer_target: str, scorer: Scorer | None = None
    ) -> EvaluationReport:
        items = parse_suite(suite_text)
        return evaluate_suite(items, ScorerEndpoint(0, scorer_target), scorer=scorer)


# --- HTTP layer -------------------------------------------------------------

_ERROR_STATUS: tuple[tuple[type, int], ...] = (
    (NotADcc, 404),
    (UnknownDraft, 404),
    (UnknownId, 404),
    (NoEstimate, 409),
    (InsufficientNeighbors, 409),
    (EmptySuite, 404),
    (MalformedSuite, 400),
    (ConfigInvalid, 400),
    (ServiceUnavailable, 502),
    (ScorerUnavailable, 502),
    (NotLoaded, 503),
)


def _status_for(exc: WorkbenchError) -> int:
    for err_type, status in _ERROR_STATUS:
        if isinstance(exc, err_type):
            return status
    return 500


def _parse_label_field(data: dict, key: str = "user_label") -> Label:
    try:
        return Label.from_string(data.get(key, ""))
    except ValueError as exc:
        raise MalformedSuite(str(exc))


def create_app(workbench: Workbench, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="dccbench", docs_url=None, redoc_url=None)

    @app.exception_handler(WorkbenchError)
    async def workbench_error(_: Request, exc: WorkbenchError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def value_error(_: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": "ValueError", "detail": str(exc)})

    @app.get("/api/datamap")
    def api_datamap():
        return workbench.list_datamap()

    @app.get("/api/dccs")
    def api_dccs():
        return workbench.list_dccs()

    @app.get("/api/dccs/{record_id}")
    def api_dcc(record_id: str):
        return workbench.get_dcc(record_id)

    @app.post("/api/dccs/{record_id}/suggest")
    async def api_suggest(record_id: str, request: Request):
        data = await request.json()
        n = int(data.get("n", 1))
        return workbench.suggest(record_id, n)

    @app.post("/api/drafts")
    async def api_create_draft(request: Request):
        data = await request.json()
        return workbench.create_draft(
            seed_dcc_id=data.get("seed_dcc_id", ""),
            premise=data.get("premise", ""),
            hypothesis=data.get("hypothesis", ""),
            user_label=_parse_label_field(data),
            origin=data.get("origin", ORIGIN_MANUAL),
            suggestion_fingerprint=data.get("suggestion_fingerprint"),
            tags=data.get("tags", []),
        )

    @app.post("/api/drafts/{draft_id}/estimate")
    async def api_estimate(draft_id: str, request: Request):
        data = await request.json()
        return workbench.estimate_draft(
            draft_id,
            premise=data.get("premise", ""),
            hypothesis=data.get("hypothesis", ""),
            user_label=_parse_label_field(data),
        )

    @app.post("/api/drafts/{draft_id}/submit")
    def api_submit(draft_id: str):
        return workbench.submit_draft(draft_id)

    @app.get("/api/export")
    def api_export(tags: str = ""):
        wanted = [t for t in tags.split(",") if t]
        return PlainTextResponse(
            workbench.export(wanted), media_type="application/x-ndjson"
        )

    @app.post("/api/evaluate")
    async def api_evaluate(request: Request):
        data = await request.json()
        scorer_target = data.get("scorer", "")
        if not scorer_target:
            raise MalformedSuite("missing 'scorer' target")
        if "suite_path" in data:
            suite_text = Path(data["suite_path"]).read_text(encoding="utf-8")
        elif "suite" in data:
            suite_text = data["suite"]
        else:
            raise MalformedSuite("provide 'suite' text or 'suite_path'")
        return workbench.evaluate(suite_text, scorer_target).to_dict()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
