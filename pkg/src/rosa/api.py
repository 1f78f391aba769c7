"""HTTP JSON API: the review loop over one KB file.

Handlers read immutable KB snapshots; every mutation goes through the
store's single lock, is persisted atomically to disk first and only then
published, so a crash mid-write never loses the previous KB.  Errors
travel as ``{"code", "message"}`` with the code naming the refusal.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from pathlib import Path
from typing import Callable, Literal, TypeVar

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .adaptation import ReviewVerdict, record_review
from .cases import KnowledgeBase, render_explanation
from .config import Config
from .errors import (
    DuplicateIdError,
    IntegrityError,
    IoError,
    ParseError,
    RosaError,
    StaleVersionError,
    UnknownCaseError,
    UnknownConceptError,
    UnknownGraphError,
    UnknownMatchError,
    UnknownVertexError,
)
from .graph import graph_to_doc
from .matching import CompatibilityPolicy, MatchResult, Mapping, pair
from .reports import dumps_report, match_report
from .storage import load_kb, save_kb

T = TypeVar("T")

_STATUS_BY_ERROR = {
    UnknownGraphError: 404,
    UnknownCaseError: 404,
    UnknownVertexError: 404,
    UnknownConceptError: 404,
    UnknownMatchError: 404,
    StaleVersionError: 409,
    DuplicateIdError: 409,
    IoError: 500,
    ParseError: 500,
    IntegrityError: 500,
}


def _status_for(exc: RosaError) -> int:
    for cls, status in _STATUS_BY_ERROR.items():
        if isinstance(exc, cls):
            return status
    return 422


def _error_code(exc: Exception) -> str:
    name = type(exc).__name__
    return name[:-5] if name.endswith("Error") else name


class KbStore:
    """Owns the KB value and its file; the single serialized writer."""

    def __init__(self, path: str | Path, kb: KnowledgeBase):
        self.path = Path(path)
        self._kb = kb
        self._lock = threading.Lock()

    @classmethod
    def open(cls, path: str | Path) -> "KbStore":
        return cls(path, load_kb(path))

    def snapshot(self) -> KnowledgeBase:
        return self._kb

    def mutate(self, fn: Callable[[KnowledgeBase], tuple[KnowledgeBase, T]]) -> T:
        """Run one mutation under the lock: persist first, publish after."""
        with self._lock:
            kb2, result = fn(self._kb)
            if kb2 is not self._kb:
                save_kb(kb2, self.path)
                self._kb = kb2
            return result


class PolicyOverride(BaseModel):
    threshold: float | None = None
    allowed_pairs: list[tuple[str, str]] | None = None
    forbidden_pairs: list[tuple[str, str]] | None = None

    def applied_to(self, base: CompatibilityPolicy) -> CompatibilityPolicy:
        return CompatibilityPolicy(
            self.threshold if self.threshold is not None else base.threshold,
            frozenset(pair(a, b) for a, b in self.allowed_pairs)
            if self.allowed_pairs is not None else base.allowed_pairs,
            frozenset(pair(a, b) for a, b in self.forbidden_pairs)
            if self.forbidden_pairs is not None else base.forbidden_pairs,
        )


class MatchRequest(BaseModel):
    target_graph_id: str
    k: int = 5
    policy: PolicyOverride | None = None


class MatchRef(BaseModel):
    case_id: str
    target_graph_id: str
    mapping: dict[str, str]


class ReviewRequest(BaseModel):
    match: MatchRef
    decision: Literal["accept", "reject"]
    edited_text: str | None = None
    reviewer: str = ""
    note: str = ""
    timestamp: str = ""
    expected_version: int


class CaseUpdateRequest(BaseModel):
    explanation: str | None = None
    status: Literal["draft", "validated", "rejected"] | None = None
    expected_version: int


def _case_doc(kb: KnowledgeBase, case_id: str) -> dict:
    c = kb.case(case_id)
    return {
        "id": c.id,
        "graph_id": c.graph_id,
        "status": c.status.value,
        "vertices": sorted(c.vertex_set),
        "explanation": c.explanation,
        "rendered": render_explanation(kb, c),
        "notes": list(c.notes),
    }


def create_app(store: KbStore, config: Config | None = None) -> FastAPI:
    config = config or Config(kb_path=store.path)
    app = FastAPI(title="rosa", docs_url=None, redoc_url=None)

    @app.exception_handler(RosaError)
    async def rosa_error(_req: Request, exc: RosaError):
        return JSONResponse(status_code=_status_for(exc),
                            content={"code": _error_code(exc),
                                     "message": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(_req: Request, exc: ValueError):
        return JSONResponse(status_code=422,
                            content={"code": "InvalidRequest",
                                     "message": str(exc)})

    def effective_policy(kb: KnowledgeBase,
                         override: PolicyOverride | None) -> CompatibilityPolicy:
        base = config.default_policy or kb.policy
        return override.applied_to(base) if override is not None else base

    @app.get("/api/version")
    def get_version():
        return {"version": store.snapshot().version}

    @app.get("/api/kb")
    def get_kb():
        kb = store.snapshot()
        concepts = [
            {"id": c.id, "label": c.label, "kind": c.kind.value,
             "parents": sorted(c.parents), "attributes": sorted(c.attributes)}
            for c in sorted(kb.taxonomy.concepts.values(), key=lambda c: c.id)
        ]
        cases_by_graph: dict[str, list[str]] = {gid: [] for gid in kb.graphs}
        for cid in sorted(kb.cases):
            cases_by_graph.setdefault(kb.cases[cid].graph_id, []).append(cid)
        return {
            "version": kb.version,
            "roles": [{"name": r.name, "repeatable": r.repeatable}
                      for r in kb.roles.roles],
            "concepts": concepts,
            "policy": {
                "threshold": kb.policy.threshold,
                "allowed_pairs": sorted(sorted(p) for p in kb.policy.allowed_pairs),
                "forbidden_pairs": sorted(sorted(p)
                                          for p in kb.policy.forbidden_pairs),
            },
            "graphs": [
                {"id": gid,
                 "farm_name": kb.graphs[gid].metadata.farm_name,
                 "zone": kb.graphs[gid].metadata.zone,
                 "entities": len(kb.graphs[gid].entities),
                 "relations": len(kb.graphs[gid].relations),
                 "cases": cases_by_graph[gid]}
                for gid in sorted(kb.graphs)
            ],
            "cases": [
                {"id": cid, "graph_id": kb.cases[cid].graph_id,
                 "status": kb.cases[cid].status.value}
                for cid in sorted(kb.cases)
            ],
        }

    @app.get("/api/graphs/{graph_id}")
    def get_graph(graph_id: str):
        kb = store.snapshot()
        g = kb.graph(graph_id)
        return {
            "version": kb.version,
            "graph": graph_to_doc(g),
            "cases": [cid for cid in sorted(kb.cases)
                      if kb.cases[cid].graph_id == graph_id],
        }

    @app.get("/api/cases")
    def get_cases():
        kb = store.snapshot()
        return {
            "version": kb.version,
            "cases": [_case_doc(kb, cid) for cid in sorted(kb.cases)],
        }

    @app.post("/api/match")
    def post_match(req: MatchRequest):
        kb = store.snapshot()
        report = match_report(kb, req.target_graph_id, k=req.k,
                              policy=effective_policy(kb, req.policy),
                              limits=config.match_limits)
        return Response(content=dumps_report(report),
                        media_type="application/json")

    @app.post("/api/reviews")
    def post_review(req: ReviewRequest):
        verdict_match = MatchResult(
            case_id=req.match.case_id,
            target_graph_id=req.match.target_graph_id,
            mapping=Mapping.from_dict(req.match.mapping),
            score=Fraction(0),
        )
        verdict = ReviewVerdict(
            match=verdict_match,
            decision=req.decision,
            edited_text=req.edited_text,
            reviewer=req.reviewer,
            timestamp=req.timestamp,
            note=req.note,
            expected_version=req.expected_version,
        )

        def apply(kb: KnowledgeBase):
            kb2, new_case = record_review(kb, verdict)
            return kb2, (kb2, new_case)

        kb2, new_case = store.mutate(apply)
        return {
            "version": kb2.version,
            "decision": req.decision,
            "source_case_id": req.match.case_id,
            "new_case_id": new_case.id if new_case is not None else None,
        }

    @app.put("/api/cases/{case_id}")
    def put_case(case_id: str, req: CaseUpdateRequest):
        def apply(kb: KnowledgeBase):
            if req.expected_version != kb.version:
                raise StaleVersionError(
                    f"update built against version {req.expected_version}, "
                    f"KB is at {kb.version}")
            kb.case(case_id)
            kb2 = kb
            if req.explanation is not None:
                kb2 = kb2.update_explanation(case_id, req.explanation)
            if req.status is not None:
                kb2 = kb2.set_status(case_id, req.status)
            return kb2, kb2

        kb2 = store.mutate(apply)
        return {"version": kb2.version, "case": _case_doc(kb2, case_id)}

    if config.static_dir is not None and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(config.static_dir),
                                   html=True), name="ui")

    return app


def serve(config: Config) -> None:
    """Blocking entry point: load the KB strictly and run the service."""
    import uvicorn

    store = KbStore.open(config.kb_path)
    app = create_app(store, config)
    host, port = config.host_port()
    uvicorn.run(app, host=host, port=port, log_level="info")
