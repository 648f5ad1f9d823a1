"""HTTP API over a directory of model and session files.

The storage layout is deliberately the CLI's: models as ``<id>.ucm`` DSL
files, sessions as ``<id>.json`` session files, all in one data directory,
so the command line and the service interoperate on the same data. Uploaded
models are canonicalized on ingestion (placeholders numbered, canonical
serialization) so every stored file re-parses to exactly the model served.

Error mapping: malformed requests 400, missing resources 404, domain rule
violations 422, all as ``{"status", "code", "message"}`` bodies. Mutations
on one session are serialized behind a per-session lock, and the session
file is persisted before a 2xx is returned (write-ahead).
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .diagrams import DiagramOptions, export_categorized_diagram, export_questions_diagram
from .dsl import parse_model, serialize_model
from .model import Diagnostic, UseCaseModel, auto_number_questions, validate_model
from .reports import checklist_matrix, coverage_report, elicitation_table, render
from .session import (
    ElicitationError,
    ElicitedNfr,
    Session,
    Taxonomy,
    load_session,
    pending_questions,
    record_answer,
    revise_answer,
    retract_answer,
    save_session,
    start_session,
)
from .storage import atomic_write_text, dir_model_resolver
from .suggest import suggest_category

log = logging.getLogger(__name__)

# codes whose target is a missing resource rather than a bad payload
_NOT_FOUND_CODES = {"unknown-question", "not-answered"}

_REPORT_FORMATS = {"json": "structured", "csv": "csv", "md": "markdown"}
_CONTENT_TYPES = {
    "json": "application/json",
    "csv": "text/csv",
    "md": "text/markdown",
}
DOT_CONTENT_TYPE = "text/vnd.graphviz"


class ApiError(Exception):
    """Error carried to the HTTP layer; rendered as a JSON problem body."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass(frozen=True)
class StoredModel:
    model_id: str
    source: str
    parsed: UseCaseModel
    created_at: datetime


class Store:
    """Model and session registry backed by one directory of files.

    Reads serve immutable snapshots; mutations of one session run under that
    session's lock and hit disk before they are visible.
    """

    def __init__(self, root: Path, default_taxonomy: Taxonomy | None = None):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.default_taxonomy = default_taxonomy
        self._guard = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._models: dict[str, StoredModel] = {}
        self._sessions: dict[str, Session] = {}
        self._scan()

    def _scan(self) -> None:
        for path in sorted(self.root.glob("*.ucm")):
            result = parse_model(path.read_bytes())
            if result.model is None:
                log.warning("skipping unparseable model file %s", path.name)
                continue
            model = auto_number_questions(result.model)
            created = datetime.fromtimestamp(path.stat().st_mtime, tz=timezone.utc)
            self._models[path.stem] = StoredModel(
                model_id=path.stem,
                source=path.read_text(encoding="utf-8"),
                parsed=model,
                created_at=created,
            )
        resolver = dir_model_resolver(self.root)
        for path in sorted(self.root.glob("*.json")):
            try:
                session = load_session(path.read_text(encoding="utf-8"), resolver)
            except (OSError, ElicitationError) as exc:
                log.warning("skipping session file %s: %s", path.name, exc)
                continue
            self._sessions[session.session_id] = session

    def _session_lock(self, session_id: str) -> threading.Lock:
        with self._guard:
            return self._session_locks.setdefault(session_id, threading.Lock())

    # -- models ---------------------------------------------------------------

    def add_model(self, source: str) -> tuple[StoredModel, list[Diagnostic]]:
        result = parse_model(source)
        if result.model is None:
            raise ModelRejected(result.diagnostics)
        model = auto_number_questions(result.model)
        canonical = serialize_model(model)
        model_id = uuid.uuid4().hex[:12]
        atomic_write_text(self.root / f"{model_id}.ucm", canonical)
        stored = StoredModel(
            model_id=model_id,
            source=canonical,
            parsed=model,
            created_at=datetime.now(timezone.utc).replace(microsecond=0),
        )
        with self._guard:
            self._models[model_id] = stored
        return stored, validate_model(model)

    def get_model(self, model_id: str) -> StoredModel:
        with self._guard:
            stored = self._models.get(model_id)
        if stored is None:
            raise ApiError(404, "unknown-model", f"no model {model_id}")
        return stored

    # -- sessions -------------------------------------------------------------

    def create_session(self, model_id: str, taxonomy: Taxonomy | None) -> Session:
        stored = self.get_model(model_id)
        session = start_session(
            stored.parsed,
            taxonomy if taxonomy is not None else self.default_taxonomy,
            session_id=uuid.uuid4().hex[:12],
            model_ref=f"{model_id}.ucm",
        )
        atomic_write_text(
            self.root / f"{session.session_id}.json", save_session(session)
        )
        with self._guard:
            self._sessions[session.session_id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        with self._guard:
            session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown-session", f"no session {session_id}")
        return session

    def mutate_session(self, session_id: str, fn) -> Session:
        """Apply ``fn`` to the session under its lock; persist, then publish."""
        lock = self._session_lock(session_id)
        with lock:
            current = self.get_session(session_id)
            updated = fn(current)
            atomic_write_text(self.root / f"{session_id}.json", save_session(updated))
            with self._guard:
                self._sessions[session_id] = updated
            return updated


class ModelRejected(Exception):
    def __init__(self, diagnostics):
        super().__init__("model has errors")
        self.diagnostics = diagnostics


class SessionCreate(BaseModel):
    model_id: str
    taxonomy: list[str] | None = None


class AnswerPut(BaseModel):
    answer: str
    category: str
    actor: str | None = None


def _diag_json(diag: Diagnostic) -> dict:
    line, column = diag.location if diag.location else (None, None)
    return {
        "severity": diag.severity,
        "code": diag.code,
        "message": diag.message,
        "line": line,
        "column": column,
    }


def _question_json(question) -> dict:
    return {"id": question.id, "use_case": question.use_case, "text": question.text}


def _answer_json(answer: ElicitedNfr) -> dict:
    return {
        "question": answer.question_id,
        "answer": answer.answer,
        "category": answer.category,
        "actor": answer.actor,
        "recorded_at": answer.recorded_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
    }


def create_app(
    data_dir: Path | str = "nfr-data",
    default_taxonomy: Taxonomy | None = None,
) -> FastAPI:
    """Build the service over a data directory (created when missing)."""
    store = Store(Path(data_dir), default_taxonomy)
    app = FastAPI(title="nfrkit service")
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status,
            content={"status": exc.status, "code": exc.code, "message": exc.message},
        )

    @app.exception_handler(ElicitationError)
    async def _domain_error(_request: Request, exc: ElicitationError) -> JSONResponse:
        status = 404 if exc.code in _NOT_FOUND_CODES else 422
        return JSONResponse(
            status_code=status,
            content={"status": status, "code": exc.code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"status": 400, "code": "malformed-request", "message": str(exc.errors())},
        )

    # -- models ---------------------------------------------------------------

    @app.post("/models", status_code=201)
    def post_model(body: str = Body(default="", media_type="text/plain")):
        try:
            stored, warnings = store.add_model(body)
        except ModelRejected as exc:
            return JSONResponse(
                status_code=422,
                content={"diagnostics": [_diag_json(d) for d in exc.diagnostics]},
            )
        return {
            "model_id": stored.model_id,
            "warnings": [_diag_json(d) for d in warnings],
        }

    @app.get("/models/{model_id}")
    def get_model(model_id: str):
        stored = store.get_model(model_id)
        return {
            "source": stored.source,
            "actors": list(stored.parsed.actors),
            "use_cases": list(stored.parsed.use_cases),
            "associations": [list(pair) for pair in stored.parsed.associations],
            "questions": [_question_json(q) for q in stored.parsed.questions],
        }

    @app.get("/models/{model_id}/diagram")
    def get_model_diagram(model_id: str, view: str = "questions"):
        if view != "questions":
            raise ApiError(400, "bad-view", "model diagrams support only view=questions")
        stored = store.get_model(model_id)
        dot = export_questions_diagram(stored.parsed, DiagramOptions(view="questions"))
        return Response(content=dot, media_type=DOT_CONTENT_TYPE)

    # -- sessions ---------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def post_session(body: SessionCreate):
        taxonomy = Taxonomy(tuple(body.taxonomy)) if body.taxonomy is not None else None
        session = store.create_session(body.model_id, taxonomy)
        return {
            "session_id": session.session_id,
            "taxonomy": list(session.taxonomy.categories),
        }

    @app.get("/sessions/{session_id}/pending")
    def get_pending(session_id: str):
        session = store.get_session(session_id)
        return [_question_json(q) for q in pending_questions(session)]

    @app.put("/sessions/{session_id}/answers/{question_id}")
    def put_answer(session_id: str, question_id: str, body: AnswerPut):
        def upsert(session: Session) -> Session:
            if session.model.question_by_id(question_id) is None:
                raise ElicitationError(
                    "unknown-question", f"no question {question_id} in model"
                )
            if session.answer_for(question_id) is None:
                return record_answer(
                    session, question_id, body.answer, body.category, body.actor
                )
            return revise_answer(
                session, question_id, body.answer, body.category, body.actor
            )

        updated = store.mutate_session(session_id, upsert)
        answer = updated.answer_for(question_id)
        assert answer is not None
        return _answer_json(answer)

    @app.delete("/sessions/{session_id}/answers/{question_id}", status_code=204)
    def delete_answer(session_id: str, question_id: str):
        store.mutate_session(
            session_id, lambda session: retract_answer(session, question_id)
        )
        return Response(status_code=204)

    @app.get("/sessions/{session_id}/suggest")
    def get_suggestions(session_id: str, text: str = ""):
        session = store.get_session(session_id)
        ranked = suggest_category(text, session.taxonomy)
        return [{"category": category, "score": score} for category, score in ranked]

    def _report_response(artifact, format: str) -> Response:
        if format not in _REPORT_FORMATS:
            raise ApiError(400, "bad-format", "format must be json, csv or md")
        text = render(artifact, _REPORT_FORMATS[format])
        return Response(content=text, media_type=_CONTENT_TYPES[format])

    @app.get("/sessions/{session_id}/table")
    def get_table(session_id: str, format: str = "json"):
        session = store.get_session(session_id)
        return _report_response(elicitation_table(session), format)

    @app.get("/sessions/{session_id}/checklist")
    def get_checklist(session_id: str, format: str = "json"):
        session = store.get_session(session_id)
        return _report_response(checklist_matrix(session), format)

    @app.get("/sessions/{session_id}/coverage")
    def get_coverage(session_id: str, format: str = "json"):
        session = store.get_session(session_id)
        return _report_response(coverage_report(session), format)

    @app.get("/sessions/{session_id}/diagram")
    def get_session_diagram(session_id: str, view: str = "categorized"):
        session = store.get_session(session_id)
        if view == "questions":
            dot = export_questions_diagram(
                session.model, DiagramOptions(view="questions")
            )
        elif view == "categorized":
            dot = export_categorized_diagram(
                session.model, session, DiagramOptions(view="categorized")
            )
        else:
            raise ApiError(400, "bad-view", "view must be questions or categorized")
        return Response(content=dot, media_type=DOT_CONTENT_TYPE)

    return app
