"""JSON API over elicitation sessions, fitting, and policy previews.

Routes:

- ``POST /sessions`` with ``{"protocol": ...}`` creates a session.
- ``GET /sessions`` lists stored session envelopes.
- ``GET /sessions/{id}/next`` returns the next question or a done marker.
- ``POST /sessions/{id}/answers`` records ``{"question_id", "chosen"}``.
- ``GET /sessions/{id}/profile`` returns the risk class, fit results, and
  a policy preview (airport lead time, portfolio pick) once complete.

All bodies are JSON; errors return ``{"code", "message"}``. Per-session
operations are serialized with per-id locks; distinct sessions never
block each other.
"""

from __future__ import annotations

import random
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .elicitation import (
    PROTOCOLS,
    ElicitationError,
    SessionClosedError,
    SessionState,
)
from .profiles import build_profile
from .store import SessionStore, UnknownSessionError, envelope_from_state


class CreateSessionBody(BaseModel):
    protocol: str
    adaptive: bool = True
    seed: Optional[int] = None
    budget: Optional[int] = None


class AnswerBody(BaseModel):
    question_id: str
    chosen: str


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def make_app(
    store: SessionStore | str | Path,
    default_budget: int = 20,
    ui_dir: Optional[str | Path] = None,
) -> FastAPI:
    if not isinstance(store, SessionStore):
        store = SessionStore(store)

    app = FastAPI(title="riskcal session service")
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _error(422, "validation_error", str(exc.errors()))

    @app.exception_handler(UnknownSessionError)
    async def on_unknown_session(request: Request, exc: UnknownSessionError):
        return _error(404, "unknown_session", f"no session {exc.args[0]!r}")

    @app.exception_handler(SessionClosedError)
    async def on_closed(request: Request, exc: SessionClosedError):
        return _error(409, "session_closed", str(exc))

    @app.exception_handler(ElicitationError)
    async def on_elicitation_error(request: Request, exc: ElicitationError):
        return _error(400, "invalid_request", str(exc))

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        if body.protocol not in PROTOCOLS:
            raise ElicitationError(
                f"unknown protocol {body.protocol!r}; expected one of {PROTOCOLS}"
            )
        seed = body.seed if body.seed is not None else random.SystemRandom().randrange(2**31)
        state = SessionState(
            protocol=body.protocol,
            seed=seed,
            budget=body.budget or default_budget,
            adaptive=body.adaptive,
        )
        with store.lock(state.session_id):
            return store.create(state)

    @app.get("/sessions")
    def list_sessions() -> list[dict]:
        return [store.load_envelope(sid) for sid in store.list_ids()]

    @app.get("/sessions/{session_id}/next")
    def next_question(session_id: str) -> dict:
        with store.lock(session_id):
            state = store.load_state(session_id)
        question = state.next_question()
        payload = {
            "session_id": session_id,
            "done": question is None,
            "progress": {"answered": len(state.answers), "budget": state.budget},
        }
        payload["question"] = question.to_dict() if question is not None else None
        return payload

    @app.post("/sessions/{session_id}/answers")
    def submit_answer(session_id: str, body: AnswerBody) -> dict:
        timestamp = datetime.now(timezone.utc).isoformat()
        with store.lock(session_id):
            state = store.load_state(session_id)
            state.answer(body.question_id, body.chosen, timestamp)
            return store.record_answer(state, body.question_id, body.chosen, timestamp)

    @app.get("/sessions/{session_id}/profile")
    def profile(session_id: str):
        with store.lock(session_id):
            state = store.load_state(session_id)
        if state.status != "complete":
            return _error(409, "session_open", f"session {session_id} is not complete yet")
        return build_profile(state)

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def envelope_of(state: SessionState) -> dict:
    return envelope_from_state(state)
