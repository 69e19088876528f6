"""HTTP front door for live sessions.

Sessions are created, advanced one answer at a time, inspected, and
exported as transcripts.  All engine work happens synchronously inside
the request that triggers it; a per-session lock serializes racing
answers.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from ._version import __version__
from .expansion import ALGORITHM_QUEUE, ALGORITHMS, ExpansionConfig
from .graph import GraphError
from .oracle import ProtocolError, answer_from_jsonable
from .session import Session, SessionConflictError, encode_transcript


class CreateSessionRequest(BaseModel):
    x: str
    y: str
    algorithm: str = ALGORITHM_QUEUE
    config: dict | None = None


class AnswerRequest(BaseModel):
    query_id: str
    answer: dict


def create_app() -> FastAPI:
    app = FastAPI(title="confsel", version=__version__)
    # The service fronts a local tool; let browser clients served from
    # any origin (a file, a dev server) talk to it.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def lookup(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(
                status_code=404, detail=f"unknown session {session_id!r}"
            )
        return session

    @app.post("/sessions", status_code=201)
    def create_session(request: CreateSessionRequest) -> dict:
        if request.algorithm not in ALGORITHMS:
            raise HTTPException(
                status_code=422,
                detail=f"unknown algorithm {request.algorithm!r}; "
                f"expected one of {list(ALGORITHMS)}",
            )
        try:
            config = (
                ExpansionConfig.from_jsonable(request.config)
                if request.config is not None
                else ExpansionConfig()
            )
            session = Session(
                uuid.uuid4().hex[:12],
                request.x,
                request.y,
                config,
                request.algorithm,
            )
        except (GraphError, ValueError, TypeError) as err:
            raise HTTPException(status_code=422, detail=str(err))
        with registry_lock:
            sessions[session.session_id] = session
        return session.view()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return lookup(session_id).view()

    @app.post("/sessions/{session_id}/answers")
    def post_answer(session_id: str, request: AnswerRequest) -> dict:
        session = lookup(session_id)
        try:
            answer = answer_from_jsonable(request.answer)
        except ProtocolError as err:
            raise HTTPException(status_code=422, detail=str(err))
        try:
            session.answer(request.query_id, answer)
        except SessionConflictError as err:
            raise HTTPException(status_code=409, detail=str(err))
        except ProtocolError as err:
            raise HTTPException(status_code=422, detail=str(err))
        return session.view()

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str) -> PlainTextResponse:
        session = lookup(session_id)
        return PlainTextResponse(
            encode_transcript(session.transcript()),
            media_type="application/x-ndjson",
        )

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str) -> dict:
        session = lookup(session_id)
        session.abort()
        return session.view()

    return app
