"""JSON-over-HTTP session service for the interactive workbench.

Sessions live in memory; each holds the stack of engine states it has passed
through, so undo is a pop and exports are replayable.  Requests touching one
session are serialized by a per-session lock; distinct sessions are fully
independent.

Status codes: 404 unknown session, 409 operations on a terminal state, 422
validation or precondition failures (the body carries the engine's error
code verbatim).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .engine import EngineState, apply_op, new_state
from .errors import HyperforgeError, StateTerminatedError
from .fileio import (
    CircuitFile,
    canonical_json,
    decomposition_json,
    export_dot,
    state_to_json,
)
from .ops import GaussianOp
from .oracle import (
    FockConfig,
    default_cutoff,
    default_squeezing,
    verify_measurement,
    verify_rule,
)


@dataclass
class Session:
    id: str
    states: list[EngineState]
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def current(self) -> EngineState:
        return self.states[-1]

    def circuit(self) -> CircuitFile:
        first = self.states[0]
        return CircuitFile(first.modes, first.phase,
                           tuple(h.op for h in self.current.history))


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._counter = itertools.count(1)
        self._lock = threading.Lock()

    def create(self, initial: EngineState) -> Session:
        with self._lock:
            sid = f"s{next(self._counter)}"
            session = Session(sid, [initial])
            self._sessions[sid] = session
            return session

    def get(self, sid: str) -> Session | None:
        return self._sessions.get(sid)


def _error_response(exc: HyperforgeError, status: int = 422) -> JSONResponse:
    if isinstance(exc, StateTerminatedError):
        status = 409
    return JSONResponse(exc.as_dict(), status_code=status)


def create_app() -> FastAPI:
    app = FastAPI(title="hyperforge", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    store = SessionStore()
    app.state.sessions = store

    @app.exception_handler(HyperforgeError)
    async def _engine_error(request: Request, exc: HyperforgeError):
        return _error_response(exc)

    def _get_session(sid: str) -> Session | JSONResponse:
        session = store.get(sid)
        if session is None:
            return JSONResponse({"error": "UnknownSession", "message": sid},
                                status_code=404)
        return session

    @app.post("/sessions")
    def create_session(body: dict):
        if "circuit" in body:
            circuit = CircuitFile.from_json(body["circuit"])
            session = store.create(circuit.initial_state())
            # keep intermediate states so undo steps back through the circuit
            st = session.current
            for op in circuit.ops:
                st = apply_op(st, op)
                session.states.append(st)
        else:
            modes = body.get("modes")
            if not modes:
                return JSONResponse(
                    {"error": "MalformedFile", "message": "need 'modes' or 'circuit'"},
                    status_code=422)
            session = store.create(new_state(tuple(modes)))
        return {"id": session.id, "state": decomposition_json(session.current)}

    @app.get("/sessions/{sid}/state")
    def get_state(sid: str):
        session = _get_session(sid)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            return decomposition_json(session.current)

    @app.post("/sessions/{sid}/ops")
    def post_op(sid: str, body: dict):
        session = _get_session(sid)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            op = GaussianOp.from_json(body)
            next_state = apply_op(session.current, op)
            session.states.append(next_state)
            return decomposition_json(next_state)

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        session = _get_session(sid)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            if len(session.states) <= 1:
                return JSONResponse(
                    {"error": "NothingToUndo", "message": "history is empty"},
                    status_code=422)
            session.states.pop()
            return decomposition_json(session.current)

    @app.post("/sessions/{sid}/verify")
    def verify(sid: str, body: dict | None = None):
        session = _get_session(sid)
        if isinstance(session, JSONResponse):
            return session
        body = body or {}
        with session.lock:
            if len(session.states) < 2:
                return JSONResponse(
                    {"error": "NothingToVerify", "message": "no op applied yet"},
                    status_code=422)
            previous, current = session.states[-2], session.states[-1]
            op = current.history[-1].op
            r = float(body.get("r", default_squeezing()))
            cutoff = int(body.get("cutoff", default_cutoff()))
            cfg = FockConfig.create(previous.modes, cutoff=cutoff, squeezing=r)
            if op.kind == "MeasP":
                return JSONResponse(
                    {"error": "UnsupportedVerification",
                     "message": "momentum measurements have no symbolic post-state"},
                    status_code=422)
            if op.kind == "MeasQ":
                check = verify_measurement(op, previous.phase, current.phase, cfg)
            else:
                check = verify_rule(op, previous.phase, current.phase, cfg)
            return check.as_dict()

    @app.get("/sessions/{sid}/export")
    def export(sid: str, format: str = "circuit"):
        session = _get_session(sid)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            if format == "dot":
                return Response(export_dot(session.current), media_type="text/plain")
            if format == "circuit":
                return Response(canonical_json(session.circuit().to_json()),
                                media_type="application/json")
            if format == "state":
                return Response(canonical_json(state_to_json(session.current)),
                                media_type="application/json")
            return JSONResponse(
                {"error": "MalformedFile", "message": f"unknown format {format!r}"},
                status_code=422)

    return app
