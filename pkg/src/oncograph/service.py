"""Interactive session layer: create a tumor session, grow it in stages,
change switch values mid-run, step, and read snapshots/metrics.

Mutating commands on one session serialize behind a per-session lock; a busy
session answers 409. Every mutation is appended to a command log so a run can
be replayed byte-identically on a fresh service.
"""

from __future__ import annotations

import threading
import time
import uuid
from copy import deepcopy
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .analysis import derived_cell_profile
from .dynamics import (
    AngiogenicSwitch,
    DriverParams,
    ModelState,
    StepMetrics,
    growth_probability,
    step as model_step,
)
from .errors import ConfigError, ProfileUndefinedError
from .graph import snapshot


class DriverConfigDoc(BaseModel):
    u: float = Field(default=1e-6, ge=0.0, le=1.0)
    d: int = Field(default=100, ge=0)
    k: int = Field(default=3, ge=1)
    N: int = Field(default=50, ge=1)


class SwitchConfigDoc(BaseModel):
    angioprevention: float = Field(ge=0.0, le=1.0)
    angiogenesis: float = Field(ge=0.0, le=1.0)
    quiescent: float = Field(ge=0.0, le=1.0)

    def to_switch(self) -> AngiogenicSwitch:
        return AngiogenicSwitch(
            angioprevention=self.angioprevention,
            angiogenesis=self.angiogenesis,
            quiescent=self.quiescent,
        )


class CreateSessionDoc(BaseModel):
    n: int = Field(ge=1)
    p_edge: float = Field(ge=0.0, le=1.0)
    driver: DriverConfigDoc = DriverConfigDoc()
    switch: SwitchConfigDoc = SwitchConfigDoc(
        angioprevention=0.4, angiogenesis=0.6, quiescent=0.2
    )
    seed: int = 0


class GrowDoc(BaseModel):
    n_new: int = Field(ge=0)


class StepDoc(BaseModel):
    k: int = Field(ge=0)


@dataclass
class Session:
    session_id: str
    model: ModelState
    create_args: dict
    history: list[StepMetrics] = field(default_factory=list)
    switch_changes: list[dict] = field(default_factory=list)
    command_log: list[dict] = field(default_factory=list)
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def touch(self) -> None:
        self.updated = time.time()


def _metrics_doc(m: StepMetrics) -> dict:
    return m.as_dict()


def _build_model(doc: CreateSessionDoc) -> ModelState:
    return ModelState.create(
        n=doc.n,
        p_edge=doc.p_edge,
        driver=DriverParams(u=doc.driver.u, d=doc.driver.d, k=doc.driver.k, N=doc.driver.N),
        switch=doc.switch.to_switch(),
        seed=doc.seed,
    )


def create_app(ttl_seconds: float = 3600.0) -> FastAPI:
    app = FastAPI(title="oncograph session service")
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()

    def evict_expired() -> None:
        now = time.time()
        with store_lock:
            for sid in [s for s, sess in sessions.items() if now - sess.updated > ttl_seconds]:
                del sessions[sid]

    def get_session(session_id: str) -> Session | None:
        evict_expired()
        with store_lock:
            return sessions.get(session_id)

    def error(status: int, message: str, field_path: str | None = None) -> JSONResponse:
        body = {"error": message}
        if field_path is not None:
            body["field"] = field_path
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        first = exc.errors()[0]
        path = ".".join(str(p) for p in first["loc"] if p != "body")
        return error(422, first["msg"], path or None)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(doc: CreateSessionDoc):
        try:
            model = _build_model(doc)
        except ConfigError as exc:
            return error(422, str(exc), exc.field)
        sid = uuid.uuid4().hex
        sess = Session(
            session_id=sid, model=model, create_args=doc.model_dump()
        )
        sess.command_log.append({"op": "create", "args": doc.model_dump()})
        with store_lock:
            sessions[sid] = sess
        return {"session_id": sid, "node_count": model.graph.node_count}

    @app.post("/sessions/{session_id}/grow")
    def grow(session_id: str, doc: GrowDoc):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        if not sess.lock.acquire(blocking=False):
            return error(409, "session busy")
        try:
            p_redirect = sess.model.grow(doc.n_new)
            sess.command_log.append({"op": "grow", "args": {"n_new": doc.n_new}})
            sess.touch()
            return {
                "n_new": doc.n_new,
                "node_count": sess.model.graph.node_count,
                "p_redirect": p_redirect,
            }
        finally:
            sess.lock.release()

    @app.post("/sessions/{session_id}/switch")
    def set_switch(session_id: str, doc: SwitchConfigDoc):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        if not sess.lock.acquire(blocking=False):
            return error(409, "session busy")
        try:
            sess.model.set_switch(doc.to_switch())
            change = {"step": sess.model.step_index, **doc.model_dump()}
            sess.switch_changes.append(change)
            sess.command_log.append({"op": "switch", "args": doc.model_dump()})
            sess.touch()
            return {"ok": True, "switch": doc.model_dump()}
        finally:
            sess.lock.release()

    @app.post("/sessions/{session_id}/step")
    def do_step(session_id: str, doc: StepDoc):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        if not sess.lock.acquire(blocking=False):
            return error(409, "session busy")
        try:
            rows = [model_step(sess.model) for _ in range(doc.k)]
            sess.history.extend(rows)
            sess.command_log.append({"op": "step", "args": {"k": doc.k}})
            sess.touch()
            return {"metrics": [_metrics_doc(m) for m in rows]}
        finally:
            sess.lock.release()

    @app.get("/sessions/{session_id}/snapshot")
    def get_snapshot(session_id: str):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        return snapshot(sess.model.graph, sess.model.states)

    @app.get("/sessions/{session_id}/metrics")
    def get_metrics(session_id: str):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        return {
            "metrics": [_metrics_doc(m) for m in sess.history],
            "switch_changes": sess.switch_changes,
        }

    @app.get("/sessions/{session_id}/profile")
    def get_profile(session_id: str):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        try:
            prof = derived_cell_profile(sess.model.graph, pattern_index=1)
        except ProfileUndefinedError as exc:
            return error(409, str(exc))
        return {
            "derived_cell_ids": list(prof.derived_cell_ids),
            "essential_genomic_profile": prof.essential_genomic_profile,
            "mean_genomic_profile": prof.mean_genomic_profile,
        }

    @app.get("/sessions/{session_id}/log")
    def get_log(session_id: str):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        return {"log": sess.command_log}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        model = sess.model
        return {
            "session_id": session_id,
            "node_count": model.graph.node_count,
            "step_index": model.step_index,
            "p_redirect": growth_probability(model.driver),
            "switch": {
                "angioprevention": model.switch.angioprevention,
                "angiogenesis": model.switch.angiogenesis,
                "quiescent": model.switch.quiescent,
            },
        }

    @app.post("/sessions/{session_id}/fork")
    def fork(session_id: str):
        sess = get_session(session_id)
        if sess is None:
            return error(404, "unknown session")
        if not sess.lock.acquire(blocking=False):
            return error(409, "session busy")
        try:
            new_id = uuid.uuid4().hex
            clone = Session(
                session_id=new_id,
                model=deepcopy(sess.model),
                create_args=deepcopy(sess.create_args),
                history=list(sess.history),
                switch_changes=deepcopy(sess.switch_changes),
                command_log=deepcopy(sess.command_log),
            )
            with store_lock:
                sessions[new_id] = clone
            return {"session_id": new_id}
        finally:
            sess.lock.release()

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str):
        with store_lock:
            if session_id not in sessions:
                return error(404, "unknown session")
            del sessions[session_id]
        return {"ok": True}

    return app


def replay_log(log: list[dict]) -> dict:
    """Rebuild a session purely from its command log; returns the final
    snapshot document. The log fully determines the outcome."""
    if not log or log[0]["op"] != "create":
        raise ConfigError("command log must start with a create entry")
    model = _build_model(CreateSessionDoc(**log[0]["args"]))
    for entry in log[1:]:
        op, args = entry["op"], entry["args"]
        if op == "grow":
            model.grow(args["n_new"])
        elif op == "switch":
            model.set_switch(SwitchConfigDoc(**args).to_switch())
        elif op == "step":
            for _ in range(args["k"]):
                model_step(model)
        else:
            raise ConfigError(f"unknown command {op!r}")
    return snapshot(model.graph, model.states)
