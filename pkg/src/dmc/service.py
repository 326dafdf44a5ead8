"""Interactive step-by-step solving sessions over HTTP/JSON: load a problem,
apply tasks or assignments one at a time, inspect the live network, undo, and
complete the remainder automatically.
"""

from __future__ import annotations

import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .activation import ActivationReport, check_activators, condition_holds
from .engine import Mode, Polarity, Task, execute_task, solve
from .language import DmcError, DmcSemanticError, DmcSyntaxError, parse
from .model import ConstraintNetwork, active_variables, validate
from .propagation import Counters, assign_variable, effective_bounds, initialize_values
from .trail import Trail

DEFAULT_TTL_SECONDS = 3600.0


@dataclass
class StepEntry:
    step: int
    action: dict
    tick_before: int
    tick: int
    activation: ActivationReport


@dataclass
class Session:
    id: str
    network: ConstraintNetwork
    trail: Trail
    steps: list[StepEntry] = field(default_factory=list)
    load_activation: ActivationReport = field(default_factory=ActivationReport)
    last_activation: ActivationReport = field(default_factory=ActivationReport)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)


class StepFailure(Exception):
    pass


class SessionStore:
    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS):
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _purge(self) -> None:
        now = time.monotonic()
        stale = [sid for sid, s in self._sessions.items() if now - s.last_used > self.ttl]
        for sid in stale:
            del self._sessions[sid]

    def create(self, text: str) -> Session:
        doc = parse(text)
        network = doc.to_network()
        problems = validate(network)
        if problems:
            raise DmcSemanticError(problems)
        session = Session(uuid.uuid4().hex, network, Trail())
        # load-time values and activation fixpoint (tick 0): sections demanded
        # by always-active conditions come up before the first step
        initialize_values(network, session.trail, Counters())
        session.load_activation = check_activators(network, session.trail, Counters())
        session.last_activation = session.load_activation
        with self._lock:
            self._purge()
            self._sessions[session.id] = session
        return session

    def get(self, sid: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(sid)
            if session is None:
                raise KeyError(sid)
            session.last_used = time.monotonic()
            return session

    def delete(self, sid: str) -> None:
        with self._lock:
            if sid not in self._sessions:
                raise KeyError(sid)
            del self._sessions[sid]


def state_document(session: Session) -> dict:
    net = session.network
    act_vars = active_variables(net)
    constraints = []
    for c in net.constraints.values():
        entry: dict = {
            "id": c.id,
            "kind": "base" if c.is_base else c.receiver.value,
            "parent": c.parent,
            "children": list(c.children),
            "active": c.active,
            "value": c.value.value,
        }
        if c.is_base:
            entry["variable"] = c.variable
            entry["relation"] = {"kind": c.relation.kind.value, "value": c.relation.value}
            entry["min"] = entry["max"] = None
        else:
            lo, hi = effective_bounds(net, c)
            entry["min"] = lo
            entry["max"] = hi
        constraints.append(entry)
    variables = [
        {
            "id": v.id,
            "domain": list(v.domain),
            "assignment": v.assignment,
            "active": v.id in act_vars,
            "initial": v.initial,
        }
        for v in net.variables.values()
    ]
    activators = []
    for a in net.activators.values():
        all_active = all(net.constraints[t].active for t in a.targets)
        any_active = any(net.constraints[t].active for t in a.targets)
        holds = condition_holds(net, a.condition_kind, a.condition_ref)
        activators.append({
            "id": a.id,
            "condition": {"kind": a.condition_kind.value, "ref": a.condition_ref},
            "action": a.action.value,
            "targets": list(a.targets),
            "fired": a.action.value == "activate" and holds and all_active,
            "violated": a.action.value == "require-inactive" and holds and any_active,
        })
    return {
        "top": net.top,
        "tick": session.trail.tick,
        "constraints": constraints,
        "variables": variables,
        "activators": activators,
        "stepLog": [
            {
                "step": e.step,
                "action": e.action,
                "tick": e.tick,
                "activation": {"fired": e.activation.fired, "violated": e.activation.violated},
            }
            for e in session.steps
        ],
        "lastActivation": {
            "fired": session.last_activation.fired,
            "violated": session.last_activation.violated,
        },
    }


def _apply_task(session: Session, action: dict) -> ActivationReport:
    net = session.network
    cid = action.get("constraint")
    polarity = action.get("polarity")
    if cid not in net.constraints:
        raise HTTPException(422, f"unknown constraint {cid}")
    if polarity not in ("satisfy", "unsatisfy"):
        raise HTTPException(422, f"polarity must be satisfy or unsatisfy, got {polarity!r}")
    if not net.constraints[cid].active:
        raise StepFailure(f"constraint {cid} is not active")
    task = Task(cid, Polarity(polarity))
    active_before = {c for c, node in net.constraints.items() if node.active}
    if not execute_task(net, session.trail, task):
        raise StepFailure(f"no consistent branch for {polarity}:{cid}")
    fired = [
        a.id for a in net.activators.values()
        if a.action.value == "activate"
        and any(t not in active_before for t in a.targets)
        and all(net.constraints[t].active for t in a.targets)
    ]
    return ActivationReport(fired=fired)


def _apply_assign(session: Session, action: dict) -> ActivationReport:
    net = session.network
    vid = action.get("variable")
    value = action.get("value")
    if vid not in net.variables:
        raise HTTPException(422, f"unknown variable {vid}")
    var = net.variables[vid]
    if value not in var.domain:
        raise HTTPException(422, f"value {value!r} outside the domain of {vid}")
    if var.assignment is not None:
        if var.assignment == value:
            return ActivationReport()
        raise StepFailure(f"{vid} is already assigned {var.assignment}")
    if vid not in active_variables(net):
        raise StepFailure(f"variable {vid} is not active")
    t0 = session.trail.tick
    session.trail.advance()
    assign_variable(net, session.trail, vid, value, Counters())
    report = check_activators(net, session.trail, Counters())
    if report.violated:
        session.trail.restore(net, t0)
        raise StepFailure(f"assignment violates: {', '.join(report.violated)}")
    return report


def _apply_complete(session: Session, action: dict) -> tuple[ActivationReport, dict | None]:
    mode = action.get("mode", "first")
    if mode not in ("first", "all"):
        raise HTTPException(422, f"mode must be first or all, got {mode!r}")
    net = session.network
    top_task = Task(net.top, Polarity.SATISFY)
    if mode == "all":
        solutions, stats = solve(net, session.trail, top_task, Mode.ALL)
        payload = {
            "solutions": [dict(s.assignment) for s in solutions],
            "solutionCount": len(solutions),
        }
        return ActivationReport(), payload
    solutions, _ = solve(net, session.trail, top_task, Mode.FIRST, commit_first=True)
    if not solutions:
        raise StepFailure("no completion exists from the current state")
    return ActivationReport(), None


def create_app(store: SessionStore | None = None, static_dir: str | None = None) -> FastAPI:
    if store is None:
        ttl = float(os.environ.get("DMC_SESSION_TTL", DEFAULT_TTL_SECONDS))
        store = SessionStore(ttl)
    app = FastAPI(title="dmc session service")

    def _session_or_404(sid: str) -> Session:
        try:
            return store.get(sid)
        except KeyError:
            raise HTTPException(404, f"unknown session {sid}")

    @app.post("/sessions")
    def create_session(body: str = Body(..., media_type="text/plain")):
        try:
            session = store.create(body)
        except DmcSyntaxError as exc:
            raise HTTPException(400, {"message": exc.message, "line": exc.line, "col": exc.col})
        except DmcSemanticError as exc:
            raise HTTPException(400, {"messages": exc.messages})
        except DmcError as exc:
            raise HTTPException(400, str(exc))
        return {"id": session.id}

    @app.get("/sessions/{sid}/state")
    def get_state(sid: str):
        session = _session_or_404(sid)
        with session.lock:
            return state_document(session)

    @app.post("/sessions/{sid}/steps")
    def apply_step(sid: str, action: dict = Body(...)):
        session = _session_or_404(sid)
        with session.lock:
            kind = action.get("action")
            tick_before = session.trail.tick
            extra = None
            try:
                if kind == "task":
                    report = _apply_task(session, action)
                elif kind == "assign":
                    report = _apply_assign(session, action)
                elif kind == "complete":
                    report, extra = _apply_complete(session, action)
                elif kind == "undo":
                    if not session.steps:
                        raise StepFailure("nothing to undo")
                    last = session.steps.pop()
                    session.trail.restore(session.network, last.tick_before)
                    session.last_activation = (
                        session.steps[-1].activation if session.steps
                        else session.load_activation
                    )
                    report = session.last_activation
                else:
                    raise HTTPException(422, f"unknown action {kind!r}")
            except StepFailure as exc:
                doc = state_document(session)
                doc["failure"] = str(exc)
                return JSONResponse(doc)
            mutated = session.trail.tick != tick_before or kind == "undo"
            if kind in ("task", "assign") or (kind == "complete" and mutated and extra is None):
                session.steps.append(StepEntry(
                    step=len(session.steps) + 1,
                    action=action,
                    tick_before=tick_before,
                    tick=session.trail.tick,
                    activation=report,
                ))
                session.last_activation = report
            doc = state_document(session)
            if extra:
                doc.update(extra)
            return doc

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str):
        try:
            store.delete(sid)
        except KeyError:
            raise HTTPException(404, f"unknown session {sid}")
        return {"deleted": sid}

    @app.get("/fixtures/{name}")
    def get_fixture(name: str):
        from fastapi.responses import PlainTextResponse

        from .fixtures import fixture_text

        if name not in ("car", "mackworth"):
            raise HTTPException(404, f"unknown fixture {name}")
        return PlainTextResponse(fixture_text(name))

    if static_dir is None:
        candidate = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
        if candidate.is_dir():
            static_dir = str(candidate)
    if static_dir:
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

        @app.get("/")
        def index():
            return FileResponse(os.path.join(static_dir, "index.html"))

    return app
