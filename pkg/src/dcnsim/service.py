"""HTTP session service: live circuit steering with an undo/redo timeline.

Sessions are in-memory, capped in number, and evicted after an idle TTL.
Each session serializes its operations; distinct sessions proceed
concurrently.  All amplitude payloads use the polar ``r@phase`` text form.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from . import __version__
from .builtins import BUILTIN_DEFAULTS, BUILTIN_NAMES, BUILTIN_PARAMS, builtin_circuit
from .dsl import format_circuit
from .gates import Circuit, CircuitOp, apply_op, frame_op, measure_op
from .layout import default_layout_spec, parse_layout
from .render import RenderOptions, render_frame
from .separability import PartitionSpec, Tolerances, check_pq, check_qubit
from .state import (
    DEFAULT_COLLAPSE_TOL,
    MeasurementOutcome,
    SplitMix64,
    StateVector,
    basis_state,
    format_amplitude,
    from_amplitudes,
    parse_amplitude,
    probability,
    sample_measure,
)

SERVICE_MAX_QUBITS = 6
DEFAULT_TTL_SECONDS = 3600.0
DEFAULT_CAPACITY = 256


class ApiError(Exception):
    """Error carried to the client as {code, message, span?}."""

    def __init__(self, status: int, code: str, message: str, span: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.span = span


@dataclass
class TimelineEntry:
    op: CircuitOp | None  # None for the initial entry
    state: StateVector
    label: str
    outcome: MeasurementOutcome | None = None


@dataclass
class Session:
    id: str
    n_qubits: int
    init: tuple[complex, ...] | None
    timeline: list[TimelineEntry]
    cursor: int
    rng: SplitMix64
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = 0.0


class SessionStore:
    """In-memory sessions with TTL eviction and a capacity cap."""

    def __init__(
        self,
        ttl: float = DEFAULT_TTL_SECONDS,
        capacity: int = DEFAULT_CAPACITY,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.ttl = ttl
        self.capacity = capacity
        self.clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def _prune(self, now: float) -> None:
        expired = [
            sid for sid, s in self._sessions.items() if now - s.last_access > self.ttl
        ]
        for sid in expired:
            del self._sessions[sid]

    def _make_room(self) -> None:
        # Evict least-recently-used sessions only when a new one needs a slot.
        while len(self._sessions) >= self.capacity:
            oldest = min(self._sessions.values(), key=lambda s: s.last_access)
            del self._sessions[oldest.id]

    def create(self, n_qubits: int, init: tuple[complex, ...] | None, seed: int) -> Session:
        now = self.clock()
        with self._lock:
            self._prune(now)
            self._make_room()
            sid = secrets.token_hex(8)
            state = (
                from_amplitudes(n_qubits, init, mode="validate")
                if init is not None
                else basis_state(n_qubits, 0)
            )
            session = Session(
                id=sid,
                n_qubits=n_qubits,
                init=init,
                timeline=[TimelineEntry(None, state, "initial")],
                cursor=0,
                rng=SplitMix64(seed),
                last_access=now,
            )
            self._sessions[sid] = session
            return session

    def get(self, session_id: str) -> Session:
        now = self.clock()
        with self._lock:
            self._prune(now)
            session = self._sessions.get(session_id)
            if session is None:
                raise ApiError(404, "unknown_session", f"no session {session_id!r}")
            session.last_access = now
            return session

    def count(self) -> int:
        with self._lock:
            return len(self._sessions)


def record_to_op(record: dict) -> CircuitOp:
    """Build a CircuitOp from its JSON record; 422 on malformed input."""
    if not isinstance(record, dict):
        raise ApiError(422, "invalid_op", "op must be a JSON object")
    kind = record.get("kind")
    try:
        if kind == "frame":
            return frame_op(str(record.get("label", "")))
        if kind == "measure":
            (target,) = [int(q) for q in record.get("targets", ())]
            forced = record.get("forced")
            if forced is not None:
                forced = int(forced)
            return measure_op(target, forced)
        if kind == "gate":
            targets = tuple(int(q) for q in record.get("targets", ()))
            controls = tuple(int(q) for q in record.get("controls", ()))
            theta = record.get("theta")
            if theta is not None:
                theta = float(theta)
            matrix = record.get("matrix")
            if matrix is not None:
                matrix = tuple(parse_amplitude(str(z)) for z in matrix)
            return CircuitOp(
                kind="gate",
                name=str(record.get("name", "")),
                targets=targets,
                controls=controls,
                theta=theta,
                matrix=matrix,
            )
    except (TypeError, ValueError) as exc:
        raise ApiError(422, "invalid_op", f"malformed op: {exc}") from None
    raise ApiError(422, "invalid_op", f"unknown op kind {kind!r}")


def op_to_record(op: CircuitOp) -> dict:
    return {
        "kind": op.kind,
        "name": op.name,
        "targets": list(op.targets),
        "controls": list(op.controls),
        "theta": op.theta,
        "matrix": (
            [format_amplitude(z) for z in op.matrix] if op.matrix is not None else None
        ),
        "forced": op.forced,
        "label": op.label,
        "text": op.text(),
    }


def build_app(
    tolerances: Tolerances | None = None,
    ttl: float = DEFAULT_TTL_SECONDS,
    capacity: int = DEFAULT_CAPACITY,
    clock: Callable[[], float] = time.monotonic,
) -> FastAPI:
    """Assemble the FastAPI application around one session store."""
    tol = tolerances or Tolerances()
    store = SessionStore(ttl=ttl, capacity=capacity, clock=clock)
    app = FastAPI(title="dcnsim session service", version=__version__)
    app.state.store = store
    app.state.tolerances = tol

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        body = {"code": exc.code, "message": exc.message}
        if exc.span is not None:
            body["span"] = exc.span
        return JSONResponse(status_code=exc.status, content=body)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "invalid_request", "message": str(exc.errors()[:3])},
        )

    def summary(session: Session) -> dict:
        entry = session.timeline[session.cursor]
        state = entry.state
        n = session.n_qubits
        outcome = None
        if entry.outcome is not None:
            outcome = {
                "qubit": entry.outcome.qubits[0],
                "bit": entry.outcome.bits[0],
                "probability": entry.outcome.probability,
            }
        return {
            "session": session.id,
            "n_qubits": n,
            "cursor": session.cursor,
            "timeline_length": len(session.timeline),
            "can_undo": session.cursor > 0,
            "can_redo": session.cursor < len(session.timeline) - 1,
            "label": entry.label,
            "amplitudes": [format_amplitude(a) for a in state.amplitudes],
            "probabilities": {
                str(q): probability(state, (q,), (1,)) for q in range(1, n + 1)
            },
            "verdicts": {
                str(q): check_qubit(state, q, tol).verdict for q in range(1, n + 1)
            },
            "outcome": outcome,
        }

    @app.post("/session")
    def create_session(body: dict | None = Body(None)) -> dict:
        body = body or {}
        n = body.get("n_qubits")
        if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= SERVICE_MAX_QUBITS:
            raise ApiError(
                400, "invalid_n", f"n_qubits must be an integer in 1..{SERVICE_MAX_QUBITS}"
            )
        seed = body.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ApiError(400, "invalid_seed", "seed must be an integer")
        init = None
        if body.get("amps") is not None:
            amps = body["amps"]
            if not isinstance(amps, list):
                raise ApiError(400, "invalid_state", "amps must be a list of strings")
            try:
                init = tuple(parse_amplitude(str(a)) for a in amps)
                from_amplitudes(n, init, mode="validate")
            except ValueError as exc:
                raise ApiError(400, "invalid_state", str(exc)) from None
            if len(init) != 1 << n:
                raise ApiError(
                    400, "invalid_state", f"expected {1 << n} amplitudes, got {len(init)}"
                )
        session = store.create(n, init, seed)
        with session.lock:
            return summary(session)

    @app.post("/session/{session_id}/op")
    def apply_session_op(session_id: str, body: dict = Body(...)) -> dict:
        session = store.get(session_id)
        op = record_to_op(body)
        with session.lock:
            state = session.timeline[session.cursor].state
            try:
                op.validate(session.n_qubits)
            except ValueError as exc:
                raise ApiError(422, "invalid_op", str(exc)) from None
            outcome = None
            if op.kind == "measure":
                q = op.targets[0]
                if op.forced is not None:
                    p = probability(state, (q,), (op.forced,))
                    if p <= DEFAULT_COLLAPSE_TOL:
                        raise ApiError(
                            409,
                            "impossible_outcome",
                            f"qubit {q} = {op.forced} has probability {p:.3e}",
                        )
                    new_state, outcome = apply_op(state, op)
                else:
                    outcome, new_state = sample_measure(state, (q,), rng=session.rng)
                    op = measure_op(q, outcome.bits[0])  # concretize for replay
            else:
                try:
                    new_state, outcome = apply_op(state, op)
                except ValueError as exc:
                    raise ApiError(422, "invalid_op", str(exc)) from None
            del session.timeline[session.cursor + 1 :]
            label = op.label if op.kind == "frame" else op.text()
            session.timeline.append(TimelineEntry(op, new_state, label, outcome))
            session.cursor += 1
            return summary(session)

    @app.post("/session/{session_id}/undo")
    def undo(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            if session.cursor == 0:
                raise ApiError(409, "cursor_boundary", "nothing to undo")
            session.cursor -= 1
            return summary(session)

    @app.post("/session/{session_id}/redo")
    def redo(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            if session.cursor >= len(session.timeline) - 1:
                raise ApiError(409, "cursor_boundary", "nothing to redo")
            session.cursor += 1
            return summary(session)

    @app.get("/session/{session_id}/state")
    def get_state(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            return summary(session)

    @app.get("/session/{session_id}/render.svg")
    def get_render(session_id: str, layout: str | None = None) -> Response:
        session = store.get(session_id)
        with session.lock:
            state = session.timeline[session.cursor].state
            label = session.timeline[session.cursor].label
        try:
            spec = parse_layout(layout) if layout else default_layout_spec(session.n_qubits)
            svg = render_frame(
                state, spec, options=RenderOptions(), caption=label, tolerances=tol
            )
        except ValueError as exc:
            raise ApiError(422, "layout_mismatch", str(exc)) from None
        return Response(content=svg, media_type="image/svg+xml")

    @app.get("/session/{session_id}/separability")
    def get_separability(
        session_id: str,
        partition: str | None = None,
        order: str | None = None,
        qubit: int | None = None,
    ) -> dict:
        session = store.get(session_id)
        with session.lock:
            state = session.timeline[session.cursor].state
        if (partition is None) == (qubit is None):
            raise ApiError(
                422, "invalid_query", "pass exactly one of partition=P,Q or qubit=k"
            )
        try:
            if qubit is not None:
                report = check_qubit(state, qubit, tol)
            else:
                parts = [int(tok) for tok in partition.split(",")]
                if len(parts) != 2:
                    raise ValueError(f"partition must be P,Q, got {partition!r}")
                order_tuple = (
                    tuple(int(tok) for tok in order.split(",")) if order else None
                )
                spec = PartitionSpec(parts[0], parts[1], qubit_order=order_tuple)
                report = check_pq(state, spec, tol)
        except ValueError as exc:
            raise ApiError(422, "invalid_partition", str(exc)) from None
        record = report.to_record()
        record["session"] = session.id
        record["n_qubits"] = session.n_qubits
        return record

    @app.get("/session/{session_id}/export")
    def export_session(session_id: str) -> PlainTextResponse:
        session = store.get(session_id)
        with session.lock:
            ops = tuple(
                entry.op
                for entry in session.timeline[1 : session.cursor + 1]
                if entry.op is not None
            )
            circuit = Circuit(
                session.n_qubits, ops, name="session", init=session.init
            )
        return PlainTextResponse(
            format_circuit(circuit),
            headers={"Content-Disposition": 'attachment; filename="session.dcn"'},
        )

    @app.get("/config")
    def get_config() -> dict:
        return {
            "version": __version__,
            "max_qubits": SERVICE_MAX_QUBITS,
            "ttl_seconds": store.ttl,
            "capacity": store.capacity,
            "tolerances": {
                "zero_tol": tol.zero_tol,
                "sep_tol": tol.sep_tol,
                "residual_tol": tol.residual_tol,
            },
        }

    @app.get("/builtin")
    def list_builtins() -> dict:
        return {
            "builtins": [
                {
                    "name": name,
                    "params": list(BUILTIN_PARAMS.get(name, ())),
                    "default": BUILTIN_DEFAULTS.get(name),
                }
                for name in BUILTIN_NAMES
            ]
        }

    @app.get("/builtin/{name}")
    def get_builtin(name: str, param: str | None = None) -> dict:
        if name not in BUILTIN_NAMES:
            raise ApiError(404, "unknown_builtin", f"no builtin {name!r}")
        try:
            circuit = builtin_circuit(name, param)
        except ValueError as exc:
            raise ApiError(422, "invalid_param", str(exc)) from None
        return {
            "name": name,
            "param": param or BUILTIN_DEFAULTS.get(name),
            "n_qubits": circuit.n_qubits,
            "circuit_name": circuit.name,
            "init": (
                [format_amplitude(a) for a in circuit.init]
                if circuit.init is not None
                else None
            ),
            "ops": [op_to_record(op) for op in circuit.ops],
            "text": format_circuit(circuit),
        }

    return app
