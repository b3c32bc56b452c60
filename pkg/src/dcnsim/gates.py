"""Gate matrices, circuit ops, and circuit execution with a frame trace."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .state import (
    MeasurementOutcome,
    SplitMix64,
    StateVector,
    basis_state,
    from_amplitudes,
    measure_partial,
    sample_measure,
)

UNITARY_TOL = 1e-12

SQRT2_INV = 1.0 / math.sqrt(2.0)

GATES: dict[str, np.ndarray] = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "h": np.array([[SQRT2_INV, SQRT2_INV], [SQRT2_INV, -SQRT2_INV]], dtype=np.complex128),
    "s": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "t": np.array([[1, 0], [0, complex(SQRT2_INV, SQRT2_INV)]], dtype=np.complex128),
}

GATE_NAMES = ("x", "y", "z", "h", "s", "t")


def phase_gate(theta: float) -> np.ndarray:
    """diag(1, e^{i theta})."""
    return np.array([[1, 0], [0, complex(math.cos(theta), math.sin(theta))]], dtype=np.complex128)


def unitary2(entries: Iterable[complex]) -> np.ndarray:
    """Validate a row-major 2x2 unitary (U U^dagger = I within 1e-12)."""
    mat = np.asarray(list(entries), dtype=np.complex128)
    if mat.shape != (4,):
        raise ValueError("a 2x2 unitary needs exactly 4 entries")
    mat = mat.reshape(2, 2)
    if not np.allclose(mat @ mat.conj().T, np.eye(2), atol=UNITARY_TOL, rtol=0.0):
        raise ValueError("matrix is not unitary within 1e-12")
    return mat


def _fmt_float(x: float) -> str:
    """Shortest round-tripping float literal."""
    return repr(float(x))


def _fmt_complex(z: complex) -> str:
    """Complex literal `re+imj` that complex() parses back exactly."""
    z = complex(z)
    re, im = _fmt_float(z.real), _fmt_float(abs(z.imag))
    sign = "-" if z.imag < 0 else "+"
    return f"{re}{sign}{im}j"


@dataclass(frozen=True)
class CircuitOp:
    """One circuit instruction: a gate, a measurement, or a labeled frame."""

    kind: str  # "gate" | "measure" | "frame"
    name: str = ""  # gate mnemonic (gate kind only)
    targets: tuple[int, ...] = ()  # gate target(s), or the measured qubit
    controls: tuple[int, ...] = ()
    theta: float | None = None  # phase gate angle
    matrix: tuple[complex, ...] | None = None  # row-major 2x2 for "u"
    forced: int | None = None  # forced measurement bit
    label: str = ""  # frame label

    def validate(self, n_qubits: int) -> None:
        qubits = self.targets + self.controls
        for q in qubits:
            if not 1 <= q <= n_qubits:
                raise ValueError(f"qubit {q} out of range 1..{n_qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValueError("control and target qubits must be distinct")
        if self.kind == "gate":
            if self.name not in GATE_NAMES + ("phase", "u", "cnot", "ccnot", "swap"):
                raise ValueError(f"unknown gate {self.name!r}")
            if self.name in GATE_NAMES and (len(self.targets), len(self.controls)) != (1, 0):
                raise ValueError(f"{self.name} takes exactly one target")
            if self.name == "phase" and (len(self.targets) != 1 or self.theta is None):
                raise ValueError("phase takes one target and an angle")
            if self.name == "u" and (len(self.targets) != 1 or self.matrix is None):
                raise ValueError("u takes one target and a 2x2 matrix")
            if self.name == "cnot" and (len(self.controls), len(self.targets)) != (1, 1):
                raise ValueError("cnot takes a control and a target")
            if self.name == "ccnot" and (len(self.controls), len(self.targets)) != (2, 1):
                raise ValueError("ccnot takes two controls and a target")
            if self.name == "swap" and (len(self.targets), len(self.controls)) != (2, 0):
                raise ValueError("swap takes two targets")
        elif self.kind == "measure":
            if len(self.targets) != 1 or self.controls:
                raise ValueError("measure takes exactly one qubit")
            if self.forced not in (None, 0, 1):
                raise ValueError("forced bit must be 0 or 1")
        elif self.kind == "frame":
            pass
        else:
            raise ValueError(f"unknown op kind {self.kind!r}")

    def text(self) -> str:
        """Canonical one-line text form of the op."""
        if self.kind == "frame":
            return f'frame "{self.label}"'
        if self.kind == "measure":
            q = self.targets[0]
            return f"measure {q}" if self.forced is None else f"measure {q} = {self.forced}"
        if self.name == "phase":
            return f"phase {self.targets[0]} {_fmt_float(self.theta)}"
        if self.name == "u":
            entries = " ".join(_fmt_complex(z) for z in self.matrix)
            return f"u {self.targets[0]} {entries}"
        if self.name in ("cnot", "ccnot"):
            args = self.controls + self.targets
        else:
            args = self.targets
        return " ".join([self.name, *[str(q) for q in args]])


def gate_op(name: str, *qubits: int, theta: float | None = None,
            matrix: Iterable[complex] | None = None) -> CircuitOp:
    """Build a gate op from its mnemonic and qubit arguments."""
    mat = tuple(complex(z) for z in matrix) if matrix is not None else None
    if name in ("cnot", "ccnot"):
        controls, targets = tuple(qubits[:-1]), (qubits[-1],)
    else:
        controls, targets = (), tuple(qubits)
    op = CircuitOp(kind="gate", name=name, targets=targets, controls=controls,
                   theta=theta, matrix=mat)
    return op


def measure_op(qubit: int, forced: int | None = None) -> CircuitOp:
    return CircuitOp(kind="measure", targets=(qubit,), forced=forced)


def frame_op(label: str) -> CircuitOp:
    return CircuitOp(kind="frame", label=label)


@dataclass(frozen=True)
class Circuit:
    """An n-qubit op list with an optional prepared initial state."""

    n_qubits: int
    ops: tuple[CircuitOp, ...]
    name: str = ""
    init: tuple[complex, ...] | None = None

    def __post_init__(self):
        for op in self.ops:
            op.validate(self.n_qubits)
        if self.init is not None and len(self.init) != 1 << self.n_qubits:
            raise ValueError("init amplitude list length must be 2^n")

    def initial_state(self) -> StateVector:
        if self.init is None:
            return basis_state(self.n_qubits, 0)
        return from_amplitudes(self.n_qubits, self.init, mode="validate")


@dataclass(frozen=True)
class TraceFrame:
    index: int
    label: str
    state: StateVector
    op: CircuitOp | None  # None for the initial frame
    outcome: MeasurementOutcome | None = None


@dataclass
class Trace:
    """One frame per executed op, preceded by the initial state."""

    circuit: Circuit
    frames: list[TraceFrame] = field(default_factory=list)

    @property
    def final(self) -> StateVector:
        return self.frames[-1].state

    def checkpoints(self) -> list[TraceFrame]:
        """Frames selected for display: initial + explicit frame ops.

        Circuits without frame ops expose every frame.
        """
        marked = [f for f in self.frames if f.op is None or f.op.kind == "frame"]
        if len(marked) > 1:
            return marked
        return list(self.frames)

    def checkpoint(self, label: str) -> TraceFrame:
        for f in self.frames:
            if f.label == label:
                return f
        raise KeyError(f"no frame labeled {label!r}")

    def outcomes(self) -> list[MeasurementOutcome]:
        return [f.outcome for f in self.frames if f.outcome is not None]


def apply_single(state: StateVector, qubit: int, matrix: np.ndarray) -> StateVector:
    """Apply a 2x2 unitary along the axis of one qubit."""
    n = state.n_qubits
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range 1..{n}")
    low = 1 << (qubit - 1)
    high = 1 << (n - qubit)
    arr = state.amplitudes.reshape(high, 2, low)
    out = np.einsum("ab,ibj->iaj", np.asarray(matrix, dtype=np.complex128), arr)
    return StateVector(n, out.reshape(-1))


def apply_controlled(state: StateVector, controls: Sequence[int], target: int,
                     matrix: np.ndarray) -> StateVector:
    """Apply a 2x2 unitary on `target` where every control qubit is 1."""
    n = state.n_qubits
    qubits = tuple(controls) + (target,)
    if len(set(qubits)) != len(qubits):
        raise ValueError("control and target qubits must be distinct")
    for q in qubits:
        if not 1 <= q <= n:
            raise ValueError(f"qubit {q} out of range 1..{n}")
    if not controls:
        return apply_single(state, target, matrix)
    idx = np.arange(1 << n)
    active = np.ones(idx.shape, dtype=bool)
    for c in controls:
        active &= ((idx >> (c - 1)) & 1) == 1
    i0 = idx[active & (((idx >> (target - 1)) & 1) == 0)]
    i1 = i0 | (1 << (target - 1))
    u = np.asarray(matrix, dtype=np.complex128)
    amps = state.amplitudes.copy()
    a0, a1 = amps[i0], amps[i1]
    amps[i0] = u[0, 0] * a0 + u[0, 1] * a1
    amps[i1] = u[1, 0] * a0 + u[1, 1] * a1
    return StateVector(n, amps)


def apply_swap(state: StateVector, q1: int, q2: int) -> StateVector:
    """Exchange two qubits (equal to the 3-CNOT composite)."""
    n = state.n_qubits
    if q1 == q2:
        raise ValueError("swap needs two distinct qubits")
    for q in (q1, q2):
        if not 1 <= q <= n:
            raise ValueError(f"qubit {q} out of range 1..{n}")
    idx = np.arange(1 << n)
    b1 = (idx >> (q1 - 1)) & 1
    b2 = (idx >> (q2 - 1)) & 1
    src = idx ^ ((b1 ^ b2) * ((1 << (q1 - 1)) | (1 << (q2 - 1))))
    return StateVector(n, state.amplitudes[src])


def _op_matrix(op: CircuitOp) -> np.ndarray:
    if op.name in GATES:
        return GATES[op.name]
    if op.name == "phase":
        return phase_gate(op.theta)
    if op.name in ("cnot", "ccnot"):
        return GATES["x"]
    if op.name == "u":
        return unitary2(op.matrix)
    raise ValueError(f"unknown gate {op.name!r}")


def apply_op(
    state: StateVector,
    op: CircuitOp,
    rng: SplitMix64 | None = None,
    forced_bits: Mapping[int, int] | None = None,
) -> tuple[StateVector, MeasurementOutcome | None]:
    """Apply one op; returns the new state and any measurement outcome."""
    op.validate(state.n_qubits)
    if op.kind == "frame":
        return state, None
    if op.kind == "measure":
        q = op.targets[0]
        bit = op.forced
        if forced_bits is not None and q in forced_bits:
            bit = forced_bits[q]
        if bit is None:
            outcome, new_state = sample_measure(state, (q,), rng=rng or SplitMix64(0))
        else:
            outcome, new_state = measure_partial(state, (q,), (bit,))
        return new_state, outcome
    if op.name == "swap":
        return apply_swap(state, *op.targets), None
    if op.name in ("cnot", "ccnot"):
        return apply_controlled(state, op.controls, op.targets[0], _op_matrix(op)), None
    return apply_single(state, op.targets[0], _op_matrix(op)), None


def run_circuit(
    circuit: Circuit,
    initial: StateVector | None = None,
    seed: int = 0,
    forced_bits: Mapping[int, int] | None = None,
) -> Trace:
    """Execute all ops, recording one frame per op after the initial frame.

    `forced_bits` overrides the outcome of measure ops on the listed qubits;
    unforced measurements draw from a single splitmix64 stream seeded once.
    """
    state = initial if initial is not None else circuit.initial_state()
    if state.n_qubits != circuit.n_qubits:
        raise ValueError("initial state size does not match circuit")
    rng = SplitMix64(seed)
    trace = Trace(circuit, [TraceFrame(0, "initial", state, None)])
    for op in circuit.ops:
        state, outcome = apply_op(state, op, rng=rng, forced_bits=forced_bits)
        label = op.label if op.kind == "frame" else op.text()
        trace.frames.append(TraceFrame(len(trace.frames), label, state, op, outcome))
    return trace
