"""Built-in demonstration circuits, each reproducing a staged walkthrough."""

from __future__ import annotations

import cmath
import math

import numpy as np

from .gates import Circuit, CircuitOp, frame_op, gate_op, measure_op

# Arbitrary single-qubit payload state used by the teleport / encode demos:
# sqrt(2/3)|0> + 1/sqrt(3) e^{-i pi/4}|1>.
PSI1 = (
    complex(math.sqrt(2.0 / 3.0)),
    cmath.exp(-1j * math.pi / 4) / math.sqrt(3.0),
)

# Product state (sqrt(3)/2|0> - 1/2|1>) (x) (1/sqrt(3)|0> + sqrt(2/3) e^{-i pi/4}|1>).
SEPARABLE2 = tuple(
    np.kron(
        np.array([math.sqrt(3.0) / 2.0, -0.5]),
        np.array([1.0 / math.sqrt(3.0), math.sqrt(2.0 / 3.0) * cmath.exp(-1j * math.pi / 4)]),
    )
)

BUILTIN_NAMES = (
    "bell",
    "ghz_encode",
    "swap3cnot",
    "phase_kickback",
    "deutsch",
    "teleport",
    "err_detect4",
    "err_correct5",
)

BUILTIN_PARAMS: dict[str, tuple[str, ...]] = {
    "deutsch": ("0", "1", "id", "not"),
    "teleport": ("00", "01", "10", "11"),
    "err_detect4": ("none", "x1", "z1", "h1"),
    "err_correct5": ("none", "x1", "x2", "x3"),
}

BUILTIN_DEFAULTS: dict[str, str] = {
    "deutsch": "id",
    "teleport": "00",
    "err_detect4": "h1",
    "err_correct5": "x2",
}


def _pad(amps, n: int) -> tuple[complex, ...]:
    out = [0j] * (1 << n)
    for i, a in enumerate(amps):
        out[i] = complex(a)
    return tuple(out)


def _bell() -> Circuit:
    ops = (gate_op("h", 1), gate_op("cnot", 1, 2), frame_op("bell pair"))
    return Circuit(2, ops, name="bell")


def _ghz_encode() -> Circuit:
    ops = (gate_op("cnot", 1, 2), gate_op("cnot", 1, 3), frame_op("encoded"))
    return Circuit(3, ops, name="ghz_encode", init=_pad(PSI1, 3))


def _swap3cnot() -> Circuit:
    ops = (gate_op("cnot", 1, 2), gate_op("cnot", 2, 1), gate_op("cnot", 1, 2))
    return Circuit(2, ops, name="swap3cnot", init=SEPARABLE2)


def _phase_kickback() -> Circuit:
    s = 1.0 / math.sqrt(2.0)
    init = (complex(s), 0j, 0j, complex(-s))  # (|00> - |11>)/sqrt(2)
    ops = (
        gate_op("h", 1),
        gate_op("h", 2),
        frame_op("hadamard basis"),
        gate_op("cnot", 2, 1),
        frame_op("kickback"),
        gate_op("h", 1),
        gate_op("h", 2),
        frame_op("computational basis"),
    )
    return Circuit(2, ops, name="phase_kickback", init=init)


def _deutsch(f: str) -> Circuit:
    oracle = {
        "0": (),
        "1": (gate_op("x", 2),),
        "id": (gate_op("cnot", 1, 2),),
        "not": (gate_op("x", 2), gate_op("cnot", 1, 2)),
    }[f]
    ops = (
        gate_op("h", 1),
        gate_op("h", 2),
        frame_op("superposition"),
        *oracle,
        frame_op("oracle"),
        gate_op("h", 1),
        frame_op("before measurement"),
        measure_op(1),
        frame_op("measured"),
    )
    init = _pad((0, 0, 1), 2)  # |10>: ancilla qubit #2 set
    return Circuit(2, ops, name=f"deutsch_{f}", init=init)


def _teleport(outcome: str) -> Circuit:
    b1, b2 = int(outcome[0]), int(outcome[1])
    s = 1.0 / math.sqrt(2.0)
    # psi on qubit #1, bell pair on qubits #2,#3.
    init = tuple(np.kron(np.array([s, 0, 0, s]), np.array(PSI1)))
    ops = (
        gate_op("cnot", 1, 2),
        gate_op("h", 1),
        frame_op("before measurement"),
        measure_op(1, forced=b1),
        measure_op(2, forced=b2),
        frame_op("after measurement"),
        # X on #3 when #2 read 1; Z on #3 when #1 read 1 (CZ via H-CNOT-H).
        gate_op("cnot", 2, 3),
        gate_op("h", 3),
        gate_op("cnot", 1, 3),
        gate_op("h", 3),
        frame_op("corrected"),
    )
    return Circuit(3, ops, name=f"teleport_{outcome}", init=init)


def _err_detect4(error: str) -> Circuit:
    injected = {
        "none": (),
        "x1": (gate_op("x", 1),),
        "z1": (gate_op("z", 1),),
        "h1": (gate_op("h", 1),),
    }[error]
    half = 0.5 + 0j
    init = [0j] * 16
    for i in (0, 3, 8, 11):  # |+>_4 (x) |0>_3 (x) bell pair on #2,#1
        init[i] = half
    ops = (
        *injected,
        frame_op("error"),
        gate_op("cnot", 1, 3),
        gate_op("cnot", 2, 3),
        frame_op("parity"),
        gate_op("cnot", 4, 1),
        gate_op("cnot", 4, 2),
        frame_op("phase parity"),
        gate_op("h", 4),
        frame_op("readout"),
        measure_op(3),
        measure_op(4),
        frame_op("measured"),
    )
    return Circuit(4, ops, name=f"err_detect4_{error}", init=tuple(init))


def _err_correct5(error: str) -> Circuit:
    injected = {
        "none": (),
        "x1": (gate_op("x", 1),),
        "x2": (gate_op("x", 2),),
        "x3": (gate_op("x", 3),),
    }[error]
    ops = (
        gate_op("cnot", 1, 2),
        gate_op("cnot", 1, 3),
        frame_op("encoded"),
        *injected,
        frame_op("error"),
        gate_op("cnot", 2, 4),
        gate_op("cnot", 3, 4),
        gate_op("cnot", 3, 5),
        gate_op("cnot", 1, 5),
        frame_op("syndrome"),
        gate_op("cnot", 5, 1),
        gate_op("cnot", 4, 2),
        gate_op("ccnot", 4, 5, 3),
        gate_op("ccnot", 4, 5, 2),
        gate_op("ccnot", 4, 5, 1),
        frame_op("corrected"),
        measure_op(4),
        measure_op(5),
        frame_op("measured"),
    )
    return Circuit(5, ops, name=f"err_correct5_{error}", init=_pad(PSI1, 5))


def builtin_circuit(name: str, param: str | None = None) -> Circuit:
    """Construct a built-in circuit by name, with an optional variant parameter."""
    if name not in BUILTIN_NAMES:
        raise ValueError(f"unknown builtin circuit {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    allowed = BUILTIN_PARAMS.get(name)
    if allowed is None:
        if param is not None:
            raise ValueError(f"{name} takes no parameter")
    else:
        if param is None:
            param = BUILTIN_DEFAULTS[name]
        if param not in allowed:
            raise ValueError(f"{name} parameter must be one of {allowed}, got {param!r}")
    if name == "bell":
        return _bell()
    if name == "ghz_encode":
        return _ghz_encode()
    if name == "swap3cnot":
        return _swap3cnot()
    if name == "phase_kickback":
        return _phase_kickback()
    if name == "deutsch":
        return _deutsch(param)
    if name == "teleport":
        return _teleport(param)
    if name == "err_detect4":
        return _err_detect4(param)
    return _err_correct5(param)
