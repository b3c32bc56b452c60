"""Line-oriented circuit text format (.dcn files): parser and formatter."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .gates import (
    GATE_NAMES,
    Circuit,
    CircuitOp,
    frame_op,
    gate_op,
    measure_op,
    unitary2,
)
from .state import MAX_QUBITS, parse_amplitude

MNEMONICS = (
    "qubits", "init", "x", "y", "z", "h", "s", "t",
    "phase", "u", "cnot", "ccnot", "swap", "measure", "frame",
)

_GATE_ARITY = {"x": 1, "y": 1, "z": 1, "h": 1, "s": 1, "t": 1,
               "cnot": 2, "ccnot": 3, "swap": 2}

_TOKEN_RE = re.compile(r"\S+")
_FRAME_RE = re.compile(r'^frame\s+"([^"]*)"\s*$')


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column location of a token."""

    line: int
    column: int
    length: int


class ParseError(Exception):
    """Rejection of a .dcn file, pointing at the offending token."""

    def __init__(self, message: str, span: SourceSpan, expected: tuple[str, ...] = ()):
        super().__init__(f"{span.line}:{span.column}: {message}")
        self.message = message
        self.span = span
        self.expected = expected


@dataclass(frozen=True)
class _Token:
    text: str
    span: SourceSpan


def _strip_comment(line: str) -> str:
    """Remove a # comment, respecting quoted frame labels."""
    in_quotes = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quotes = not in_quotes
        elif ch == "#" and not in_quotes:
            return line[:i]
    return line


def _tokens(line: str, line_no: int) -> list[_Token]:
    return [
        _Token(m.group(0), SourceSpan(line_no, m.start() + 1, len(m.group(0))))
        for m in _TOKEN_RE.finditer(line)
    ]


def _parse_int(tok: _Token, what: str) -> int:
    try:
        return int(tok.text)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok.text!r}", tok.span) from None


def _parse_qubit(tok: _Token, n_qubits: int) -> int:
    q = _parse_int(tok, "a qubit number")
    if not 1 <= q <= n_qubits:
        raise ParseError(f"qubit {q} out of range 1..{n_qubits}", tok.span)
    return q


def _parse_complex(tok: _Token) -> complex:
    try:
        return parse_amplitude(tok.text)
    except ValueError:
        raise ParseError(f"bad complex literal {tok.text!r}", tok.span) from None


def _need_args(toks: list[_Token], count: int, mnemonic: _Token) -> list[_Token]:
    args = toks[1:]
    if len(args) != count:
        raise ParseError(
            f"{mnemonic.text} takes {count} argument{'s' if count != 1 else ''}, got {len(args)}",
            mnemonic.span,
        )
    return args


def parse_circuit(text: str, name: str = "") -> Circuit:
    """Parse .dcn text into a Circuit; raises ParseError with a source span."""
    n_qubits: int | None = None
    init: tuple[complex, ...] | None = None
    ops: list[CircuitOp] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue

        frame_match = _FRAME_RE.match(line.strip())
        toks = _tokens(line, line_no)
        head = toks[0]

        if head.text == "frame":
            if frame_match is None:
                raise ParseError('frame takes a quoted "label"', head.span)
            if n_qubits is None:
                raise ParseError("file must start with a qubits declaration", head.span)
            ops.append(frame_op(frame_match.group(1)))
            continue

        if head.text == "qubits":
            if n_qubits is not None:
                raise ParseError("duplicate qubits declaration", head.span)
            if ops or init is not None:
                raise ParseError("qubits declaration must come first", head.span)
            (arg,) = _need_args(toks, 1, head)
            n = _parse_int(arg, "a qubit count")
            if not 1 <= n <= MAX_QUBITS:
                raise ParseError(f"qubit count must be in 1..{MAX_QUBITS}", arg.span)
            n_qubits = n
            continue

        if n_qubits is None:
            raise ParseError("file must start with a qubits declaration", head.span)

        if head.text == "init":
            if init is not None:
                raise ParseError("duplicate init", head.span)
            if ops:
                raise ParseError("init must precede all operations", head.span)
            if len(toks) < 2 or toks[1].text not in ("ket", "amps"):
                raise ParseError("init takes `ket <bits>` or `amps <list>`", head.span,
                                 expected=("ket", "amps"))
            mode = toks[1]
            if mode.text == "ket":
                (bits,) = _need_args(toks[1:], 1, mode)
                if len(bits.text) != n_qubits or set(bits.text) - {"0", "1"}:
                    raise ParseError(f"ket needs {n_qubits} bits of 0/1", bits.span)
                index = int(bits.text, 2)
                amps = [0j] * (1 << n_qubits)
                amps[index] = 1.0 + 0j
                init = tuple(amps)
            else:
                args = toks[2:]
                if len(args) != 1 << n_qubits:
                    raise ParseError(
                        f"amps needs {1 << n_qubits} values, got {len(args)}", mode.span
                    )
                init = tuple(_parse_complex(t) for t in args)
            continue

        if head.text in _GATE_ARITY:
            args = _need_args(toks, _GATE_ARITY[head.text], head)
            qubits = [_parse_qubit(t, n_qubits) for t in args]
            if len(set(qubits)) != len(qubits):
                raise ParseError("qubit arguments must be distinct", args[-1].span)
            ops.append(gate_op(head.text, *qubits))
            continue

        if head.text == "phase":
            q_tok, theta_tok = _need_args(toks, 2, head)
            q = _parse_qubit(q_tok, n_qubits)
            try:
                theta = float(theta_tok.text)
            except ValueError:
                raise ParseError(f"bad angle {theta_tok.text!r}", theta_tok.span) from None
            ops.append(gate_op("phase", q, theta=theta))
            continue

        if head.text == "u":
            args = _need_args(toks, 5, head)
            q = _parse_qubit(args[0], n_qubits)
            entries = [_parse_complex(t) for t in args[1:]]
            try:
                unitary2(entries)
            except ValueError as exc:
                raise ParseError(str(exc), args[1].span) from None
            ops.append(gate_op("u", q, matrix=entries))
            continue

        if head.text == "measure":
            args = toks[1:]
            if len(args) not in (1, 3) or (len(args) == 3 and args[1].text != "="):
                raise ParseError("measure takes `q` or `q = 0|1`", head.span)
            q = _parse_qubit(args[0], n_qubits)
            forced = None
            if len(args) == 3:
                if args[2].text not in ("0", "1"):
                    raise ParseError("measured bit must be 0 or 1", args[2].span)
                forced = int(args[2].text)
            ops.append(measure_op(q, forced))
            continue

        raise ParseError(f"unknown mnemonic {head.text!r}", head.span, expected=MNEMONICS)

    if n_qubits is None:
        raise ParseError("file must declare qubits", SourceSpan(1, 1, 1))
    return Circuit(n_qubits, tuple(ops), name=name, init=init)


def _is_one_hot(init: tuple[complex, ...]) -> int | None:
    """Index of the single 1.0 amplitude, or None."""
    hot = [i for i, a in enumerate(init) if a != 0]
    if len(hot) == 1 and init[hot[0]] == 1.0 + 0j:
        return hot[0]
    return None


def format_circuit(circuit: Circuit) -> str:
    """Canonical .dcn text; parse_circuit(format_circuit(c)) rebuilds c."""
    from .gates import _fmt_complex  # canonical complex literal form

    lines = [f"qubits {circuit.n_qubits}"]
    if circuit.init is not None:
        hot = _is_one_hot(circuit.init)
        if hot is not None:
            lines.append(f"init ket {hot:0{circuit.n_qubits}b}")
        else:
            lines.append("init amps " + " ".join(_fmt_complex(a) for a in circuit.init))
    lines.extend(op.text() for op in circuit.ops)
    return "\n".join(lines) + "\n"
