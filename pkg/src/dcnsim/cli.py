"""Command-line interface: run circuits, test separability, serve sessions.

Exit codes: 0 success (or verdict separable), 1 parse error, 2 runtime or
usage error, 3 verdict entangled, 4 verdict marginal.
"""

from __future__ import annotations

import argparse
import os
import sys

from .builtins import BUILTIN_NAMES, builtin_circuit
from .dsl import ParseError, parse_circuit
from .gates import Circuit, Trace, run_circuit
from .layout import LayoutSpec, default_layout_spec, parse_layout
from .render import RenderOptions, render_trace
from .separability import (
    PartitionSpec,
    SeparabilityReport,
    Tolerances,
    check_pq,
    check_qubit,
    full_decomposition,
)
from .state import StateVector, basis_state, format_amplitudes, from_amplitudes, parse_amplitudes

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_RUNTIME = 2
EXIT_ENTANGLED = 3
EXIT_MARGINAL = 4

_VERDICT_EXIT = {"separable": EXIT_OK, "entangled": EXIT_ENTANGLED, "marginal": EXIT_MARGINAL}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcnsim",
        description="Few-qubit circle-notation simulator and separability analyzer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tolerance_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol-zero", type=float, default=None, metavar="X")
        p.add_argument("--tol-sep", type=float, default=None, metavar="X")
        p.add_argument("--tol-res", type=float, default=None, metavar="X")

    run_p = sub.add_parser("run", help="execute a .dcn file or built-in circuit")
    run_p.add_argument("circuit", help=".dcn path or builtin name[:param]")
    run_p.add_argument("--layout", default=None,
                       help="row|square|cube|hypercube|modular:<q,...>")
    run_p.add_argument("--out", default=None, metavar="DIR",
                       help="write per-checkpoint SVGs and the transcript here")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--force-measure", default=None, metavar="q=b[,...]")
    add_tolerance_flags(run_p)

    chk_p = sub.add_parser("check-sep", help="separability report for a state")
    chk_p.add_argument("circuit", nargs="?", default=None,
                       help="optional .dcn path or builtin; uses its final state")
    chk_p.add_argument("--amps", default=None, help="amplitude list (normalized)")
    chk_p.add_argument("--ket", default=None, help="basis bitstring, qubit n first")
    chk_p.add_argument("--partition", nargs=2, type=int, default=None,
                       metavar=("P", "Q"))
    chk_p.add_argument("--order", default=None, metavar="q,q,...")
    chk_p.add_argument("--qubit", type=int, default=None, metavar="K")
    chk_p.add_argument("--seed", type=int, default=0)
    chk_p.add_argument("--force-measure", default=None, metavar="q=b[,...]")
    add_tolerance_flags(chk_p)

    srv_p = sub.add_parser("serve", help="start the HTTP session service")
    srv_p.add_argument("--port", type=int, default=8000)
    srv_p.add_argument("--host", default="127.0.0.1")
    add_tolerance_flags(srv_p)
    return parser


def _tolerances(args: argparse.Namespace) -> Tolerances:
    base = Tolerances()
    return Tolerances(
        zero_tol=args.tol_zero if args.tol_zero is not None else base.zero_tol,
        sep_tol=args.tol_sep if args.tol_sep is not None else base.sep_tol,
        residual_tol=args.tol_res if args.tol_res is not None else base.residual_tol,
    )


def _parse_forced(text: str | None) -> dict[int, int] | None:
    if text is None:
        return None
    forced: dict[int, int] = {}
    for part in text.split(","):
        q_text, _, b_text = part.partition("=")
        try:
            q, b = int(q_text), int(b_text)
        except ValueError:
            raise ValueError(f"bad --force-measure entry {part!r}") from None
        if b not in (0, 1):
            raise ValueError(f"forced bit must be 0 or 1 in {part!r}")
        forced[q] = b
    return forced


def _load_circuit(source: str) -> Circuit:
    if source.endswith(".dcn") or os.path.sep in source or os.path.exists(source):
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
        name = os.path.splitext(os.path.basename(source))[0]
        return parse_circuit(text, name=name)
    name, _, param = source.partition(":")
    if name not in BUILTIN_NAMES:
        known = ", ".join(BUILTIN_NAMES)
        raise ValueError(f"unknown circuit {source!r} (builtins: {known})")
    return builtin_circuit(name, param or None)


def transcript_lines(trace: Trace, tolerances: Tolerances) -> list[str]:
    """Line-delimited trace summary: frames, measurements, final factors."""
    n = trace.circuit.n_qubits
    name = trace.circuit.name or "circuit"
    lines = [f"circuit {name} qubits {n}"]
    checkpoint_ids = {frame.index for frame in trace.checkpoints()}
    for frame in trace.frames:
        if frame.outcome is not None:
            q = frame.outcome.qubits[0]
            b = frame.outcome.bits[0]
            lines.append(f"measured {q}={b} p={'%.12g' % frame.outcome.probability}")
        if frame.index in checkpoint_ids:
            lines.append(f'frame {frame.index} "{frame.label}"')
            lines.append("amps " + format_amplitudes(frame.state.amplitudes))
            verdicts = " ".join(
                f"{q}={check_qubit(frame.state, q, tolerances).verdict}"
                for q in range(1, n + 1)
            )
            lines.append("verdicts " + verdicts)
    for qubits, factor in full_decomposition(trace.final, tolerances):
        lines.append(
            "factor " + ",".join(str(q) for q in qubits) + " " + format_amplitudes(factor)
        )
    return lines


def report_lines(report: SeparabilityReport) -> list[str]:
    lines = [
        "partition %d %d order %s"
        % (
            report.partition.p,
            report.partition.q,
            ",".join(str(q) for q in report.partition.qubit_order)
            if report.partition.qubit_order is not None
            else "default",
        ),
        f"verdict {report.verdict}",
        "max_violation %.12g" % report.max_violation,
    ]
    if report.witness_cell is not None:
        k, r = divmod(report.witness_cell, report.partition.q)
        lines.append(f"witness cell {report.witness_cell} (k={k}, r={r})")
    else:
        lines.append("witness none")
    ratio = report.ratios
    lines.append(
        f"ratios i0={ratio.i0} k0={ratio.k0} r0={ratio.r0} "
        + format_amplitudes(ratio.ratios)
    )
    if report.factor_p is not None and report.factor_q is not None:
        lines.append("factor_p " + format_amplitudes(report.factor_p))
        lines.append("factor_q " + format_amplitudes(report.factor_q))
        lines.append("residual %.12g" % report.residual)
    return lines


def cmd_run(args: argparse.Namespace) -> int:
    circuit = _load_circuit(args.circuit)
    tolerances = _tolerances(args)
    forced = _parse_forced(args.force_measure)
    trace = run_circuit(circuit, seed=args.seed, forced_bits=forced)
    lines = transcript_lines(trace, tolerances)
    for line in lines:
        print(line)
    if args.out:
        spec = (
            parse_layout(args.layout)
            if args.layout
            else default_layout_spec(circuit.n_qubits)
        )
        render_trace(
            trace, spec, RenderOptions(), out_dir=args.out, tolerances=tolerances
        )
        name = trace.circuit.name or "circuit"
        path = os.path.join(args.out, f"{name}_trace.txt")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    return EXIT_OK


def _state_for_check(args: argparse.Namespace) -> StateVector:
    sources = sum(1 for s in (args.circuit, args.amps, args.ket) if s)
    if sources != 1:
        raise ValueError("pass exactly one of: circuit, --amps, --ket")
    if args.amps:
        amps = parse_amplitudes(args.amps)
        n = (len(amps) - 1).bit_length()
        if len(amps) != 1 << n or not 2 <= len(amps) <= 256:
            raise ValueError(f"amplitude count {len(amps)} is not a power of two in 2..256")
        return from_amplitudes(n, amps, mode="normalize")
    if args.ket:
        bits = args.ket
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"--ket needs a 0/1 bitstring, got {bits!r}")
        return basis_state(len(bits), int(bits, 2))
    circuit = _load_circuit(args.circuit)
    forced = _parse_forced(args.force_measure)
    trace = run_circuit(circuit, seed=args.seed, forced_bits=forced)
    return trace.final


def cmd_check_sep(args: argparse.Namespace) -> int:
    state = _state_for_check(args)
    tolerances = _tolerances(args)
    print(f"state qubits {state.n_qubits}")
    print("amps " + format_amplitudes(state.amplitudes))

    if args.partition is not None and args.qubit is not None:
        raise ValueError("pass --partition or --qubit, not both")

    if args.partition is not None:
        p, q = args.partition
        order = (
            tuple(int(tok) for tok in args.order.split(","))
            if args.order
            else None
        )
        report = check_pq(state, PartitionSpec(p, q, qubit_order=order), tolerances)
        for line in report_lines(report):
            print(line)
        return _VERDICT_EXIT[report.verdict]

    if args.qubit is not None:
        report = check_qubit(state, args.qubit, tolerances)
        for line in report_lines(report):
            print(line)
        return _VERDICT_EXIT[report.verdict]

    if args.order is not None:
        raise ValueError("--order requires --partition")

    # No query given: per-qubit verdicts plus the full factor decomposition.
    for q in range(1, state.n_qubits + 1):
        report = check_qubit(state, q, tolerances)
        print(f"qubit {q} verdict {report.verdict} max_violation %.12g" % report.max_violation)
    factors = full_decomposition(state, tolerances)
    for qubits, factor in factors:
        print(
            "factor " + ",".join(str(q) for q in qubits) + " " + format_amplitudes(factor)
        )
    fully_product = all(len(qubits) == 1 for qubits, _ in factors)
    return EXIT_OK if fully_product else EXIT_ENTANGLED


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import build_app

    app = build_app(tolerances=_tolerances(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "check-sep":
            return cmd_check_sep(args)
        return cmd_serve(args)
    except ParseError as exc:
        print(
            f"error: {exc.span.line}:{exc.span.column}: {exc.message}",
            file=sys.stderr,
        )
        return EXIT_PARSE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
