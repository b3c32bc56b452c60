"""Few-qubit state-vector simulator with circle-notation rendering
and PQ-separability analysis."""

from .state import (
    MAX_QUBITS,
    MeasurementOutcome,
    SplitMix64,
    StateVector,
    basis_state,
    equal_up_to_global_phase,
    format_amplitude,
    format_amplitudes,
    from_amplitudes,
    measure_partial,
    parse_amplitude,
    parse_amplitudes,
    permute_qubits,
    probability,
    sample_measure,
    tensor,
)
from .gates import (
    Circuit,
    CircuitOp,
    Trace,
    TraceFrame,
    apply_controlled,
    apply_op,
    apply_single,
    apply_swap,
    frame_op,
    gate_op,
    measure_op,
    phase_gate,
    run_circuit,
    unitary2,
)
from .builtins import BUILTIN_NAMES, builtin_circuit
from .dsl import ParseError, SourceSpan, format_circuit, parse_circuit
from .separability import (
    PartitionSpec,
    RatioSet,
    SeparabilityReport,
    Tolerances,
    check_pq,
    check_qubit,
    check_two_qubit,
    concurrence,
    extract_factors,
    full_decomposition,
    oracle_separable,
    reshape,
)
from .layout import AxisAnnotation, LayoutSpec, Placement, annotate, layout
from .render import RenderOptions, glyph, render_frame, render_trace

__version__ = "0.1.0"
