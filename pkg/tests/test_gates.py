from __future__ import annotations

import math

import numpy as np
import pytest

from dcnsim import (
    Circuit,
    apply_controlled,
    apply_op,
    apply_single,
    apply_swap,
    basis_state,
    from_amplitudes,
    frame_op,
    gate_op,
    measure_op,
    phase_gate,
    run_circuit,
    unitary2,
)
from dcnsim.gates import GATES, GATE_NAMES, SQRT2_INV, UNITARY_TOL

SEED = 20260823
N_PROPERTY_TRIALS = 200

I2 = np.eye(2, dtype=complex)


def random_state(rng: np.random.Generator, n_qubits: int):
    dim = 1 << n_qubits
    raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return from_amplitudes(n_qubits, raw / np.linalg.norm(raw))


def random_unitary2(rng: np.random.Generator) -> np.ndarray:
    raw = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(raw)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def embed_single(n_qubits: int, qubit: int, matrix: np.ndarray) -> np.ndarray:
    """Full 2^n unitary for a one-qubit gate, built by Kronecker products."""
    full = np.array([[1.0 + 0j]])
    for position in range(n_qubits, 0, -1):
        factor = matrix if position == qubit else I2
        full = np.kron(full, factor)
    return full


def test_named_gate_matrices():
    assert np.array_equal(GATES["x"], [[0, 1], [1, 0]])
    assert np.array_equal(GATES["y"], [[0, -1j], [1j, 0]])
    assert np.array_equal(GATES["z"], [[1, 0], [0, -1]])
    assert np.allclose(GATES["h"], SQRT2_INV * np.array([[1, 1], [1, -1]]))
    assert np.allclose(GATES["s"], [[1, 0], [0, 1j]])
    assert np.allclose(GATES["t"], [[1, 0], [0, np.exp(1j * math.pi / 4)]])
    assert set(GATE_NAMES) == set(GATES)


def test_named_gates_are_unitary():
    for name, matrix in GATES.items():
        product = matrix @ matrix.conj().T
        assert np.allclose(product, I2, atol=UNITARY_TOL), name


def test_phase_gate_diagonal():
    theta = 0.37
    matrix = phase_gate(theta)
    assert np.allclose(matrix, [[1, 0], [0, np.exp(1j * theta)]])
    assert np.allclose(phase_gate(math.pi), GATES["z"])
    assert np.allclose(phase_gate(math.pi / 2), GATES["s"])


def test_unitary2_accepts_row_major_entries():
    matrix = unitary2([SQRT2_INV, SQRT2_INV, SQRT2_INV, -SQRT2_INV])
    assert np.allclose(matrix, GATES["h"])


def test_unitary2_rejects_non_unitary():
    with pytest.raises(ValueError):
        unitary2([1, 0, 0, 2])
    with pytest.raises(ValueError):
        unitary2([1, 1, 0, 1])
    with pytest.raises(ValueError):
        unitary2([1, 0, 0])


def test_apply_single_qubit_one_is_least_significant():
    # x on qubit 1 of |00> flips the low-order bit: |00> -> |01> (index 1).
    state = basis_state(2, 0)
    flipped = apply_single(state, 1, GATES["x"])
    assert np.allclose(flipped.amplitudes, basis_state(2, 1).amplitudes)
    # x on qubit 2 flips the next bit: |00> -> |10> (index 2).
    flipped = apply_single(state, 2, GATES["x"])
    assert np.allclose(flipped.amplitudes, basis_state(2, 2).amplitudes)


def test_apply_single_matches_kron_embedding():
    rng = np.random.default_rng(SEED)
    for _ in range(N_PROPERTY_TRIALS):
        n = int(rng.integers(1, 6))
        q = int(rng.integers(1, n + 1))
        state = random_state(rng, n)
        matrix = random_unitary2(rng)
        applied = apply_single(state, q, matrix)
        expected = embed_single(n, q, matrix) @ state.amplitudes
        assert np.allclose(applied.amplitudes, expected)


def test_apply_single_preserves_norm():
    # 10^4 random (state, unitary) pairs stay normalized within 1e-12.
    rng = np.random.default_rng(SEED + 1)
    unitaries = [random_unitary2(rng) for _ in range(20)]
    for trial in range(10_000):
        n = int(rng.integers(1, 4))
        state = random_state(rng, n)
        q = int(rng.integers(1, n + 1))
        applied = apply_single(state, q, unitaries[trial % len(unitaries)])
        assert abs(applied.norm() - 1.0) < 1e-12


def test_self_inverse_gates_square_to_identity():
    rng = np.random.default_rng(SEED + 6)
    for name in ("x", "z", "h"):
        for _ in range(20):
            n = int(rng.integers(1, 5))
            q = int(rng.integers(1, n + 1))
            state = random_state(rng, n)
            twice = apply_single(apply_single(state, q, GATES[name]), q, GATES[name])
            assert np.allclose(twice.amplitudes, state.amplitudes)


def test_gates_on_distinct_qubits_commute():
    rng = np.random.default_rng(SEED + 7)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        qubits = rng.choice(n, size=2, replace=False) + 1
        p, q = int(qubits[0]), int(qubits[1])
        u, v = random_unitary2(rng), random_unitary2(rng)
        state = random_state(rng, n)
        first = apply_single(apply_single(state, p, u), q, v)
        second = apply_single(apply_single(state, q, v), p, u)
        assert np.allclose(first.amplitudes, second.amplitudes)


def test_cnot_truth_table():
    # cnot control=1 target=2 on each two-qubit basis state.
    table = {0: 0, 1: 3, 2: 2, 3: 1}
    for source, target in table.items():
        state = basis_state(2, source)
        result = apply_controlled(state, (1,), 2, GATES["x"])
        assert np.allclose(result.amplitudes, basis_state(2, target).amplitudes)


def test_ccnot_truth_table():
    # Toffoli with controls 1,2 and target 3 flips bit 3 only for |011>.
    for source in range(8):
        state = basis_state(3, source)
        result = apply_controlled(state, (1, 2), 3, GATES["x"])
        expected = source ^ 4 if source & 3 == 3 else source
        assert np.allclose(result.amplitudes, basis_state(3, expected).amplitudes)


def test_cz_is_symmetric_phase_flip():
    state = from_amplitudes(2, [0.5, 0.5, 0.5, 0.5])
    forward = apply_controlled(state, (1,), 2, GATES["z"])
    backward = apply_controlled(state, (2,), 1, GATES["z"])
    assert np.allclose(forward.amplitudes, [0.5, 0.5, 0.5, -0.5])
    assert np.allclose(forward.amplitudes, backward.amplitudes)


def test_apply_controlled_matches_projector_embedding():
    rng = np.random.default_rng(SEED + 2)
    for _ in range(N_PROPERTY_TRIALS):
        n = int(rng.integers(2, 6))
        qubits = rng.choice(n, size=2, replace=False) + 1
        control, target = int(qubits[0]), int(qubits[1])
        state = random_state(rng, n)
        matrix = random_unitary2(rng)
        applied = apply_controlled(state, (control,), target, matrix)
        # Oracle: |0><0|_c ⊗ I + |1><1|_c ⊗ U_t assembled via kron embeddings.
        p0 = np.array([[1, 0], [0, 0]], dtype=complex)
        p1 = np.array([[0, 0], [0, 1]], dtype=complex)
        full = embed_single(n, control, p0) + embed_single(n, control, p1) @ embed_single(n, target, matrix)
        assert np.allclose(applied.amplitudes, full @ state.amplitudes)


def test_apply_swap_matches_qubit_relabeling():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        qubits = rng.choice(n, size=2, replace=False) + 1
        a, b = int(qubits[0]), int(qubits[1])
        state = random_state(rng, n)
        swapped = apply_swap(state, a, b)
        # Oracle: exchange bits a and b of every basis index.
        expected = np.empty_like(state.amplitudes)
        for index, amp in enumerate(state.amplitudes):
            bit_a = (index >> (a - 1)) & 1
            bit_b = (index >> (b - 1)) & 1
            target = index & ~(1 << (a - 1)) & ~(1 << (b - 1))
            target |= bit_b << (a - 1) | bit_a << (b - 1)
            expected[target] = amp
        assert np.allclose(swapped.amplitudes, expected)


def test_gate_qubit_range_errors():
    state = basis_state(2, 0)
    with pytest.raises(ValueError):
        apply_single(state, 0, GATES["x"])
    with pytest.raises(ValueError):
        apply_single(state, 3, GATES["x"])
    with pytest.raises(ValueError):
        apply_controlled(state, (1,), 1, GATES["x"])
    with pytest.raises(ValueError):
        apply_swap(state, 2, 2)


def test_gate_op_constructors_and_text():
    op = gate_op("h", 1)
    assert (op.kind, op.name, op.targets) == ("gate", "h", (1,))
    assert op.text() == "h 1"
    assert gate_op("cnot", 1, 2).text() == "cnot 1 2"
    assert gate_op("ccnot", 1, 2, 3).text() == "ccnot 1 2 3"
    assert gate_op("swap", 1, 3).text() == "swap 1 3"
    phase = gate_op("phase", 2, theta=math.pi / 8)
    assert phase.text() == "phase 2 " + repr(math.pi / 8)
    assert measure_op(1).text() == "measure 1"
    assert measure_op(1, forced=0).text() == "measure 1 = 0"
    assert frame_op("after h").text() == 'frame "after h"'


def test_op_validate_rejects_malformed_records():
    cases = (
        gate_op("bogus", 1),
        gate_op("cnot", 1),
        gate_op("cnot", 1, 1),
        gate_op("h", 3),  # out of range for 2 qubits
        gate_op("u", 1),  # requires a matrix
        measure_op(1, forced=2),
    )
    for op in cases:
        with pytest.raises(ValueError):
            op.validate(2)
    gate_op("cnot", 1, 2).validate(2)
    measure_op(2, forced=1).validate(2)


def test_u_op_applies_custom_matrix():
    rng = np.random.default_rng(SEED + 4)
    matrix = random_unitary2(rng)
    op = gate_op("u", 2, matrix=matrix.reshape(-1))
    state = random_state(rng, 3)
    applied, _ = apply_op(state, op)
    expected = apply_single(state, 2, matrix)
    assert np.allclose(applied.amplitudes, expected.amplitudes)


def test_apply_op_dispatches_all_kinds():
    state = basis_state(2, 0)
    after, outcome = apply_op(state, gate_op("h", 1))
    assert outcome is None
    assert np.allclose(after.amplitudes, [SQRT2_INV, SQRT2_INV, 0, 0])
    after, outcome = apply_op(after, measure_op(1, forced=1))
    assert outcome is not None
    assert outcome.bits == (1,)
    assert np.isclose(outcome.probability, 0.5)
    assert np.allclose(after.amplitudes, [0, 1, 0, 0])
    after, outcome = apply_op(after, frame_op("done"))
    assert outcome is None
    assert np.allclose(after.amplitudes, [0, 1, 0, 0])


def test_run_circuit_records_one_frame_per_op():
    circuit = Circuit(2, (gate_op("h", 1), gate_op("cnot", 1, 2), frame_op("bell pair")), name="bell")
    trace = run_circuit(circuit)
    assert [frame.index for frame in trace.frames] == [0, 1, 2, 3]
    assert trace.frames[0].label == "initial"
    assert trace.frames[0].op is None
    assert trace.frames[3].label == "bell pair"
    assert np.allclose(trace.final.amplitudes, [SQRT2_INV, 0, 0, SQRT2_INV])


def test_checkpoints_are_marked_frames_when_present():
    circuit = Circuit(2, (gate_op("h", 1), gate_op("cnot", 1, 2), frame_op("bell pair")))
    trace = run_circuit(circuit)
    marked = trace.checkpoints()
    assert [frame.index for frame in marked] == [0, 3]
    assert trace.checkpoint("bell pair").index == 3
    with pytest.raises(KeyError):
        trace.checkpoint("missing")


def test_checkpoints_fall_back_to_all_frames():
    circuit = Circuit(1, (gate_op("h", 1), gate_op("h", 1)))
    trace = run_circuit(circuit)
    # Only the implicit initial frame is marked, so every frame is a checkpoint.
    assert [frame.index for frame in trace.checkpoints()] == [0, 1, 2]


def test_run_circuit_forced_measurement_bits():
    circuit = Circuit(1, (gate_op("h", 1), measure_op(1)))
    for bit in (0, 1):
        trace = run_circuit(circuit, forced_bits={1: bit})
        outcomes = trace.outcomes()
        assert len(outcomes) == 1
        assert outcomes[0].bits == (bit,)
        assert np.isclose(outcomes[0].probability, 0.5)


def test_run_circuit_sampling_is_seed_deterministic():
    circuit = Circuit(2, (gate_op("h", 1), gate_op("h", 2), measure_op(1), measure_op(2)))
    bits_by_seed = {}
    for seed in range(6):
        first = tuple(o.bits[0] for o in run_circuit(circuit, seed=seed).outcomes())
        second = tuple(o.bits[0] for o in run_circuit(circuit, seed=seed).outcomes())
        assert first == second
        bits_by_seed[seed] = first
    assert len(set(bits_by_seed.values())) > 1


def test_run_circuit_custom_initial_state():
    circuit = Circuit(1, (gate_op("x", 1),))
    initial = from_amplitudes(1, [0, 1])
    trace = run_circuit(circuit, initial=initial)
    assert np.allclose(trace.final.amplitudes, [1, 0])
    with pytest.raises(ValueError):
        run_circuit(circuit, initial=basis_state(2, 0))


def test_gate_sequence_matches_matrix_product():
    # A random word of named gates equals the product of embedded matrices.
    rng = np.random.default_rng(SEED + 5)
    names = tuple(GATES)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        state = random_state(rng, n)
        word = [(names[int(rng.integers(len(names)))], int(rng.integers(1, n + 1))) for _ in range(6)]
        stepped = state
        full = np.eye(1 << n, dtype=complex)
        for name, q in word:
            stepped = apply_single(stepped, q, GATES[name])
            full = embed_single(n, q, GATES[name]) @ full
        assert np.allclose(stepped.amplitudes, full @ state.amplitudes)
