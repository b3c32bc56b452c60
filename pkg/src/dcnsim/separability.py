"""Product-state tests via the anchored-minor criterion on P x Q reshapes.

A pure state on n qubits is reshaped into a P x Q grid (P rows, Q columns,
cell (k, r) holds amplitude k*Q + r, optionally after a qubit permutation).
The state factors across the split exactly when every 2x2 minor of the grid
vanishes.  It suffices to test the minors anchored at the first nonzero
cell (k0, r0): for each later row k and every column r,

    violation(k, r) = |g[k0, r0] * g[k, r] - g[k0, r] * g[k, r0]|

The column ratios m_r = g[k0, r] / g[k0, r0] determine the column factor,
and column r0 itself determines the row factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .state import StateVector, format_amplitude, permute_qubits

DEFAULT_ZERO_TOL = 1e-10
DEFAULT_SEP_TOL = 1e-8
DEFAULT_RESIDUAL_TOL = 1e-8
MARGINAL_BAND = 10.0


@dataclass(frozen=True)
class Tolerances:
    """Thresholds for the separability verdict and factor reconstruction."""

    zero_tol: float = DEFAULT_ZERO_TOL
    sep_tol: float = DEFAULT_SEP_TOL
    residual_tol: float = DEFAULT_RESIDUAL_TOL


@dataclass(frozen=True)
class PartitionSpec:
    """A P x Q split of the basis, with an optional qubit reordering.

    qubit_order[j] names the original qubit placed at position j+1 (position 1
    is least significant); the low log2(Q) positions form the column side and
    the high log2(P) positions form the row side.
    """

    p: int
    q: int
    qubit_order: tuple[int, ...] | None = None

    def __post_init__(self):
        for side in (self.p, self.q):
            if side < 1 or side & (side - 1):
                raise ValueError(f"partition sides must be powers of two, got {side}")
        if self.qubit_order is not None:
            n = (self.p * self.q).bit_length() - 1
            if sorted(self.qubit_order) != list(range(1, n + 1)):
                raise ValueError(
                    f"qubit order {self.qubit_order} is not a permutation of 1..{n}"
                )

    def validate(self, n_qubits: int) -> None:
        if self.p * self.q != 1 << n_qubits:
            raise ValueError(
                f"partition {self.p}x{self.q} does not cover {n_qubits} qubits"
            )


@dataclass(frozen=True)
class RatioSet:
    """Anchor position and column ratios m_r read off the reshaped grid."""

    i0: int
    k0: int
    r0: int
    ratios: tuple[complex, ...]


@dataclass(frozen=True, eq=False)
class SeparabilityReport:
    """Outcome of a P x Q separability test."""

    n_qubits: int
    partition: PartitionSpec
    verdict: str  # "separable" | "marginal" | "entangled"
    max_violation: float
    witness_cell: int | None
    ratios: RatioSet
    factor_p: np.ndarray | None
    factor_q: np.ndarray | None
    residual: float | None
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def separable(self) -> bool:
        return self.verdict == "separable"

    def to_record(self) -> dict:
        """JSON-ready summary; amplitudes rendered as magnitude@phase."""
        order = self.partition.qubit_order
        if order is None:
            order = tuple(range(1, self.n_qubits + 1))
        factors = None
        if self.factor_p is not None and self.factor_q is not None:
            factors = {
                "p": [format_amplitude(a) for a in self.factor_p],
                "q": [format_amplitude(a) for a in self.factor_q],
            }
        return {
            "separable": self.verdict == "separable",
            "marginal": self.verdict == "marginal",
            "verdict": self.verdict,
            "partition": {
                "p": self.partition.p,
                "q": self.partition.q,
                "qubit_order": list(order),
            },
            "i0": self.ratios.i0,
            "k0": self.ratios.k0,
            "r0": self.ratios.r0,
            "ratios": [format_amplitude(m) for m in self.ratios.ratios],
            "witness": self.witness_cell,
            "max_violation": self.max_violation,
            "factors": factors,
            "residual": self.residual,
        }


def reshape(state: StateVector, partition: PartitionSpec) -> np.ndarray:
    """Return the P x Q grid of amplitudes for the given partition."""
    partition.validate(state.n_qubits)
    amps = state.amplitudes
    if partition.qubit_order is not None:
        amps = permute_qubits(state, partition.qubit_order).amplitudes
    return amps.reshape(partition.p, partition.q)


def check_pq(
    state: StateVector,
    partition: PartitionSpec,
    tolerances: Tolerances | None = None,
) -> SeparabilityReport:
    """Test whether the state factors across a P x Q partition."""
    tol = tolerances or Tolerances()
    grid = reshape(state, partition)
    p_dim, q_dim = partition.p, partition.q
    flat = grid.reshape(-1)

    nonzero = np.nonzero(np.abs(flat) > tol.zero_tol)[0]
    if nonzero.size == 0:
        raise ValueError(f"state has no amplitude above zero_tol = {tol.zero_tol:g}")
    i0 = int(nonzero[0])
    k0, r0 = divmod(i0, q_dim)
    anchor = flat[i0]

    ratios = grid[k0] / anchor
    ratios[np.abs(grid[k0]) <= tol.zero_tol] = 0.0
    ratio_set = RatioSet(i0, k0, r0, tuple(complex(m) for m in ratios))

    if k0 + 1 < p_dim:
        rows = grid[k0 + 1 :]
        violations = np.abs(anchor * rows - np.outer(rows[:, r0], grid[k0]))
        flat_arg = int(np.argmax(violations))
        max_violation = float(violations.reshape(-1)[flat_arg])
        wk, wr = divmod(flat_arg, q_dim)
        witness_cell: int | None = (k0 + 1 + wk) * q_dim + wr
    else:
        max_violation = 0.0
        witness_cell = None

    if max_violation < tol.sep_tol / MARGINAL_BAND:
        verdict = "separable"
    elif max_violation <= tol.sep_tol * MARGINAL_BAND:
        verdict = "marginal"
    else:
        verdict = "entangled"

    factor_p: np.ndarray | None = None
    factor_q: np.ndarray | None = None
    residual: float | None = None
    if verdict != "entangled":
        alpha = np.zeros(p_dim, dtype=np.complex128)
        alpha[k0:] = grid[k0:, r0]
        beta = ratios.copy()
        factor_p = alpha / np.linalg.norm(alpha)
        factor_q = beta / np.linalg.norm(beta)
        factor_p.setflags(write=False)
        factor_q.setflags(write=False)
        residual = float(np.max(np.abs(flat - np.kron(factor_p, factor_q))))

    return SeparabilityReport(
        n_qubits=state.n_qubits,
        partition=partition,
        verdict=verdict,
        max_violation=max_violation,
        witness_cell=witness_cell,
        ratios=ratio_set,
        factor_p=factor_p,
        factor_q=factor_q,
        residual=residual,
        tolerances=tol,
    )


def extract_factors(
    state: StateVector,
    partition: PartitionSpec,
    ratios: RatioSet | None = None,
    tolerances: Tolerances | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Return unit-norm (row factor, column factor); raises if entangled.

    With a precomputed RatioSet from an earlier check the factors are read
    straight off the grid; the reconstruction residual still guards against
    a stale or mismatched ratio set.
    """
    tol = tolerances or Tolerances()
    if ratios is None:
        report = check_pq(state, partition, tol)
        if report.verdict == "entangled":
            raise ValueError(
                f"state is entangled across {partition.p}x{partition.q} "
                f"(max violation {report.max_violation:.3g})"
            )
        assert report.factor_p is not None and report.factor_q is not None
        return report.factor_p, report.factor_q
    grid = reshape(state, partition)
    alpha = np.zeros(partition.p, dtype=np.complex128)
    alpha[ratios.k0 :] = grid[ratios.k0 :, ratios.r0]
    beta = np.asarray(ratios.ratios, dtype=np.complex128)
    factor_p = alpha / np.linalg.norm(alpha)
    factor_q = beta / np.linalg.norm(beta)
    residual = float(np.max(np.abs(grid.reshape(-1) - np.kron(factor_p, factor_q))))
    if residual > tol.residual_tol:
        raise ValueError(
            f"factors do not reproduce the state (residual {residual:.3g})"
        )
    return factor_p, factor_q


def check_two_qubit(
    state: StateVector, tolerances: Tolerances | None = None
) -> SeparabilityReport:
    """Two-qubit special case: a single 2x2 determinant decides the verdict."""
    if state.n_qubits != 2:
        raise ValueError(f"expected a 2-qubit state, got {state.n_qubits} qubits")
    return check_pq(state, PartitionSpec(2, 2), tolerances)


def concurrence(state: StateVector) -> float:
    """Two-qubit entanglement measure 2|c0*c3 - c1*c2| in [0, 1]."""
    if state.n_qubits != 2:
        raise ValueError(f"expected a 2-qubit state, got {state.n_qubits} qubits")
    c = state.amplitudes
    return float(2.0 * abs(c[0] * c[3] - c[1] * c[2]))


def check_qubit(
    state: StateVector, qubit: int, tolerances: Tolerances | None = None
) -> SeparabilityReport:
    """Test whether one qubit factors out of the rest of the register.

    The qubit is permuted to the most-significant position, so the row side
    is that qubit and factor_p is its 2-amplitude factor when separable.
    """
    n = state.n_qubits
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range 1..{n}")
    others = tuple(q for q in range(1, n + 1) if q != qubit)
    partition = PartitionSpec(2, 1 << (n - 1), qubit_order=others + (qubit,))
    return check_pq(state, partition, tolerances)


def oracle_separable(
    state: StateVector,
    partition: PartitionSpec,
    tol: float = DEFAULT_SEP_TOL,
) -> bool:
    """Exhaustive check: every 2x2 minor of the grid is below tol."""
    grid = reshape(state, partition)
    max_minor = 0.0
    for k1 in range(partition.p):
        for k2 in range(k1 + 1, partition.p):
            minors = np.abs(
                grid[k1, :, None] * grid[k2, None, :]
                - grid[k2, :, None] * grid[k1, None, :]
            )
            max_minor = max(max_minor, float(np.max(minors)))
    return max_minor <= tol


def _subset_masks(size: int):
    """Proper subsets of {0..size-1} that contain element 0, smallest first."""
    return range(1, (1 << size) - 1, 2)


def full_decomposition(
    state: StateVector, tolerances: Tolerances | None = None
) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Split the state into irreducible tensor factors.

    Returns [(qubits, factor), ...] sorted by smallest qubit; bit j of a
    factor's index corresponds to the j-th smallest qubit in its tuple.
    Factors are unit norm and their product rebuilds the state exactly up to
    the tested tolerance.
    """
    tol = tolerances or Tolerances()
    result: list[tuple[tuple[int, ...], np.ndarray]] = []
    pending: list[tuple[tuple[int, ...], StateVector]] = [
        (tuple(range(1, state.n_qubits + 1)), state)
    ]
    while pending:
        qubits, block = pending.pop()
        size = block.n_qubits
        if size == 1:
            result.append((qubits, block.amplitudes))
            continue
        split = None
        for mask in _subset_masks(size):
            low = tuple(j + 1 for j in range(size) if mask >> j & 1)
            high = tuple(j + 1 for j in range(size) if not mask >> j & 1)
            partition = PartitionSpec(
                1 << len(high), 1 << len(low), qubit_order=low + high
            )
            report = check_pq(block, partition, tol)
            if report.verdict == "separable":
                split = (low, high, report)
                break
        if split is None:
            result.append((qubits, block.amplitudes))
            continue
        low, high, report = split
        low_qubits = tuple(qubits[j - 1] for j in low)
        high_qubits = tuple(qubits[j - 1] for j in high)
        pending.append((high_qubits, StateVector(len(high), report.factor_p)))
        pending.append((low_qubits, StateVector(len(low), report.factor_q)))
    result.sort(key=lambda item: item[0][0])
    return result


def recombine(
    n_qubits: int, factors: list[tuple[tuple[int, ...], np.ndarray]]
) -> StateVector:
    """Tensor a list of (qubits, factor) blocks back into a full state."""
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    indices = np.arange(1 << n_qubits)
    values = np.ones(1 << n_qubits, dtype=np.complex128)
    seen: list[int] = []
    for qubits, factor in factors:
        seen.extend(qubits)
        local = np.zeros(1 << n_qubits, dtype=np.int64)
        for j, q in enumerate(qubits):
            local |= ((indices >> (q - 1)) & 1) << j
        values = values * np.asarray(factor)[local]
    if sorted(seen) != list(range(1, n_qubits + 1)):
        raise ValueError("factors do not cover every qubit exactly once")
    amps[:] = values
    return StateVector(n_qubits, amps)
