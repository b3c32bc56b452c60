"""Pure-state vectors for few-qubit systems.

Conventions used throughout the package:

* Basis states are |i_n ... i_2 i_1> with qubit #1 the *least* significant
  bit of the basis index.  Qubit numbers are 1-based.
* Amplitude arrays are indexed by basis index 0 .. 2**n - 1 in ascending
  order and are complex128 throughout.
* Phases are reported in radians via ``atan2(im, re)``; the polar text form
  of an amplitude is ``r@phase`` with 12 significant digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 8
DEFAULT_NORM_TOL = 1e-9
DEFAULT_COLLAPSE_TOL = 1e-12
DEFAULT_PHASE_TOL = 1e-9

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator (splitmix64) used for sampling."""

    def __init__(self, seed: int = 0):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of measuring one or more qubits in the computational basis."""

    qubits: tuple[int, ...]
    bits: tuple[int, ...]
    probability: float


class StateVector:
    """Immutable n-qubit pure state (2**n complex amplitudes)."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
        if amps.shape[0] != 1 << n_qubits:
            raise ValueError(
                f"expected {1 << n_qubits} amplitudes for {n_qubits} qubits, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise ValueError("amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "amplitudes", amps)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("StateVector is immutable")

    def __len__(self) -> int:
        return self.amplitudes.shape[0]

    def __getitem__(self, index: int) -> complex:
        return complex(self.amplitudes[index])

    def __repr__(self) -> str:
        return f"StateVector(n={self.n_qubits}, amps=[{format_amplitudes(self.amplitudes)}])"

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_state(n_qubits: int, index: int) -> StateVector:
    """Computational basis state |index> on n_qubits qubits."""
    size = 1 << n_qubits
    if not 0 <= index < size:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(size, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def from_amplitudes(
    n_qubits: int,
    amplitudes: Iterable[complex],
    mode: str = "validate",
    norm_tol: float = DEFAULT_NORM_TOL,
) -> StateVector:
    """Build a state from raw amplitudes.

    mode="validate" requires the vector to be normalised within norm_tol;
    mode="normalize" rescales any non-zero vector to unit norm.
    """
    amps = np.asarray(list(amplitudes), dtype=np.complex128)
    norm = float(np.linalg.norm(amps))
    if mode == "validate":
        if abs(norm - 1.0) > norm_tol:
            raise ValueError(f"state is not normalised: |norm - 1| = {abs(norm - 1.0):.3e}")
    elif mode == "normalize":
        if norm == 0.0:
            raise ValueError("cannot normalise the zero vector")
        amps = amps / norm
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return StateVector(n_qubits, amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product a ⊗ b; b occupies the low-order qubits."""
    n = a.n_qubits + b.n_qubits
    if n > MAX_QUBITS:
        raise ValueError(f"tensor product would exceed {MAX_QUBITS} qubits")
    return StateVector(n, np.kron(a.amplitudes, b.amplitudes))


def _check_qubits(n_qubits: int, qubits: Sequence[int]) -> tuple[int, ...]:
    qs = tuple(int(q) for q in qubits)
    for q in qs:
        if not 1 <= q <= n_qubits:
            raise ValueError(f"qubit {q} out of range 1..{n_qubits}")
    if len(set(qs)) != len(qs):
        raise ValueError(f"duplicate qubits in {qs}")
    return qs


def _match_mask(n_qubits: int, qubits: Sequence[int], bits: Sequence[int]) -> np.ndarray:
    """Boolean mask over basis indices where each listed qubit has the given bit."""
    idx = np.arange(1 << n_qubits)
    mask = np.ones(idx.shape, dtype=bool)
    for q, b in zip(qubits, bits):
        mask &= ((idx >> (q - 1)) & 1) == b
    return mask


def probability(state: StateVector, qubits: Sequence[int], bits: Sequence[int]) -> float:
    """P(listed qubits read the listed bits) under Born sampling."""
    qs = _check_qubits(state.n_qubits, qubits)
    bs = tuple(int(b) for b in bits)
    if len(bs) != len(qs) or any(b not in (0, 1) for b in bs):
        raise ValueError("bits must be 0/1 and match the qubit list")
    mask = _match_mask(state.n_qubits, qs, bs)
    return float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


def measure_partial(
    state: StateVector,
    qubits: Sequence[int],
    bits: Sequence[int],
    collapse_tol: float = DEFAULT_COLLAPSE_TOL,
) -> tuple[MeasurementOutcome, StateVector]:
    """Project onto the given outcome and renormalise.

    Raises ValueError if the outcome probability is <= collapse_tol.
    """
    qs = _check_qubits(state.n_qubits, qubits)
    bs = tuple(int(b) for b in bits)
    p = probability(state, qs, bs)
    if p <= collapse_tol:
        raise ValueError(
            f"outcome {bs} on qubits {qs} has probability {p:.3e} <= collapse_tol"
        )
    mask = _match_mask(state.n_qubits, qs, bs)
    amps = np.where(mask, state.amplitudes, 0.0) / math.sqrt(p)
    outcome = MeasurementOutcome(qubits=qs, bits=bs, probability=p)
    return outcome, StateVector(state.n_qubits, amps)


def sample_measure(
    state: StateVector,
    qubits: Sequence[int],
    seed: int = 0,
    rng: SplitMix64 | None = None,
) -> tuple[MeasurementOutcome, StateVector]:
    """Sample a joint outcome for the listed qubits (splitmix64 stream).

    Outcomes are enumerated with qubit ``qubits[j]`` contributing bit j of
    the pattern; the draw is inverse-CDF over that ordering, so a given
    seed reproduces the same outcome for the same state and qubit list.
    """
    qs = _check_qubits(state.n_qubits, qubits)
    gen = rng if rng is not None else SplitMix64(seed)
    u = gen.next_float()
    cumulative = 0.0
    last_positive: tuple[int, ...] | None = None
    for pattern in range(1 << len(qs)):
        bs = tuple((pattern >> j) & 1 for j in range(len(qs)))
        p = probability(state, qs, bs)
        if p > 0.0:
            last_positive = bs
        cumulative += p
        if u < cumulative:
            return measure_partial(state, qs, bs)
    # Floating point left u just past the accumulated total; take the last
    # outcome that had any weight.
    if last_positive is None:
        raise ValueError("state has no measurable weight on the listed qubits")
    return measure_partial(state, qs, last_positive)


def equal_up_to_global_phase(
    a: StateVector, b: StateVector, tol: float = DEFAULT_PHASE_TOL
) -> bool:
    """True when a and b differ only by a global phase factor."""
    if a.n_qubits != b.n_qubits:
        return False
    k = int(np.argmax(np.abs(a.amplitudes)))
    if abs(a.amplitudes[k]) <= tol:
        return bool(np.all(np.abs(b.amplitudes) <= tol))
    phase = b.amplitudes[k] / a.amplitudes[k]
    if abs(abs(phase) - 1.0) > tol:
        return False
    return bool(np.allclose(a.amplitudes * phase, b.amplitudes, atol=tol, rtol=0.0))


def permute_qubits(state: StateVector, order: Sequence[int]) -> StateVector:
    """Relabel qubits: order[j] is the original qubit placed at new position j+1."""
    qs = _check_qubits(state.n_qubits, order)
    if len(qs) != state.n_qubits:
        raise ValueError("order must list every qubit exactly once")
    idx = np.arange(1 << state.n_qubits)
    src = np.zeros_like(idx)
    for j, q in enumerate(qs):
        src |= ((idx >> j) & 1) << (q - 1)
    return StateVector(state.n_qubits, state.amplitudes[src])


# ---------------------------------------------------------------------------
# Amplitude text i/o
# ---------------------------------------------------------------------------

def parse_amplitude(token: str) -> complex:
    """Parse one amplitude token: Python complex syntax or polar r@phase."""
    text = token.strip()
    if not text:
        raise ValueError("empty amplitude token")
    if "@" in text:
        left, _, right = text.partition("@")
        try:
            r = float(left)
            phase = float(right)
        except ValueError as exc:
            raise ValueError(f"bad polar amplitude {token!r}") from exc
        return complex(r * math.cos(phase), r * math.sin(phase))
    try:
        return complex(text)
    except ValueError as exc:
        raise ValueError(f"bad amplitude {token!r}") from exc


def parse_amplitudes(text: str) -> list[complex]:
    """Parse a whitespace-separated amplitude list in ascending index order."""
    return [parse_amplitude(tok) for tok in text.split()]


def format_amplitude(value: complex) -> str:
    """Polar text form r@phase with 12 significant digits; -0.0 folds to 0."""
    z = complex(value)
    r = abs(z)
    phase = 0.0 if r == 0.0 else math.atan2(z.imag + 0.0, z.real + 0.0)
    return "%.12g@%.12g" % (r, phase)


def format_amplitudes(values: Iterable[complex]) -> str:
    return " ".join(format_amplitude(v) for v in values)
