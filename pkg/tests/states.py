"""Closed-form reference states shared by the test modules."""

from __future__ import annotations

import numpy as np

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)
SQRT6 = np.sqrt(6.0)
SQRT12 = np.sqrt(12.0)

E_MINUS_IPI4 = np.exp(-1j * np.pi / 4)
E_PLUS_3IPI4 = np.exp(3j * np.pi / 4)
E_MINUS_3IPI4 = np.exp(-3j * np.pi / 4)
E_MINUS_IPI2 = np.exp(-1j * np.pi / 2)
E_PLUS_IPI2 = np.exp(1j * np.pi / 2)

# Two-qubit product state with nontrivial phases; ratio of the upper to the
# lower half is -1/sqrt(3), concurrence 0.
PRODUCT_2Q = np.array(
    [1 / 2, E_MINUS_IPI4 / SQRT2, -1 / SQRT12, E_PLUS_3IPI4 / SQRT6]
)

# Weakly entangled variant (the two right-hand amplitudes swap magnitudes);
# concurrence sqrt(3)/6.
ENTANGLED_2Q_WEAK = np.array(
    [1 / 2, E_MINUS_IPI4 / SQRT2, -1 / SQRT6, E_PLUS_3IPI4 / SQRT12]
)

# More strongly entangled variant (phase flip on the last amplitude);
# concurrence sqrt(3)/3.
ENTANGLED_2Q_STRONG = np.array(
    [1 / 2, E_MINUS_IPI4 / SQRT2, -1 / SQRT12, E_MINUS_3IPI4 / SQRT6]
)

# Two-qubit state with P(qubit 2 = 0) = 3/4, used by the measurement tests;
# concurrence sqrt(3)/2.
BIASED_2Q = np.array(
    [1 / 2, E_MINUS_IPI4 / SQRT2, 1 / SQRT6, E_PLUS_3IPI4 / SQRT12]
)

# Collapsed versions of BIASED_2Q after measuring qubit 2.
BIASED_2Q_Q2_ZERO = np.array([1 / SQRT3, np.sqrt(2 / 3) * E_MINUS_IPI4, 0, 0])
BIASED_2Q_Q2_ONE = np.array([0, 0, np.sqrt(2 / 3), E_PLUS_3IPI4 / SQRT3])

# Three-qubit state whose 2x4 grid has a zero in the first row but not in
# the corresponding first-column cell of the second row.  Its anchored
# minors through the first nonzero all vanish, yet the zero-pattern
# mismatch makes it entangled across the 2|4 split (unnormalized).
ZERO_PATTERN_3Q_RAW = np.array(
    [
        0,
        1 / SQRT6,
        1 / SQRT6,
        -1 / SQRT6,
        1 / SQRT6,
        E_MINUS_IPI2 / (2 * SQRT3),
        0,
        E_PLUS_IPI2 / (2 * SQRT3),
    ]
)

ZERO_PATTERN_3Q = ZERO_PATTERN_3Q_RAW / np.linalg.norm(ZERO_PATTERN_3Q_RAW)


def ratio_grid_4q() -> np.ndarray:
    """Four-qubit state whose 4x4 grid repeats the row (1, 0, -1, -i)/3 on
    rows 0, 1, 3 with row 2 zero: 4-4-separable with ratio set
    (1, 0, -1, e^{-i pi/2}), yet every single qubit is entangled."""
    pattern = np.array([1, 0, -1, E_MINUS_IPI2]) / 3
    grid = np.zeros((4, 4), dtype=complex)
    for row in (0, 1, 3):
        grid[row] = pattern
    return grid.reshape(-1)


RATIO_GRID_4Q = ratio_grid_4q()

BELL_PHI_PLUS = np.array([1, 0, 0, 1]) / SQRT2
BELL_PHI_MINUS = np.array([1, 0, 0, -1]) / SQRT2
BELL_PSI_PLUS = np.array([0, 1, 1, 0]) / SQRT2
BELL_PSI_MINUS = np.array([0, 1, -1, 0]) / SQRT2

GHZ_3 = np.array([1, 0, 0, 0, 0, 0, 0, 1]) / SQRT2
W_3 = np.array([0, 1, 1, 0, 1, 0, 0, 0]) / SQRT3
