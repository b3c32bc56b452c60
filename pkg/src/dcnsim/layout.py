"""2D arrangements of basis-state circles: row, square, cube, hypercube, modular.

Coordinates are screen-style (y grows downward).  Every supported layout
gives each spatial-axis qubit a constant displacement vector: flipping that
qubit's bit moves a circle by the same vector everywhere in the scene.  The
depth axis of cube-style layouts is drawn obliquely, rising to the right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .state import StateVector
from .separability import SeparabilityReport, Tolerances, check_qubit

DEFAULT_CELL_RADIUS = 20.0
DEFAULT_SPACING = 50.0
DEFAULT_OBLIQUE_ANGLE = math.pi / 6
DEPTH_SCALE = 0.5  # foreshortening of the oblique depth step
ANNOTATION_MARGIN = 0.35  # bisector overhang beyond glyph edges, in spacings

LAYOUT_KINDS = ("row", "square", "cube", "hypercube", "modular")

Point = tuple[float, float]
Polygon = tuple[Point, ...]


@dataclass(frozen=True)
class LayoutSpec:
    """Choice of arrangement plus its geometry constants."""

    kind: str
    axis_qubits: tuple[int, ...] = ()
    cell_radius: float = DEFAULT_CELL_RADIUS
    spacing: float = DEFAULT_SPACING
    oblique_angle: float = DEFAULT_OBLIQUE_ANGLE

    def __post_init__(self):
        if self.kind not in LAYOUT_KINDS:
            raise ValueError(f"unknown layout kind {self.kind!r}")
        if self.spacing <= 2 * self.cell_radius:
            raise ValueError("spacing must exceed the circle diameter")
        if len(set(self.axis_qubits)) != len(self.axis_qubits):
            raise ValueError("axis qubits must be distinct")


@dataclass(frozen=True, eq=False)
class Placement:
    """Concrete positions for all 2**n basis circles under one layout."""

    n_qubits: int
    spec: LayoutSpec
    centers: tuple[Point, ...]
    axis_qubits: tuple[int, ...]
    bisectors: dict[int, tuple[Polygon, ...]]
    width: float
    height: float


@dataclass(frozen=True, eq=False)
class AxisAnnotation:
    """Separability marking for one spatial-axis qubit."""

    qubit: int
    verdict: str
    geometry: tuple[Polygon, ...]
    ratio: complex | None


def default_layout_spec(n_qubits: int) -> LayoutSpec:
    """Layout used when none is requested: the richest kind for the size."""
    kind = {1: "row", 2: "square", 3: "cube", 4: "hypercube"}.get(n_qubits, "row")
    return LayoutSpec(kind)


def parse_layout(text: str) -> LayoutSpec:
    """Parse a CLI/query layout name such as `cube` or `modular:4,5`."""
    name, _, rest = text.partition(":")
    if name != "modular":
        if rest:
            raise ValueError(f"layout {name!r} takes no axis list")
        return LayoutSpec(name)
    axes: tuple[int, ...] = ()
    if rest:
        try:
            axes = tuple(int(tok) for tok in rest.split(",") if tok)
        except ValueError:
            raise ValueError(f"bad axis list {rest!r}; expected comma-separated qubits") from None
        if any(q < 1 for q in axes):
            raise ValueError("axis qubits are 1-based")
    return LayoutSpec("modular", axis_qubits=axes)


def _bit(index: int, qubit: int) -> int:
    return (index >> (qubit - 1)) & 1


def _depth_vector(spec: LayoutSpec, scale: float = DEPTH_SCALE) -> Point:
    return (
        math.cos(spec.oblique_angle) * spec.spacing * scale,
        -math.sin(spec.oblique_angle) * spec.spacing * scale,
    )


def _separating_segment(
    centers: list[Point], bits: list[int], horizontal_axis: bool,
    pad: float,
) -> Polygon:
    """Straight bisector between the 0-cells and 1-cells along one screen axis."""
    along = 0 if horizontal_axis else 1
    across = 1 - along
    lo = max(c[along] for c, b in zip(centers, bits) if b == 0)
    hi = min(c[along] for c, b in zip(centers, bits) if b == 1)
    mid = (lo + hi) / 2.0
    start = min(c[across] for c in centers) - pad
    stop = max(c[across] for c in centers) + pad
    if horizontal_axis:
        return ((mid, start), (mid, stop))
    return ((start, mid), (stop, mid))


def _plane_quad(center: Point, axis_a: Point, axis_b: Point, pad: float) -> Polygon:
    """Parallelogram through `center` spanned by two in-plane step vectors."""
    out = []
    for sa, sb in ((1, 1), (1, -1), (-1, -1), (-1, 1)):
        ex = _scaled_half(axis_a, pad)
        ey = _scaled_half(axis_b, pad)
        out.append((center[0] + sa * ex[0] + sb * ey[0],
                    center[1] + sa * ex[1] + sb * ey[1]))
    return tuple(out)


def _scaled_half(vec: Point, pad: float) -> Point:
    length = math.hypot(*vec)
    scale = (length / 2.0 + pad) / length
    return (vec[0] * scale, vec[1] * scale)


def _depth_quad(centers: list[Point], bits: list[int], depth: Point, pad: float) -> Polygon:
    """Mid-depth rectangle: the front layer's box shifted half a depth step."""
    front = [c for c, b in zip(centers, bits) if b == 0]
    x0 = min(c[0] for c in front) - pad + depth[0] / 2.0
    x1 = max(c[0] for c in front) + pad + depth[0] / 2.0
    y0 = min(c[1] for c in front) - pad + depth[1] / 2.0
    y1 = max(c[1] for c in front) + pad + depth[1] / 2.0
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def _centroid(points: list[Point]) -> Point:
    return (
        sum(p[0] for p in points) / len(points),
        sum(p[1] for p in points) / len(points),
    )


def layout(n_qubits: int, spec: LayoutSpec) -> Placement:
    """Place all 2**n basis circles and derive per-axis bisector geometry."""
    if not 1 <= n_qubits <= 8:
        raise ValueError(f"n_qubits must be in 1..8, got {n_qubits}")
    s = spec.spacing
    pad = spec.cell_radius + ANNOTATION_MARGIN * s
    depth = _depth_vector(spec)
    size = 1 << n_qubits

    centers: list[Point]
    bisectors: dict[int, tuple[Polygon, ...]] = {}

    if spec.kind == "row":
        centers = [(i * s, 0.0) for i in range(size)]
        axis_qubits = (n_qubits,)
        if n_qubits >= 1 and size >= 2:
            bits = [_bit(i, n_qubits) for i in range(size)]
            bisectors[n_qubits] = (_separating_segment(centers, bits, True, pad),)

    elif spec.kind == "square":
        if n_qubits != 2:
            raise ValueError("square layout requires exactly 2 qubits")
        centers = [(_bit(i, 1) * s, _bit(i, 2) * s) for i in range(size)]
        axis_qubits = (1, 2)
        bisectors[1] = (_separating_segment(centers, [_bit(i, 1) for i in range(size)], True, pad),)
        bisectors[2] = (_separating_segment(centers, [_bit(i, 2) for i in range(size)], False, pad),)

    elif spec.kind == "cube":
        if n_qubits != 3:
            raise ValueError("cube layout requires exactly 3 qubits")
        centers = [
            (
                _bit(i, 1) * s + _bit(i, 3) * depth[0],
                _bit(i, 2) * s + _bit(i, 3) * depth[1],
            )
            for i in range(size)
        ]
        axis_qubits = (1, 2, 3)
        mid = _centroid(centers)
        bisectors[1] = (_plane_quad(mid, (0.0, s), depth, pad),)
        bisectors[2] = (_plane_quad(mid, (s, 0.0), depth, pad),)
        bisectors[3] = (_depth_quad(centers, [_bit(i, 3) for i in range(size)], depth, pad),)

    elif spec.kind == "hypercube":
        if n_qubits != 4:
            raise ValueError("hypercube layout requires exactly 4 qubits")
        cube_offset = 2 * s + depth[0]
        centers = [
            (
                _bit(i, 1) * s + _bit(i, 3) * depth[0] + _bit(i, 4) * cube_offset,
                _bit(i, 2) * s + _bit(i, 3) * depth[1],
            )
            for i in range(size)
        ]
        axis_qubits = (1, 2, 3, 4)
        for q in (1, 2, 3):
            quads = []
            for half in (0, 1):
                sub = [centers[i] for i in range(size) if _bit(i, 4) == half]
                sub_bits = [_bit(i, q) for i in range(size) if _bit(i, 4) == half]
                mid = _centroid(sub)
                if q == 1:
                    quads.append(_plane_quad(mid, (0.0, s), depth, pad))
                elif q == 2:
                    quads.append(_plane_quad(mid, (s, 0.0), depth, pad))
                else:
                    quads.append(_depth_quad(sub, sub_bits, depth, pad))
            bisectors[q] = tuple(quads)
        bisectors[4] = (
            _separating_segment(centers, [_bit(i, 4) for i in range(size)], True, pad),
        )

    elif spec.kind == "modular":
        axis_qubits = spec.axis_qubits
        if len(axis_qubits) > 3:
            raise ValueError("modular layout supports at most 3 axis qubits")
        for q in axis_qubits:
            if not 1 <= q <= n_qubits:
                raise ValueError(f"axis qubit {q} out of range 1..{n_qubits}")
        inline = [q for q in range(1, n_qubits + 1) if q not in axis_qubits]
        row_len = 1 << len(inline)
        content_w = (row_len - 1) * s
        pitch_x = content_w + 2 * s
        pitch_y = 2 * s
        cell_depth = _depth_vector(spec, 1.0)
        centers = []
        for i in range(size):
            r = sum(_bit(i, q) << j for j, q in enumerate(inline))
            x = r * s
            y = 0.0
            if len(axis_qubits) >= 1:
                x += _bit(i, axis_qubits[0]) * pitch_x
            if len(axis_qubits) >= 2:
                y += _bit(i, axis_qubits[1]) * pitch_y
            if len(axis_qubits) >= 3:
                x += _bit(i, axis_qubits[2]) * cell_depth[0]
                y += _bit(i, axis_qubits[2]) * cell_depth[1]
            centers.append((x, y))
        if len(axis_qubits) >= 1:
            q = axis_qubits[0]
            bisectors[q] = (
                _separating_segment(centers, [_bit(i, q) for i in range(size)], True, pad),
            )
        if len(axis_qubits) >= 2:
            q = axis_qubits[1]
            bisectors[q] = (
                _separating_segment(centers, [_bit(i, q) for i in range(size)], False, pad),
            )
        if len(axis_qubits) >= 3:
            q = axis_qubits[2]
            bisectors[q] = (
                _depth_quad(centers, [_bit(i, q) for i in range(size)], cell_depth, pad),
            )

    else:  # pragma: no cover - guarded by LayoutSpec
        raise ValueError(f"unknown layout kind {spec.kind!r}")

    shift_x = s - min(c[0] for c in centers)
    shift_y = s - min(c[1] for c in centers)
    moved = tuple((c[0] + shift_x, c[1] + shift_y) for c in centers)
    moved_bisectors = {
        q: tuple(
            tuple((p[0] + shift_x, p[1] + shift_y) for p in poly) for poly in polys
        )
        for q, polys in bisectors.items()
    }
    width = max(c[0] for c in moved) + s
    height = max(c[1] for c in moved) + s
    return Placement(
        n_qubits=n_qubits,
        spec=spec,
        centers=moved,
        axis_qubits=axis_qubits,
        bisectors=moved_bisectors,
        width=width,
        height=height,
    )


def annotate(
    state: StateVector,
    spec: LayoutSpec,
    reports: dict[int, SeparabilityReport] | None = None,
    tolerances: Tolerances | None = None,
) -> list[AxisAnnotation]:
    """One separability annotation per spatial-axis qubit of the layout."""
    placement = layout(state.n_qubits, spec)
    tol = tolerances or Tolerances()
    annotations = []
    for q in placement.axis_qubits:
        report = reports[q] if reports and q in reports else check_qubit(state, q, tol)
        ratio: complex | None = None
        if report.factor_p is not None and abs(report.factor_p[0]) > tol.zero_tol:
            ratio = complex(report.factor_p[1] / report.factor_p[0])
        annotations.append(
            AxisAnnotation(
                qubit=q,
                verdict=report.verdict,
                geometry=placement.bisectors.get(q, ()),
                ratio=ratio,
            )
        )
    return annotations
