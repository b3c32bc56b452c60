"""Deterministic SVG output for circle-notation states and traces.

Each basis amplitude becomes a glyph: an outer circle of radius R, an inner
disc of radius R*|amplitude| (area tracks probability), and a phase line of
length R at angle phi from the upward vertical, rotating counter-clockwise
for positive phi (phi = pi/2 points left).  All numbers are written with
three decimals so identical inputs give byte-identical documents.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .gates import Trace
from .layout import AxisAnnotation, LayoutSpec, annotate, layout
from .separability import SeparabilityReport, Tolerances
from .state import StateVector

GLYPH_ZERO_TOL = 1e-9
PANEL_WRAP = 4
CAPTION_BAND = 24.0

OUTER_STROKE = "#455a64"
INNER_FILL = "#64b5f6"
PHASE_STROKE = "#263238"
LABEL_FILL = "#37474f"

DEFAULT_ANNOTATION_COLORS = {
    "separable": "#2e7d32",
    "entangled": "#c62828",
    "marginal": "#f9a825",
}


@dataclass(frozen=True, eq=False)
class RenderOptions:
    """Visual knobs; defaults match the frozen golden files."""

    outer_radius: float = 20.0
    show_phase_line: bool = True
    show_labels: bool = True
    label_format: str = "binary-ket"  # or "decimal"
    annotation_colors: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_ANNOTATION_COLORS)
    )
    background: str = "#ffffff"

    def __post_init__(self):
        if self.outer_radius <= 0:
            raise ValueError("outer_radius must be positive")
        if self.label_format not in ("binary-ket", "decimal"):
            raise ValueError(f"unknown label format {self.label_format!r}")


def _fmt(value: float) -> str:
    text = "%.3f" % value
    return "0.000" if text == "-0.000" else text


def _short_polar(z: complex) -> str:
    r = abs(z)
    phase = 0.0 if r == 0.0 else math.atan2(z.imag, z.real)
    return "%.4g@%.4g" % (r, phase)


def glyph(
    amplitude: complex,
    options: RenderOptions | None = None,
    cx: float = 0.0,
    cy: float = 0.0,
) -> str:
    """SVG fragment for one amplitude circle centred at (cx, cy)."""
    opts = options or RenderOptions()
    radius = opts.outer_radius
    z = complex(amplitude)
    mag = min(abs(z), 1.0)
    parts = [
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" '
        f'fill="none" stroke="{OUTER_STROKE}" stroke-width="1.5"/>'
    ]
    if mag > GLYPH_ZERO_TOL:
        parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius * mag)}" '
            f'fill="{INNER_FILL}" stroke="none"/>'
        )
        if opts.show_phase_line:
            phi = math.atan2(z.imag, z.real)
            x2 = cx - radius * math.sin(phi)
            y2 = cy - radius * math.cos(phi)
            parts.append(
                f'<line x1="{_fmt(cx)}" y1="{_fmt(cy)}" x2="{_fmt(x2)}" '
                f'y2="{_fmt(y2)}" stroke="{PHASE_STROKE}" stroke-width="1.5"/>'
            )
    return "<g>" + "".join(parts) + "</g>"


def _annotation_elements(
    annotations: list[AxisAnnotation], opts: RenderOptions
) -> tuple[list[str], list[str]]:
    """Bisector shapes and their axis labels, in axis-qubit order."""
    shapes: list[str] = []
    labels: list[str] = []
    for ann in sorted(annotations, key=lambda a: a.qubit):
        color = opts.annotation_colors.get(ann.verdict, "#000000")
        for poly in ann.geometry:
            if len(poly) == 2:
                (x1, y1), (x2, y2) = poly
                shapes.append(
                    f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
                    f'y2="{_fmt(y2)}" stroke="{color}" stroke-width="2" '
                    f'stroke-dasharray="6 4"/>'
                )
            else:
                points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in poly)
                shapes.append(
                    f'<polygon points="{points}" fill="{color}" '
                    f'fill-opacity="0.15" stroke="{color}" stroke-width="1.5" '
                    f'stroke-dasharray="6 4"/>'
                )
        if ann.geometry:
            ax, ay = ann.geometry[0][0]
            text = f"q{ann.qubit}"
            if ann.ratio is not None:
                text += f" m={_short_polar(ann.ratio)}"
            labels.append(
                f'<text x="{_fmt(ax + 4)}" y="{_fmt(ay - 6)}" '
                f'font-family="monospace" font-size="11" fill="{color}">'
                f"{escape(text)}</text>"
            )
    return shapes, labels


def _basis_label(index: int, n_qubits: int, opts: RenderOptions) -> str:
    if opts.label_format == "decimal":
        return str(index)
    return f"|{index:0{n_qubits}b}⟩"


def _frame_body(
    state: StateVector,
    spec: LayoutSpec,
    reports: dict[int, SeparabilityReport] | None,
    opts: RenderOptions,
    caption: str,
    tolerances: Tolerances | None = None,
) -> tuple[str, float, float]:
    """Panel content (no background) plus its width and height."""
    placement = layout(state.n_qubits, spec)
    annotations = annotate(state, spec, reports, tolerances)
    shapes, axis_labels = _annotation_elements(annotations, opts)

    glyphs: list[str] = []
    for i, (cx, cy) in enumerate(placement.centers):
        glyphs.append(glyph(state[i], opts, cx, cy))
        if opts.show_labels:
            label = _basis_label(i, state.n_qubits, opts)
            glyphs.append(
                f'<text x="{_fmt(cx)}" y="{_fmt(cy + opts.outer_radius + 13)}" '
                f'font-family="monospace" font-size="10" fill="{LABEL_FILL}" '
                f'text-anchor="middle">{escape(label)}</text>'
            )

    height = placement.height
    parts = ["<g>" + "".join(shapes) + "</g>",
             "<g>" + "".join(axis_labels) + "</g>",
             "<g>" + "".join(glyphs) + "</g>"]
    if caption:
        parts.append(
            f'<text x="{_fmt(placement.width / 2)}" y="{_fmt(height + 14)}" '
            f'font-family="monospace" font-size="12" fill="{PHASE_STROKE}" '
            f'text-anchor="middle">{escape(caption)}</text>'
        )
        height += CAPTION_BAND
    return "".join(parts), placement.width, height


def _document(body: str, width: float, height: float, background: str) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
        f'<rect x="0.000" y="0.000" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'fill="{background}"/>' + body + "</svg>\n"
    )


def render_frame(
    state: StateVector,
    spec: LayoutSpec,
    reports: dict[int, SeparabilityReport] | None = None,
    options: RenderOptions | None = None,
    caption: str = "",
    tolerances: Tolerances | None = None,
) -> str:
    """Single-panel SVG document for one state."""
    opts = options or RenderOptions()
    body, width, height = _frame_body(state, spec, reports, opts, caption, tolerances)
    return _document(body, width, height, opts.background)


def sanitize_label(label: str) -> str:
    """File-name-safe form of a frame label."""
    slug = re.sub(r"[^a-z0-9]+", "_", label.lower()).strip("_")
    return slug or "frame"


def render_trace(
    trace: Trace,
    spec: LayoutSpec,
    options: RenderOptions | None = None,
    out_dir: str | None = None,
    tolerances: Tolerances | None = None,
    name: str | None = None,
) -> str | list[str]:
    """Multi-panel SVG for a trace's checkpoints, or one file per checkpoint.

    With out_dir=None, returns a single document with panels wrapped four to
    a row.  Otherwise writes `<name>_<frameindex>_<label>.svg` files into
    out_dir and returns their paths.
    """
    opts = options or RenderOptions()
    frames = trace.checkpoints()
    series_name = name if name is not None else (trace.circuit.name or "trace")

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        for frame in frames:
            doc = render_frame(
                frame.state, spec, None, opts, caption=frame.label,
                tolerances=tolerances,
            )
            filename = f"{series_name}_{frame.index}_{sanitize_label(frame.label)}.svg"
            path = os.path.join(out_dir, filename)
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(doc)
            paths.append(path)
        return paths

    bodies = []
    panel_w = panel_h = 0.0
    for frame in frames:
        body, w, h = _frame_body(
            frame.state, spec, None, opts, frame.label, tolerances
        )
        panel_w = max(panel_w, w)
        panel_h = max(panel_h, h)
        bodies.append(body)
    parts = []
    for k, body in enumerate(bodies):
        col, row = k % PANEL_WRAP, k // PANEL_WRAP
        parts.append(
            f'<g transform="translate({_fmt(col * panel_w)},{_fmt(row * panel_h)})">'
            + body + "</g>"
        )
    columns = min(len(bodies), PANEL_WRAP)
    rows = (len(bodies) + PANEL_WRAP - 1) // PANEL_WRAP
    return _document(
        "".join(parts), columns * panel_w, rows * panel_h, opts.background
    )
