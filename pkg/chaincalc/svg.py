# chaincalc/svg.py - Deterministic SVG figures of traces, chain files and polylines
"""
Output depends only on the input geometry: coordinates are mapped through
a fixed affine transform (uniform scale, y flipped) and printed with four
decimals, and elements are emitted in a fixed order.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from .chains import ArcChain
from .construction import Trace
from .evaluation import Polyline
from .geometry import Point, Rect, Segment, bounding_rect

logger = logging.getLogger("chaincalc.svg")

SIZE = 512
MARGIN = 16

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%(size)d" height="%(size)d" viewBox="0 0 %(size)d %(size)d">
<rect x="0" y="0" width="%(size)d" height="%(size)d" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def region_colour(e: int) -> str:
    return PALETTE[(e - 1) % len(PALETTE)]


class SvgCanvas:
    """Collects drawing commands over a fixed world window."""

    def __init__(self, window: Rect, size: int = SIZE, margin: int = MARGIN):
        self.window = window
        self.size = size
        self.margin = margin
        span = max(window.width, window.height)
        self.scale = Fraction(size - 2 * margin) / span
        self.commands: List[str] = []

    def xy(self, p: Point) -> str:
        x = self.margin + (p.x - self.window.xlo) * self.scale
        y = self.size - self.margin - (p.y - self.window.ylo) * self.scale
        return f"{float(x):.4f},{float(y):.4f}"

    def line(self, seg: Segment, colour: str = "#000000", width: float = 1.0) -> None:
        self.commands.append(
            f'<polyline points="{self.xy(seg.a)} {self.xy(seg.b)}" '
            f'style="fill:none;stroke:{colour};stroke-width:{width:.2f}"/>')

    def polyline(self, points: Sequence[Point], colour: str = "#000000", width: float = 1.0) -> None:
        coords = " ".join(self.xy(p) for p in points)
        self.commands.append(f'<polyline points="{coords}" style="fill:none;stroke:{colour};stroke-width:{width:.2f}"/>')

    def rect(self, r: Rect, stroke: str = "none", fill: str = "none", opacity: float = 1.0) -> None:
        corners = (Point(r.xlo, r.ylo), Point(r.xhi, r.ylo), Point(r.xhi, r.yhi), Point(r.xlo, r.yhi))
        coords = " ".join(self.xy(p) for p in corners)
        self.commands.append(
            f'<polygon points="{coords}" style="fill:{fill};fill-opacity:{opacity:.2f};'
            f'stroke:{stroke};stroke-width:0.50"/>')

    def circle(self, p: Point, radius: float = 3.0, colour: str = "#d62728") -> None:
        x, y = self.xy(p).split(",")
        self.commands.append(f'<circle cx="{x}" cy="{y}" r="{radius:.2f}" style="fill:{colour};stroke:none"/>')

    def render(self) -> str:
        return PREAMBLE % {"size": self.size} + "".join(c + "\n" for c in self.commands) + POSTAMBLE


def _window(rects: Sequence[Rect]) -> Rect:
    box = bounding_rect(rects)
    pad = max(box.width, box.height) / 20
    return box.inflate(pad)


def _segment_box(segments: Sequence[Segment]) -> List[Rect]:
    out = []
    for s in segments:
        xlo, xhi = min(s.a.x, s.b.x), max(s.a.x, s.b.x)
        ylo, yhi = min(s.a.y, s.b.y), max(s.a.y, s.b.y)
        # widen degenerate extents so the box stays a valid open rectangle
        pad = max(xhi - xlo, yhi - ylo) / 1000
        out.append(Rect(xlo - pad, xhi + pad, ylo - pad, yhi + pad))
    return out


def render_trace(trace: Trace, t: Optional[int] = None, size: int = SIZE, margin: int = MARGIN) -> str:
    """
    Stage t (default: last) of a trace: regions filled by requirement,
    acted rectangles outlined, segments in black and p_t as a marker.
    """
    state = trace.states[trace.T if t is None else t]
    regions = [r for reg in state.regions.values() for r in reg.parts]
    canvas = SvgCanvas(_window(_segment_box(state.segments) + regions), size, margin)
    for e, reg in sorted(state.regions.items()):
        for r in reg.parts:
            canvas.rect(r, fill=region_colour(e), opacity=0.35)
    for a in state.action_log:
        canvas.rect(a.R, stroke=region_colour(a.e))
    for s in state.segments:
        canvas.line(s)
    canvas.circle(state.p)
    logger.debug(f"rendered stage {state.t}: {len(canvas.commands)} elements")
    return canvas.render()


def render_chains(chains: Sequence[ArcChain], polyline: Optional[Polyline] = None,
                  size: int = SIZE, margin: int = MARGIN) -> str:
    """Every rectangle of every arc chain outlined, deeper levels darker."""
    rects = [r for c in chains for r in c.all_rects()]
    extra = _segment_box(polyline.segments()) if polyline else []
    canvas = SvgCanvas(_window(rects + extra), size, margin)
    for level, chain in enumerate(chains):
        colour = PALETTE[level % len(PALETTE)]
        for r in chain.all_rects():
            canvas.rect(r, stroke=colour)
    if polyline:
        canvas.polyline(polyline.vertices)
    return canvas.render()


def write_svg(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
    logger.info(f"wrote {path}")
