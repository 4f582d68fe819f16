"""Deterministic SVG 1.1 renderer for collision lines and resonance points.

The drawing is assembled with ElementTree in a fixed element order with a
fixed attribute order and fixed-precision coordinates, so identical inputs
produce identical bytes. Colors cycle through a small palette keyed by the
integer offset k; punctures are distinguished by dash pattern.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .sections import ChartDisk, SurfaceData, collision_locus, resonance_points, zero_chart_region

PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
           "#59a14f", "#edc948", "#b07aa1", "#9c755f")

_DASHES = ("", "6,3", "2,3", "8,3,2,3")


@dataclass(frozen=True)
class Window:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("window must have positive extent")

    def contains(self, z: complex) -> bool:
        return (self.xmin <= z.real <= self.xmax
                and self.ymin <= z.imag <= self.ymax)


DEFAULT_WINDOW = Window(-2.0, 2.0, -2.0, 2.0)


def _fmt(value: float) -> str:
    text = f"{value + 0.0:.4f}".rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text


def _clip_line(x0: float, y0: float, dx: float, dy: float,
               win: Window) -> tuple[float, float] | None:
    """Liang-Barsky parameter range of an infinite line inside the window."""
    t_lo, t_hi = -1e18, 1e18
    for p, q in ((-dx, x0 - win.xmin), (dx, win.xmax - x0),
                 (-dy, y0 - win.ymin), (dy, win.ymax - y0)):
        if p == 0:
            if q < 0:
                return None
            continue
        t = q / p
        if p < 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
    return (t_lo, t_hi) if t_lo < t_hi else None


def collect_loci(data: SurfaceData, window: Window):
    """Visible collision lines and resonance points, deterministically ordered.

    Lines are (puncture, k, base, direction) spanning the whole window; the
    line for k is visible exactly when k lands in the range the window's
    corners span. Resonance points are gathered for the same offsets.
    """
    lines = []
    points = []
    corners = (complex(window.xmin, window.ymin), complex(window.xmin, window.ymax),
               complex(window.xmax, window.ymin), complex(window.xmax, window.ymax))
    for name in data.punctures:
        pair = data.kms[name]
        probe = collision_locus(pair, 0)
        if probe.kind == "everywhere":
            raise ValueError("degenerate collision locus: every lambda collides")
        if probe.kind == "empty":
            continue  # weights differ by a constant non-integer: no loci
        normal = probe.normal
        values = [2 * (z * normal).real for z in corners]
        da = -probe.offset  # probe.offset = k - (a - a') at k = 0
        for k in range(math.ceil(min(values) + da),
                       math.floor(max(values) + da) + 1):
            locus = collision_locus(pair, k)
            base = locus.offset * normal.conjugate() / (2 * abs(normal) ** 2)
            direction = 1j * normal.conjugate()
            direction /= abs(direction)
            lines.append((name, k, base, direction))
            for z in resonance_points(pair, k):
                if window.contains(z):
                    points.append((name, k, z))
    return lines, points


def loci_svg(data: SurfaceData, window: Window = DEFAULT_WINDOW,
             disks: list[ChartDisk] | None = None, size: int = 640) -> str:
    """Render the loci of a surface datum to an SVG document string."""
    margin = 40.0
    width = window.xmax - window.xmin
    height = window.ymax - window.ymin
    scale = (size - 2 * margin) / max(width, height)
    plot_w = width * scale
    plot_h = height * scale
    canvas_w = plot_w + 2 * margin
    canvas_h = plot_h + 2 * margin

    def to_px(z: complex) -> tuple[float, float]:
        return (margin + (z.real - window.xmin) * scale,
                margin + (window.ymax - z.imag) * scale)

    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "width": _fmt(canvas_w),
        "height": _fmt(canvas_h),
        "viewBox": f"0 0 {_fmt(canvas_w)} {_fmt(canvas_h)}",
    })
    title = ET.SubElement(root, "title")
    title.text = "Collision lines and resonance points"
    defs = ET.SubElement(root, "defs")
    clip = ET.SubElement(defs, "clipPath", {"id": "frame"})
    ET.SubElement(clip, "rect", {
        "x": _fmt(margin), "y": _fmt(margin),
        "width": _fmt(plot_w), "height": _fmt(plot_h),
    })
    ET.SubElement(root, "rect", {
        "x": "0", "y": "0", "width": _fmt(canvas_w), "height": _fmt(canvas_h),
        "fill": "#ffffff",
    })
    body = ET.SubElement(root, "g", {"clip-path": "url(#frame)"})

    # axes first, loci above them
    if window.ymin < 0 < window.ymax:
        x0, y0 = to_px(complex(window.xmin, 0))
        x1, y1 = to_px(complex(window.xmax, 0))
        ET.SubElement(body, "line", {
            "x1": _fmt(x0), "y1": _fmt(y0), "x2": _fmt(x1), "y2": _fmt(y1),
            "stroke": "#bbbbbb", "stroke-width": "1",
        })
    if window.xmin < 0 < window.xmax:
        x0, y0 = to_px(complex(0, window.ymin))
        x1, y1 = to_px(complex(0, window.ymax))
        ET.SubElement(body, "line", {
            "x1": _fmt(x0), "y1": _fmt(y0), "x2": _fmt(x1), "y2": _fmt(y1),
            "stroke": "#bbbbbb", "stroke-width": "1",
        })

    lines, points = collect_loci(data, window)
    puncture_index = {name: idx for idx, name in enumerate(data.punctures)}
    for name, k, base, direction in lines:
        clipped = _clip_line(base.real, base.imag, direction.real,
                             direction.imag, window)
        if clipped is None:
            continue
        start = base + clipped[0] * direction
        end = base + clipped[1] * direction
        (x0, y0), (x1, y1) = to_px(start), to_px(end)
        attrs = {
            "x1": _fmt(x0), "y1": _fmt(y0), "x2": _fmt(x1), "y2": _fmt(y1),
            "stroke": PALETTE[k % len(PALETTE)], "stroke-width": "1.5",
        }
        dash = _DASHES[puncture_index[name] % len(_DASHES)]
        if dash:
            attrs["stroke-dasharray"] = dash
        ET.SubElement(body, "line", attrs)

    for name, k, z in points:
        x, y = to_px(z)
        ET.SubElement(body, "circle", {
            "cx": _fmt(x), "cy": _fmt(y), "r": "4",
            "fill": PALETTE[k % len(PALETTE)],
            "stroke": "#333333", "stroke-width": "1",
        })

    for disk in disks or ():
        region = zero_chart_region(disk)
        x, y = to_px(region.center)
        attrs = {
            "cx": _fmt(x), "cy": _fmt(y), "r": _fmt(region.radius * scale),
            "fill": "none", "stroke": "#555555", "stroke-width": "1",
        }
        if not region.inside:
            attrs["stroke-dasharray"] = "4,4"
        ET.SubElement(body, "circle", attrs)

    ET.SubElement(root, "rect", {
        "x": _fmt(margin), "y": _fmt(margin),
        "width": _fmt(plot_w), "height": _fmt(plot_h),
        "fill": "none", "stroke": "#333333", "stroke-width": "1",
    })
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            + ET.tostring(root, encoding="unicode") + "\n")
