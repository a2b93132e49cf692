"""Minimal SVG emission for families, chord sets, and ball polylines.

Presentation only: fixed user-unit transforms, no parsing back.
"""

from __future__ import annotations

import math
from typing import Iterable

from .disks import IntervalFamily


def _header(width: float, height: float) -> str:
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">\n'
    )


def _polyline(points: Iterable[tuple[float, float]], color: str, width: float = 1.0,
              closed: bool = False) -> str:
    pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in points)
    tag = "polygon" if closed else "polyline"
    return f'<{tag} points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"/>\n'


def _circle(cx: float, cy: float, r: float, color: str, width: float = 1.0) -> str:
    return (
        f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.3f}" fill="none" '
        f'stroke="{color}" stroke-width="{width}"/>\n'
    )


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def family_svg(family: IntervalFamily, scale: float = 40.0) -> str:
    """Tents on the flattened cylinder above, chords in a disk below."""
    c2 = family.circumference2
    w = c2 / 2 * scale
    tent_h = (c2 / 4) * scale + scale
    disk_r = min(w / 2 - 10, 5 * scale)
    height = tent_h + 2 * disk_r + 3 * scale
    out = [_header(w + 2 * scale, height)]

    def tx(pos2: float) -> float:
        return scale + pos2 / 2 * scale

    def ty(h2: float) -> float:
        return tent_h - h2 / 2 * scale

    out.append(_polyline([(tx(0), ty(0)), (tx(c2), ty(0))], "#000", 1.5))
    for i, (a2, b2) in enumerate(family.intervals):
        w2 = family.width2(i)
        color = _PALETTE[i % len(_PALETTE)]
        apex = a2 + w2 / 2
        pts = [(tx(a2), ty(0)), (tx(apex), ty(w2 / 2)), (tx(a2 + w2), ty(0))]
        out.append(_polyline(pts, color, 1.2))
        if a2 + w2 > c2:  # wrapped copy
            pts = [(tx(a2 - c2), ty(0)), (tx(apex - c2), ty(w2 / 2)), (tx(a2 + w2 - c2), ty(0))]
            out.append(_polyline(pts, color, 1.2))

    cx, cy = scale + w / 2, tent_h + scale + disk_r
    out.append(_circle(cx, cy, disk_r, "#000", 1.5))
    for i, (a2, b2) in enumerate(family.intervals):
        ta = 2 * math.pi * a2 / c2
        tb = 2 * math.pi * b2 / c2
        color = _PALETTE[i % len(_PALETTE)]
        out.append(
            _polyline(
                [
                    (cx + disk_r * math.cos(ta), cy - disk_r * math.sin(ta)),
                    (cx + disk_r * math.cos(tb), cy - disk_r * math.sin(tb)),
                ],
                color,
                1.2,
            )
        )
    out.append("</svg>\n")
    return "".join(out)


def polyline_svg(polylines: list, scale: float = 60.0, pad: float = 20.0) -> str:
    """Closed curves (e.g. metric ball boundaries) around the origin."""
    rmax = max(
        (max(math.hypot(x, y) for x, y in poly) for poly in polylines if len(poly)),
        default=1.0,
    )
    half = rmax * scale + pad
    out = [_header(2 * half, 2 * half)]
    out.append(_circle(half, half, 2.0, "#000"))
    for k, poly in enumerate(polylines):
        pts = [(half + x * scale, half - y * scale) for x, y in poly]
        out.append(_polyline(pts, _PALETTE[k % len(_PALETTE)], 1.5, closed=True))
    out.append("</svg>\n")
    return "".join(out)


def chords_svg(thetas, ps, scale: float = 200.0, pad: float = 10.0) -> str:
    """Chord set inside the unit disk."""
    half = scale + pad
    out = [_header(2 * half, 2 * half), _circle(half, half, scale, "#000", 1.5)]
    for theta, p in zip(thetas, ps):
        holder = math.sqrt(max(0.0, 1.0 - p * p))
        nx, ny = math.sin(theta), -math.cos(theta)
        dx, dy = math.cos(theta), math.sin(theta)
        x0, y0 = p * nx - holder * dx, p * ny - holder * dy
        x1, y1 = p * nx + holder * dx, p * ny + holder * dy
        out.append(
            _polyline(
                [(half + x0 * scale, half - y0 * scale), (half + x1 * scale, half - y1 * scale)],
                "#1f77b4",
                0.8,
            )
        )
    out.append("</svg>\n")
    return "".join(out)
