"""Minimal SVG line plots (no plotting dependency)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


@dataclass
class Series:
    label: str
    xs: list[float]
    ys: list[float]


@dataclass
class Marker:
    x: float
    y: float
    label: str = ""
    shape: str = "dot"  # dot | cross


@dataclass
class Plot:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series] = field(default_factory=list)
    markers: list[Marker] = field(default_factory=list)
    header: str = ""
    width: int = 720
    height: int = 440
    zero_line: bool = False


def _ticks(lo: float, hi: float, k: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / k
    mag = 10 ** math.floor(math.log10(raw))
    step = min((c * mag for c in (1, 2, 5, 10) if c * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out, t = [], start
    while t <= hi + 1e-12 * step:
        out.append(round(t, 12))
        t += step
    return out


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render(p: Plot) -> str:
    pts = [(x, y) for s in p.series for x, y in zip(s.xs, s.ys) if math.isfinite(x) and math.isfinite(y)]
    pts += [(m.x, m.y) for m in p.markers if math.isfinite(m.x) and math.isfinite(m.y)]
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    x0, x1 = min(x for x, _ in pts), max(x for x, _ in pts)
    y0, y1 = min(y for _, y in pts), max(y for _, y in pts)
    if p.zero_line:
        y0, y1 = min(y0, 0.0), max(y1, 0.0)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    L, R, T, B = 70, 170, 40, 50
    W, H = p.width - L - R, p.height - T - B

    def sx(x):
        return L + (x - x0) / (x1 - x0) * W

    def sy(y):
        return T + (y1 - y) / (y1 - y0) * H

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if p.header:
        out.append("<!--\n" + escape(p.header.replace("--", "- -")) + "\n-->")
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{p.width}" height="{p.height}" '
        f'viewBox="0 0 {p.width} {p.height}" font-family="sans-serif" font-size="11">'
    )
    out.append(f'<rect x="0" y="0" width="{p.width}" height="{p.height}" fill="white"/>')
    out.append(f'<text x="{p.width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(p.title)}</text>')
    out.append(f'<rect x="{L}" y="{T}" width="{W}" height="{H}" fill="none" stroke="black"/>')
    for t in _ticks(x0, x1):
        X = sx(t)
        out.append(f'<line x1="{X:.2f}" y1="{T + H}" x2="{X:.2f}" y2="{T + H + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{T + H + 18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in _ticks(y0, y1):
        Y = sy(t)
        out.append(f'<line x1="{L - 5}" y1="{Y:.2f}" x2="{L}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{L - 8}" y="{Y + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    if p.zero_line and y0 < 0 < y1:
        out.append(f'<line x1="{L}" y1="{sy(0):.2f}" x2="{L + W}" y2="{sy(0):.2f}" stroke="#888" stroke-dasharray="4,3"/>')
    out.append(f'<text x="{L + W / 2:.1f}" y="{p.height - 10}" text-anchor="middle">{escape(p.xlabel)}</text>')
    out.append(
        f'<text x="16" y="{T + H / 2:.1f}" text-anchor="middle" transform="rotate(-90 16 {T + H / 2:.1f})">'
        f"{escape(p.ylabel)}</text>"
    )
    for i, s in enumerate(p.series):
        color = PALETTE[i % len(PALETTE)]
        # break the path at non-finite values
        d, pen = [], "M"
        for x, y in zip(s.xs, s.ys):
            if math.isfinite(x) and math.isfinite(y):
                d.append(f"{pen}{sx(x):.2f},{sy(y):.2f}")
                pen = "L"
            else:
                pen = "M"
        if d:
            out.append(f'<path d="{" ".join(d)}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = T + 14 * i + 8
        out.append(f'<line x1="{L + W + 10}" y1="{ly}" x2="{L + W + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{L + W + 35}" y="{ly + 4}">{escape(s.label)}</text>')
    for m in p.markers:
        if not (math.isfinite(m.x) and math.isfinite(m.y)):
            continue
        X, Y = sx(m.x), sy(m.y)
        if m.shape == "cross":
            out.append(
                f'<path d="M{X - 4:.2f},{Y - 4:.2f} L{X + 4:.2f},{Y + 4:.2f} M{X - 4:.2f},{Y + 4:.2f} '
                f'L{X + 4:.2f},{Y - 4:.2f}" stroke="black" stroke-width="1.5"/>'
            )
        else:
            out.append(f'<circle cx="{X:.2f}" cy="{Y:.2f}" r="3.5" fill="black"/>')
        if m.label:
            out.append(f'<text x="{X + 6:.2f}" y="{Y - 6:.2f}">{escape(m.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
