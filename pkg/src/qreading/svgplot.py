"""Tiny standalone SVG line plots (no plotting library needed)."""

from __future__ import annotations

import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=170, top=40, bottom=50)
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def _nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    step = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * step:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * step:
        ticks.append(round(value, 12))
        value += step
    return ticks


def line_plot(
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    title: str,
    xlabel: str,
    ylabel: str,
) -> str:
    """Render one SVG document; non-finite points are left out of their line."""
    finite = [v for ys in series.values() for v in ys if math.isfinite(v)]
    y_lo, y_hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    x_lo, x_hi = min(x), max(x)
    if x_hi == x_lo:
        x_hi = x_lo + 1
    plot_w = WIDTH - MARGIN["left"] - MARGIN["right"]
    plot_h = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(v):
        return MARGIN["left"] + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v):
        return MARGIN["top"] + (y_hi - v) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x_lo, x_hi):
        out.append(
            f'<line x1="{px(t):.2f}" y1="{MARGIN["top"] + plot_h}" x2="{px(t):.2f}" '
            f'y2="{MARGIN["top"] + plot_h + 5}" stroke="black"/>'
            f'<text x="{px(t):.2f}" y="{MARGIN["top"] + plot_h + 18}" '
            f'text-anchor="middle">{t:g}</text>'
        )
    for t in _nice_ticks(y_lo, y_hi):
        out.append(
            f'<line x1="{MARGIN["left"] - 5}" y1="{py(t):.2f}" x2="{MARGIN["left"]}" '
            f'y2="{py(t):.2f}" stroke="black"/>'
            f'<text x="{MARGIN["left"] - 8}" y="{py(t) + 4:.2f}" text-anchor="end">{t:g}</text>'
        )
    out.append(
        f'<text x="{MARGIN["left"] + plot_w / 2:.1f}" y="{HEIGHT - 12}" '
        f'text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text transform="translate(18 {MARGIN["top"] + plot_h / 2:.1f}) rotate(-90)" '
        f'text-anchor="middle">{escape(ylabel)}</text>'
    )
    for i, (name, ys) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        points = " ".join(
            f"{px(xv):.2f},{py(yv):.2f}" for xv, yv in zip(x, ys) if math.isfinite(yv)
        )
        if points:
            out.append(
                f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.8"/>'
            )
        ly = MARGIN["top"] + 16 + 18 * i
        lx = WIDTH - MARGIN["right"] + 12
        out.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" stroke="{color}" '
            f'stroke-width="2"/><text x="{lx + 28}" y="{ly + 4}">{escape(name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
