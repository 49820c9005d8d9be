"""Static SVG 1.1 line charts (polylines, axes, optional shaded date bands)."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np
import pandas as pd

PALETTE = ("#1f4e9c", "#c0392b", "#7d3c98", "#2e8b57", "#555555")


@dataclass
class Panel:
    title: str
    lines: list[tuple[str, np.ndarray]] = field(default_factory=list)
    clamp: float | None = None  # display-only symmetric y-limit


def _x_numeric(x) -> np.ndarray:
    if isinstance(x, pd.DatetimeIndex):
        return x.year + (x.dayofyear - 1) / 365.25
    return np.asarray(x, dtype=float)


def read_shading(path) -> list[tuple[pd.Timestamp, pd.Timestamp]]:
    """Two-column CSV (start, end) of date ranges to shade."""
    frame = pd.read_csv(path)
    starts = pd.to_datetime(frame.iloc[:, 0])
    ends = pd.to_datetime(frame.iloc[:, 1])
    return list(zip(starts, ends))


def render(
    x,
    panels: list[Panel],
    shading: list[tuple] | None = None,
    width: int = 900,
    panel_height: int = 260,
) -> str:
    xs = _x_numeric(x)
    x0, x1 = float(np.nanmin(xs)), float(np.nanmax(xs))
    if x1 == x0:
        x1 = x0 + 1.0
    left, right, top, gap = 60, 20, 30, 40
    plot_w = width - left - right
    height = top + len(panels) * (panel_height + gap)
    sx = lambda v: left + (v - x0) / (x1 - x0) * plot_w  # noqa: E731

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for i, panel in enumerate(panels):
        py = top + i * (panel_height + gap)
        vals = [np.asarray(v, dtype=float) for _, v in panel.lines]
        finite = np.concatenate([v[np.isfinite(v)] for v in vals]) if vals else np.array([0.0])
        if finite.size == 0:
            finite = np.array([0.0])
        lo, hi = float(finite.min()), float(finite.max())
        if panel.clamp is not None:
            lo, hi = max(lo, -panel.clamp), min(hi, panel.clamp)
        if hi == lo:
            lo, hi = lo - 1.0, hi + 1.0
        sy = lambda v, lo=lo, hi=hi, py=py: py + (hi - v) / (hi - lo) * panel_height  # noqa: E731

        out.append(f'<g id="panel{i}">')
        for a, b in shading or []:
            xa, xb = _x_numeric(pd.DatetimeIndex([a, b]))
            xa, xb = max(sx(xa), left), min(sx(xb), left + plot_w)
            if xb > xa:
                out.append(
                    f'<rect x="{xa:.2f}" y="{py}" width="{xb - xa:.2f}" height="{panel_height}" '
                    'fill="#d9d9d9" fill-opacity="0.6"/>'
                )
        out.append(
            f'<rect x="{left}" y="{py}" width="{plot_w}" height="{panel_height}" '
            'fill="none" stroke="black" stroke-width="1"/>'
        )
        out.append(f'<text x="{left}" y="{py - 8}" font-size="13" font-family="sans-serif">'
                   f'{escape(panel.title)}</text>')
        for tick in np.linspace(lo, hi, 5):
            out.append(f'<text x="{left - 6}" y="{sy(tick) + 4:.2f}" font-size="10" '
                       f'text-anchor="end" font-family="sans-serif">{tick:.3g}</text>')
        if lo < 0 < hi:
            out.append(f'<line x1="{left}" x2="{left + plot_w}" y1="{sy(0.0):.2f}" y2="{sy(0.0):.2f}" '
                       'stroke="#999999" stroke-dasharray="3,3"/>')
        for j, ((label, _), v) in enumerate(zip(panel.lines, vals)):
            color = PALETTE[j % len(PALETTE)]
            ok = np.isfinite(v)
            shown = np.clip(v, lo, hi)
            pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(xs[ok], shown[ok]))
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
            out.append(f'<text x="{left + plot_w - 4}" y="{py + 14 + 13 * j}" font-size="11" '
                       f'text-anchor="end" fill="{color}" font-family="sans-serif">{escape(label)}</text>')
        out.append("</g>")
    for tick in np.linspace(x0, x1, 6):
        ybase = top + len(panels) * (panel_height + gap) - gap + 14
        out.append(f'<text x="{sx(tick):.2f}" y="{ybase}" font-size="10" text-anchor="middle" '
                   f'font-family="sans-serif">{tick:.4g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
