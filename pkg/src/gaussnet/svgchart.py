"""Minimal SVG line charts (polylines + axis ticks), no plotting dependency.

CSV files are the canonical experiment output; these charts are a quick
visual check that mirrors the shapes of the paper's figures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

__all__ = ["Series", "line_chart", "write_line_chart"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 64, 20, 36, 52  # margins


@dataclass
class Series:
    label: str
    xs: Sequence[float]
    ys: Sequence[float]
    dashed: bool = False


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** __import__("math").floor(__import__("math").log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = step * __import__("math").ceil(lo / step)
    out = []
    v = first
    while v <= hi + 1e-12:
        out.append(round(v, 12))
        v += step
    return out


def line_chart(
    series: Sequence[Series],
    title: str,
    xlabel: str,
    ylabel: str,
    y_min: float | None = None,
    y_max: float | None = None,
) -> str:
    pts = [(x, y) for s in series for x, y in zip(s.xs, s.ys)]
    if not pts:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(p[0] for p in pts), max(p[0] for p in pts)
    y_lo = min(p[1] for p in pts) if y_min is None else y_min
    y_hi = max(p[1] for p in pts) if y_max is None else y_max
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(x: float) -> float:
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def py(y: float) -> float:
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W/2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    # axes
    parts.append(
        f'<line x1="{_ML}" y1="{_H-_MB}" x2="{_W-_MR}" y2="{_H-_MB}" stroke="black"/>'
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H-_MB}" stroke="black"/>'
    )
    for tx in _ticks(x_lo, x_hi):
        parts.append(
            f'<line x1="{px(tx):.1f}" y1="{_H-_MB}" x2="{px(tx):.1f}" y2="{_H-_MB+5}" stroke="black"/>'
            f'<text x="{px(tx):.1f}" y="{_H-_MB+18}" text-anchor="middle">{tx:g}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        parts.append(
            f'<line x1="{_ML-5}" y1="{py(ty):.1f}" x2="{_ML}" y2="{py(ty):.1f}" stroke="black"/>'
            f'<text x="{_ML-8}" y="{py(ty)+4:.1f}" text-anchor="end">{ty:g}</text>'
        )
    parts.append(
        f'<text x="{(_ML+_W-_MR)/2:.0f}" y="{_H-10}" text-anchor="middle">{xlabel}</text>'
        f'<text x="16" y="{(_MT+_H-_MB)/2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(_MT+_H-_MB)/2:.0f})">{ylabel}</text>'
    )
    for i, s in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in zip(s.xs, s.ys))
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>')
        ly = _MT + 16 * (i + 1)
        parts.append(
            f'<line x1="{_W-_MR-130}" y1="{ly}" x2="{_W-_MR-104}" y2="{ly}" stroke="{color}" stroke-width="1.8"{dash}/>'
            f'<text x="{_W-_MR-98}" y="{ly+4}">{s.label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def write_line_chart(path, series, title, xlabel, ylabel, **kw) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(line_chart(series, title, xlabel, ylabel, **kw))
