"""Minimal native SVG line plots.

Good enough for the figures this library produces: one axes box, linear or
log10 scales, a handful of polyline series with markers, ticks, and a
legend.  Output is deterministic: fixed palette, fixed float formatting,
no timestamps.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .errors import ParameterError

__all__ = ["line_plot"]

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_MARGIN = (64.0, 20.0, 34.0, 48.0)  # left, right, top, bottom


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    """Round tick positions covering [lo, hi] with a 1/2/5 step."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(target, 2)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if (hi - lo) / step <= target + 1:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _log_ticks(lo: float, hi: float) -> list[float]:
    """Decade ticks inside [lo, hi] (values, not exponents)."""
    e0 = math.ceil(math.log10(lo) - 1e-12)
    e1 = math.floor(math.log10(hi) + 1e-12)
    if e1 < e0:
        return [lo, hi]
    stride = max(1, (e1 - e0) // 8 + (1 if (e1 - e0) > 8 else 0))
    return [10.0**e for e in range(e0, e1 + 1, stride)]


def _fmt_tick(v: float) -> str:
    if v != 0 and (abs(v) >= 1e5 or abs(v) < 1e-4):
        return f"{v:.0e}"
    return f"{v:g}"


def _clean_series(series, logx: bool, logy: bool):
    """Drop non-finite points and, on log axes, non-positive ones."""
    cleaned = []
    for label, xs, ys in series:
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ParameterError(f"series {label!r}: x and y must be equal-length 1-d")
        keep = np.isfinite(x) & np.isfinite(y)
        if logx:
            keep &= x > 0
        if logy:
            keep &= y > 0
        cleaned.append((str(label), x[keep], y[keep]))
    return cleaned


def line_plot(
    path,
    series,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
    logy: bool = False,
    width: int = 720,
    height: int = 480,
) -> None:
    """Write an SVG line plot of (label, x, y) series to path.

    Non-finite points, and non-positive ones on log axes, are silently
    dropped; a plot with no remaining points still gets its frame and
    title so downstream tooling always finds a valid file.
    """
    cleaned = _clean_series(series, logx, logy)
    drawable = [s for s in cleaned if len(s[1]) > 0]
    ml, mr, mt, mb = _MARGIN
    pw, ph = width - ml - mr, height - mt - mb

    if drawable:
        x_all = np.concatenate([s[1] for s in drawable])
        y_all = np.concatenate([s[2] for s in drawable])
        x0, x1 = float(x_all.min()), float(x_all.max())
        y0, y1 = float(y_all.min()), float(y_all.max())
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0

    def expand(a: float, b: float, log: bool) -> tuple[float, float]:
        if log:
            la, lb = math.log10(a), math.log10(b)
            if lb - la < 1e-12:
                la, lb = la - 0.5, lb + 0.5
            pad = 0.05 * (lb - la)
            return 10 ** (la - pad), 10 ** (lb + pad)
        if b - a < 1e-300 or (b - a) < 1e-12 * max(abs(a), abs(b), 1.0):
            span = max(abs(a), 1.0)
            return a - 0.5 * span, b + 0.5 * span
        pad = 0.05 * (b - a)
        return a - pad, b + pad

    x0, x1 = expand(x0, x1, logx)
    y0, y1 = expand(y0, y1, logy)

    def tx(v):
        u = (math.log10(v) - math.log10(x0)) / (math.log10(x1) - math.log10(x0)) if logx \
            else (v - x0) / (x1 - x0)
        return ml + u * pw

    def ty(v):
        u = (math.log10(v) - math.log10(y0)) / (math.log10(y1) - math.log10(y0)) if logy \
            else (v - y0) / (y1 - y0)
        return mt + (1.0 - u) * ph

    xticks = _log_ticks(x0, x1) if logx else _nice_ticks(x0, x1)
    yticks = _log_ticks(y0, y1) if logy else _nice_ticks(y0, y1)

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    font = 'font-family="Helvetica,Arial,sans-serif"'

    for t in xticks:
        px = tx(t)
        out.append(
            f'<line x1="{px:.2f}" y1="{mt:.2f}" x2="{px:.2f}" y2="{mt + ph:.2f}" '
            'stroke="#e0e0e0" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{mt + ph + 16:.2f}" {font} font-size="11" '
            f'text-anchor="middle">{escape(_fmt_tick(t))}</text>'
        )
    for t in yticks:
        py = ty(t)
        out.append(
            f'<line x1="{ml:.2f}" y1="{py:.2f}" x2="{ml + pw:.2f}" y2="{py:.2f}" '
            'stroke="#e0e0e0" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{ml - 6:.2f}" y="{py + 4:.2f}" {font} font-size="11" '
            f'text-anchor="end">{escape(_fmt_tick(t))}</text>'
        )

    out.append(
        f'<rect x="{ml:.2f}" y="{mt:.2f}" width="{pw:.2f}" height="{ph:.2f}" '
        'fill="none" stroke="#444" stroke-width="1"/>'
    )
    if title:
        out.append(
            f'<text x="{width / 2:.2f}" y="{mt - 12:.2f}" {font} font-size="14" '
            f'text-anchor="middle">{escape(title)}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{ml + pw / 2:.2f}" y="{height - 12:.2f}" {font} font-size="12" '
            f'text-anchor="middle">{escape(xlabel)}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="16" y="{mt + ph / 2:.2f}" {font} font-size="12" '
            f'text-anchor="middle" transform="rotate(-90 16 {mt + ph / 2:.2f})">'
            f"{escape(ylabel)}</text>"
        )

    for i, (label, xs, ys) in enumerate(drawable):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{tx(a):.2f},{ty(b):.2f}" for a, b in zip(xs, ys))
        if len(xs) > 1:
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" '
                'stroke-width="1.5"/>'
            )
        if len(xs) <= 200:
            for a, b in zip(xs, ys):
                out.append(
                    f'<circle cx="{tx(a):.2f}" cy="{ty(b):.2f}" r="2.4" fill="{color}"/>'
                )

    ly = mt + 14
    for i, (label, _, _) in enumerate(drawable):
        color = PALETTE[i % len(PALETTE)]
        x_leg = ml + pw - 170
        out.append(
            f'<line x1="{x_leg:.2f}" y1="{ly:.2f}" x2="{x_leg + 22:.2f}" y2="{ly:.2f}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{x_leg + 28:.2f}" y="{ly + 4:.2f}" {font} font-size="11">'
            f"{escape(label)}</text>"
        )
        ly += 16

    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
