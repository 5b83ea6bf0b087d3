"""Minimal deterministic SVG plots: line charts and heat maps.

Output depends only on the input numbers (fixed decimal formatting, no
timestamps or random ids), so identical data gives identical files.
"""

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 720, 450
MARGIN = dict(left=80, right=190, top=40, bottom=60)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
# viridis anchors for the heat map
_CMAP = ((68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37))


def _fmt(v):
    return f"{v:.2f}"


def _tick_label(v):
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-2:
        return f"{v:.0e}".replace("e+0", "e").replace("e-0", "e-").replace("e+", "e")
    return f"{v:.6g}"


def _nice_ticks(lo, hi, target=6):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t / step) * step)
        t += step
    return ticks


class _Axis:
    def __init__(self, lo, hi, log, pixel_lo, pixel_hi):
        if log:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi == lo:
            lo, hi = lo - 1.0, hi + 1.0
        self.lo, self.hi, self.log = lo, hi, log
        self.p0, self.p1 = pixel_lo, pixel_hi

    def __call__(self, v):
        if self.log:
            v = math.log10(v)
        return self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)

    def ticks(self):
        if self.log:
            return [10.0**e for e in range(math.ceil(self.lo - 1e-9), math.floor(self.hi + 1e-9) + 1)]
        return _nice_ticks(self.lo, self.hi)


def _range(values, log):
    v = np.asarray([x for arr in values for x in np.asarray(arr, dtype=float)], dtype=float)
    v = v[np.isfinite(v)]
    if log:
        v = v[v > 0]
    if v.size == 0:
        return (1.0, 10.0) if log else (0.0, 1.0)
    lo, hi = float(v.min()), float(v.max())
    if not log:
        pad = 0.05 * (hi - lo) if hi > lo else 1.0
        lo, hi = lo - pad, hi + pad
    return lo, hi


def _frame(title, xlabel, ylabel, xaxis, yaxis):
    left, top = MARGIN["left"], MARGIN["top"]
    right, bottom = WIDTH - MARGIN["right"], HEIGHT - MARGIN["bottom"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{_fmt((left + right) / 2)}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for t in xaxis.ticks():
        x = xaxis(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{top}" x2="{_fmt(x)}" y2="{bottom}" stroke="#ddd"/>')
        out.append(f'<text x="{_fmt(x)}" y="{bottom + 16}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in yaxis.ticks():
        y = yaxis(t)
        out.append(f'<line x1="{left}" y1="{_fmt(y)}" x2="{right}" y2="{_fmt(y)}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{_fmt(y + 4)}" text-anchor="end">{_tick_label(t)}</text>')
    out.append(f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
               f'fill="none" stroke="black"/>')
    out.append(f'<text x="{_fmt((left + right) / 2)}" y="{HEIGHT - 18}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{_fmt((top + bottom) / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_fmt((top + bottom) / 2)})">{escape(ylabel)}</text>')
    return out


def line_plot(series, xlabel, ylabel, title="", xlog=True, ylog=False):
    """Render ``[(label, x, y), ...]`` as an SVG line chart.

    Non-finite points (and non-positive ones on a log axis) break the line.
    """
    left, top = MARGIN["left"], MARGIN["top"]
    right, bottom = WIDTH - MARGIN["right"], HEIGHT - MARGIN["bottom"]
    xaxis = _Axis(*_range([s[1] for s in series], xlog), xlog, left, right)
    yaxis = _Axis(*_range([s[2] for s in series], ylog), ylog, bottom, top)
    out = _frame(title, xlabel, ylabel, xaxis, yaxis)
    out.append(f'<clipPath id="plot-area"><rect x="{left}" y="{top}" width="{right - left}" '
               f'height="{bottom - top}"/></clipPath>')
    for i, (label, x, y) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        segments, current = [], []
        for xv, yv in zip(np.asarray(x, dtype=float), np.asarray(y, dtype=float)):
            ok = math.isfinite(xv) and math.isfinite(yv) and (not xlog or xv > 0) and (not ylog or yv > 0)
            if ok:
                current.append(f"{_fmt(xaxis(xv))},{_fmt(yaxis(yv))}")
            elif current:
                segments.append(current)
                current = []
        if current:
            segments.append(current)
        for seg in segments:
            if len(seg) == 1:
                cx, cy = seg[0].split(",")
                out.append(f'<circle cx="{cx}" cy="{cy}" r="2" fill="{color}" clip-path="url(#plot-area)"/>')
            else:
                out.append(f'<polyline points="{" ".join(seg)}" fill="none" stroke="{color}" '
                           f'stroke-width="1.5" clip-path="url(#plot-area)"/>')
        ly = top + 14 + 18 * i
        out.append(f'<line x1="{right + 12}" y1="{ly - 4}" x2="{right + 36}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{right + 42}" y="{ly}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _color(t):
    t = min(max(t, 0.0), 1.0) * (len(_CMAP) - 1)
    i = min(int(t), len(_CMAP) - 2)
    f = t - i
    r, g, b = (round(a + (c - a) * f) for a, c in zip(_CMAP[i], _CMAP[i + 1]))
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap(x, y, z, xlabel, ylabel, zlabel, title=""):
    """Heat map of ``z[i, j]`` at (``x[i]``, ``y[j]``) on linear axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    left, top = MARGIN["left"], MARGIN["top"]
    right, bottom = WIDTH - MARGIN["right"], HEIGHT - MARGIN["bottom"]

    def edges(c):
        if c.size == 1:
            return np.array([c[0] - 0.5, c[0] + 0.5])
        mid = 0.5 * (c[1:] + c[:-1])
        return np.concatenate([[2 * c[0] - mid[0]], mid, [2 * c[-1] - mid[-1]]])

    xe, ye = edges(x), edges(y)
    xaxis = _Axis(float(xe[0]), float(xe[-1]), False, left, right)
    yaxis = _Axis(float(ye[0]), float(ye[-1]), False, bottom, top)
    finite = z[np.isfinite(z)]
    zlo, zhi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    span = zhi - zlo if zhi > zlo else 1.0
    out = _frame(title, xlabel, ylabel, xaxis, yaxis)
    for i in range(x.size):
        for j in range(y.size):
            v = z[i, j]
            fill = _color((v - zlo) / span) if math.isfinite(v) else "#cccccc"
            x0, x1 = xaxis(xe[i]), xaxis(xe[i + 1])
            y0, y1 = yaxis(ye[j + 1]), yaxis(ye[j])
            out.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(x1 - x0)}" '
                       f'height="{_fmt(y1 - y0)}" fill="{fill}"/>')
    # colour bar
    bar_x, steps = right + 20, 50
    for k in range(steps):
        y0 = top + (bottom - top) * k / steps
        out.append(f'<rect x="{bar_x}" y="{_fmt(y0)}" width="20" height="{_fmt((bottom - top) / steps + 0.5)}" '
                   f'fill="{_color(1.0 - k / (steps - 1))}"/>')
    out.append(f'<text x="{bar_x + 26}" y="{top + 10}">{_tick_label(zhi)}</text>')
    out.append(f'<text x="{bar_x + 26}" y="{bottom}">{_tick_label(zlo)}</text>')
    out.append(f'<text x="{bar_x + 26}" y="{_fmt((top + bottom) / 2)}">{escape(zlabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
