"""Self-contained SVG charts with embedded data polylines.

No external renderer: the CLI only needs static figures of data it has already
written to CSV, so a small hand-rolled emitter keeps the dependency footprint
at zero. Output is deterministic (fixed float formatting, no timestamps).
"""

from __future__ import annotations

import math

WIDTH = 720
HEIGHT = 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 36, 46
N_TICKS = 5


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _axis_range(lo: float, hi: float) -> tuple[float, float]:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return -1.0, 1.0
    if lo == hi:
        pad = 1.0 if lo == 0 else abs(lo) * 0.1
        return lo - pad, hi + pad
    return lo, hi


class _Frame:
    """Maps data coordinates into the plot rectangle."""

    def __init__(self, xlo, xhi, ylo, yhi):
        self.xlo, self.xhi = _axis_range(xlo, xhi)
        self.ylo, self.yhi = _axis_range(ylo, yhi)
        self.px0, self.px1 = MARGIN_L, WIDTH - MARGIN_R
        self.py0, self.py1 = HEIGHT - MARGIN_B, MARGIN_T

    def x(self, v):
        f = (v - self.xlo) / (self.xhi - self.xlo)
        return self.px0 + f * (self.px1 - self.px0)

    def y(self, v):
        f = (v - self.ylo) / (self.yhi - self.ylo)
        return self.py0 + f * (self.py1 - self.py0)


def _chrome(frame: _Frame, title: str, xlabel: str, ylabel: str) -> list[str]:
    parts = [
        f'<rect x="{frame.px0}" y="{frame.py1}" width="{frame.px1 - frame.px0}" '
        f'height="{frame.py0 - frame.py1}" fill="none" stroke="#444" stroke-width="1"/>'
    ]
    for k in range(N_TICKS):
        fx = frame.xlo + (frame.xhi - frame.xlo) * k / (N_TICKS - 1)
        px = frame.x(fx)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{frame.py0}" x2="{_fmt(px)}" '
            f'y2="{frame.py0 + 5}" stroke="#444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{frame.py0 + 18}" font-size="11" '
            f'text-anchor="middle" font-family="monospace">{_fmt(fx)}</text>'
        )
        fy = frame.ylo + (frame.yhi - frame.ylo) * k / (N_TICKS - 1)
        py = frame.y(fy)
        parts.append(
            f'<line x1="{frame.px0 - 5}" y1="{_fmt(py)}" x2="{frame.px0}" '
            f'y2="{_fmt(py)}" stroke="#444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{frame.px0 - 8}" y="{_fmt(py + 4)}" font-size="11" '
            f'text-anchor="end" font-family="monospace">{_fmt(fy)}</text>'
        )
    if title:
        parts.append(
            f'<text x="{WIDTH // 2}" y="{MARGIN_T - 12}" font-size="14" '
            f'text-anchor="middle" font-family="sans-serif">{title}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{xlabel}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="14" y="{HEIGHT // 2}" font-size="12" text-anchor="middle" '
            f'font-family="sans-serif" transform="rotate(-90 14 {HEIGHT // 2})">'
            f"{ylabel}</text>"
        )
    return parts


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>'
    )
    return head + "\n" + "\n".join(body) + "\n</svg>\n"


def line_chart(xs, ys, title="", xlabel="", ylabel="", color="#1f6fb2") -> str:
    """Polyline chart of (xs, ys)."""
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    if not xs:
        frame = _Frame(0.0, 1.0, 0.0, 1.0)
        return _document(_chrome(frame, title, xlabel, ylabel))
    frame = _Frame(min(xs), max(xs), min(ys), max(ys))
    body = _chrome(frame, title, xlabel, ylabel)
    points = " ".join(f"{_fmt(frame.x(x))},{_fmt(frame.y(y))}" for x, y in zip(xs, ys))
    body.append(
        f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.2"/>'
    )
    return _document(body)


def bar_chart(edges, counts, title="", xlabel="", ylabel="count") -> str:
    """Histogram bars over [edges[i], edges[i+1]) bins."""
    edges = [float(v) for v in edges]
    counts = [float(v) for v in counts]
    if len(edges) < 2:
        frame = _Frame(0.0, 1.0, 0.0, 1.0)
        return _document(_chrome(frame, title, xlabel, ylabel))
    frame = _Frame(edges[0], edges[-1], 0.0, max(counts) if counts else 1.0)
    body = _chrome(frame, title, xlabel, ylabel)
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        x = frame.x(lo)
        w = frame.x(hi) - x
        y = frame.y(c)
        h = frame.y(0.0) - y
        body.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
            f'height="{_fmt(h)}" fill="#6aa5cc" stroke="#2f5e82" stroke-width="0.8"/>'
        )
    return _document(body)
