"""Static SVG regret charts: mean curves, percentile bands, reference line.

The renderer builds the SVG text directly with fixed-precision coordinates, so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PALETTE = (
    "#d62728",
    "#ff7f0e",
    "#2ca02c",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
)
LB_COLOR = "#1f77b4"

_MARGIN_LEFT = 64.0
_MARGIN_RIGHT = 16.0
_MARGIN_TOP = 34.0
_MARGIN_BOTTOM = 46.0


@dataclass(frozen=True)
class ChartSeries:
    label: str
    t: np.ndarray
    mean: np.ndarray
    p10: np.ndarray
    p90: np.ndarray


def _fmt(x: float) -> str:
    return format(x, ".2f")


def _tick_values(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw_step = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw_step))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw_step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * step:
        ticks.append(value)
        value += step
    return ticks


def _tick_label(value: float) -> str:
    return format(value, ".6g")


def render_regret_chart(
    series: list[ChartSeries],
    lb_curve: tuple[np.ndarray, np.ndarray] | None = None,
    log_time: bool = False,
    title: str = "",
    width: int = 720,
    height: int = 480,
) -> str:
    """Render mean curves with 10-90 percentile bands; optionally a reference line."""
    if not series:
        raise ValueError("nothing to plot: no series provided")

    x_all = np.concatenate([s.t for s in series])
    y_all = np.concatenate([np.concatenate([s.p90, s.mean]) for s in series])
    if lb_curve is not None:
        x_all = np.concatenate([x_all, lb_curve[0]])
        y_all = np.concatenate([y_all, lb_curve[1]])
    if log_time and x_all.min() <= 0:
        raise ValueError("log-time axis requires positive times")

    def xT(t):
        return np.log10(t) if log_time else np.asarray(t, dtype=float)

    x_lo, x_hi = float(xT(x_all).min()), float(xT(x_all).max())
    y_lo, y_hi = 0.0, float(max(y_all.max(), 1e-12))
    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(values) -> np.ndarray:
        span = x_hi - x_lo or 1.0
        return _MARGIN_LEFT + (xT(values) - x_lo) / span * plot_w

    def py(values) -> np.ndarray:
        span = y_hi - y_lo or 1.0
        return _MARGIN_TOP + (y_hi - np.asarray(values, dtype=float)) / span * plot_h

    def points(xs, ys) -> str:
        return " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px(xs), py(ys)))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{_fmt(width / 2)}" y="20" text-anchor="middle" '
            f'font-size="14">{title}</text>'
        )

    # axes
    x0, y0 = _MARGIN_LEFT, _MARGIN_TOP + plot_h
    x1, y1 = _MARGIN_LEFT + plot_w, _MARGIN_TOP
    out.append(
        f'<path d="M {_fmt(x0)} {_fmt(y1)} L {_fmt(x0)} {_fmt(y0)} L {_fmt(x1)} '
        f'{_fmt(y0)}" fill="none" stroke="black"/>'
    )

    if log_time:
        lo_dec = math.ceil(x_lo - 1e-9)
        hi_dec = math.floor(x_hi + 1e-9)
        x_ticks = [(10.0 ** d, f"1e{d}") for d in range(lo_dec, hi_dec + 1)]
    else:
        x_ticks = [(v, _tick_label(v)) for v in _tick_values(x_lo, x_hi)]
    for value, label in x_ticks:
        x = float(px(np.asarray([value]))[0])
        out.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(y0)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(y0 + 5)}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y0 + 18)}" text-anchor="middle">{label}</text>'
        )
    for value in _tick_values(y_lo, y_hi):
        y = float(py(np.asarray([value]))[0])
        out.append(
            f'<line x1="{_fmt(x0 - 5)}" y1="{_fmt(y)}" x2="{_fmt(x0)}" '
            f'y2="{_fmt(y)}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(x0 - 8)}" y="{_fmt(y + 4)}" '
            f'text-anchor="end">{_tick_label(value)}</text>'
        )
    axis_label = "t (log scale)" if log_time else "t"
    out.append(
        f'<text x="{_fmt(x0 + plot_w / 2)}" y="{_fmt(height - 8)}" '
        f'text-anchor="middle">{axis_label}</text>'
    )
    out.append(
        f'<text x="14" y="{_fmt(y1 + plot_h / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 14 {_fmt(y1 + plot_h / 2)})">cumulative regret</text>'
    )

    # percentile bands first, then mean curves on top
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        band = points(s.t, s.p90) + " " + points(s.t[::-1], s.p10[::-1])
        out.append(
            f'<polygon class="band" points="{band}" fill="{color}" '
            f'fill-opacity="0.18" stroke="none"/>'
        )
    if lb_curve is not None:
        out.append(
            f'<polyline class="lb" points="{points(lb_curve[0], lb_curve[1])}" '
            f'fill="none" stroke="{LB_COLOR}" stroke-width="1.5" '
            f'stroke-dasharray="6 4"/>'
        )
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        out.append(
            f'<polyline class="mean" points="{points(s.t, s.mean)}" fill="none" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )

    # legend
    legend_y = _MARGIN_TOP + 6.0
    entries = [(s.label, PALETTE[i % len(PALETTE)], None) for i, s in enumerate(series)]
    if lb_curve is not None:
        entries.append(("lower bound", LB_COLOR, "6 4"))
    for label, color, dash in entries:
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<line x1="{_fmt(x0 + 10)}" y1="{_fmt(legend_y)}" x2="{_fmt(x0 + 34)}" '
            f'y2="{_fmt(legend_y)}" stroke="{color}" stroke-width="2"{dash_attr}/>'
        )
        out.append(
            f'<text x="{_fmt(x0 + 40)}" y="{_fmt(legend_y + 4)}">{label}</text>'
        )
        legend_y += 16.0

    out.append("</svg>")
    return "\n".join(out) + "\n"
