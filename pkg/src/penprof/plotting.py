"""Grouped-bar SVG rendering of a delta histogram.

One group per bucket, one bar per m-level, bar height = percentage of all
known combinations whose in-bucket rank clears that m. The file is built
from format strings only, so identical histograms always produce identical
bytes.
"""

from __future__ import annotations

from .profiler import DeltaHistogram

_PALETTE = ("#4878a8", "#e49444", "#d1615d", "#85b6b2", "#6a9f58", "#967662")

_MARGIN_L = 70
_MARGIN_R = 30
_MARGIN_T = 40
_MARGIN_B = 95
_PLOT_H = 260
_GROUP_W = 130
_LEGEND_H = 30


def _bar_color(i: int) -> str:
    return _PALETTE[i % len(_PALETTE)]


def emit_plot(hist: DeltaHistogram, path) -> None:
    levels = sorted(set(hist.m_levels))
    nb = len(hist.buckets)
    plot_w = max(nb * _GROUP_W, 2 * _GROUP_W)
    width = _MARGIN_L + plot_w + _MARGIN_R
    height = _MARGIN_T + _PLOT_H + _MARGIN_B + _LEGEND_H
    x0 = _MARGIN_L
    y0 = _MARGIN_T + _PLOT_H

    parts = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">'
    )
    parts.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')
    parts.append(
        f'<text x="{x0 + plot_w / 2:.1f}" y="20" text-anchor="middle" font-size="14">'
        f"known combinations in top m% per {hist.measure.value}-diff bucket (k={hist.k})</text>"
    )
    for tick in range(0, 101, 20):
        y = y0 - _PLOT_H * tick / 100.0
        parts.append(
            f'<line x1="{x0}" y1="{y:.1f}" x2="{x0 + plot_w}" y2="{y:.1f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{tick}</text>'
        )
    parts.append(
        f'<text x="18" y="{_MARGIN_T + _PLOT_H / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {_MARGIN_T + _PLOT_H / 2:.1f})">% of known combinations</text>'
    )

    group_w = plot_w / nb
    bar_w = group_w * 0.8 / max(len(levels), 1)
    for i, bucket in enumerate(hist.buckets):
        gx = x0 + i * group_w
        for j, m in enumerate(levels):
            pct = hist.percentage(i, m)
            bh = _PLOT_H * pct / 100.0
            bx = gx + group_w * 0.1 + j * bar_w
            parts.append(
                f'<rect x="{bx:.2f}" y="{y0 - bh:.2f}" width="{bar_w:.2f}" height="{bh:.2f}" '
                f'fill="{_bar_color(j)}"><title>bucket {i}, top {m}%: {pct:.4f}%</title></rect>'
            )
        open_b = "[" if i == 0 else "("
        label = f"{open_b}{bucket.r_min:.4f}, {bucket.r_max:.4f}]"
        cx = gx + group_w / 2
        parts.append(
            f'<text x="{cx:.1f}" y="{y0 + 14}" text-anchor="end" font-size="10" '
            f'transform="rotate(-35 {cx:.1f} {y0 + 14})">{label}</text>'
        )
        parts.append(
            f'<text x="{cx:.1f}" y="{y0 + 58}" text-anchor="middle" font-size="9" '
            f'fill="#666666">{bucket.combo_count} combos</text>'
        )
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{x0 + plot_w / 2:.1f}" y="{y0 + 80}" text-anchor="middle" font-size="12">'
        f"{hist.measure.value}-diff value range per bucket</text>"
    )

    ly = height - _LEGEND_H + 8
    lx = x0
    for j, m in enumerate(levels):
        parts.append(f'<rect x="{lx}" y="{ly}" width="12" height="12" fill="{_bar_color(j)}"/>')
        parts.append(f'<text x="{lx + 16}" y="{ly + 10}" font-size="11">top {m}%</text>')
        lx += 90
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
