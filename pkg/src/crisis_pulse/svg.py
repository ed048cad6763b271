"""Deterministic standalone SVG bar charts (no plotting library)."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 960, 540
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 50, 120
PLOT_W = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
PLOT_H = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
PALETTE = ("#c0392b", "#7f8c8d", "#27ae60", "#2c6fbb", "#8e44ad")
TICKS = 5


def _num(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _tick_label(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.2f}"


def svg_bar_chart(series, title: str) -> str:
    """Build the SVG text.

    ``series`` is either ``[(label, value), ...]`` or a mapping of series
    name to such lists sharing the same labels (drawn as grouped bars).
    """
    if isinstance(series, Mapping):
        groups = {str(k): list(v) for k, v in series.items()}
    else:
        groups = {"": list(series)}
    if not groups or not any(groups.values()):
        raise ValueError("cannot chart an empty series")
    labels = [label for label, _ in next(iter(groups.values()))]
    for name, values in groups.items():
        if [label for label, _ in values] != labels:
            raise ValueError(f"series {name!r} does not share the category labels")
        if any(v < 0 for _, v in values):
            raise ValueError("bar values must be nonnegative")
    peak = max(v for values in groups.values() for _, v in values)
    base_y = MARGIN_TOP + PLOT_H
    slot = PLOT_W / len(labels)
    bar_w = slot * 0.8 / len(groups)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        f"<title>{escape(title)}</title>",
        f'<text x="{WIDTH // 2}" y="30" font-size="18" text-anchor="middle">{escape(title)}</text>',
        '<g class="axes" stroke="#333333" stroke-width="1">',
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{base_y}"/>',
        f'<line x1="{MARGIN_LEFT}" y1="{base_y}" x2="{MARGIN_LEFT + PLOT_W}" y2="{base_y}"/>',
        "</g>",
        '<g class="ticks" font-size="11" text-anchor="end">',
    ]
    for i in range(TICKS + 1):
        value = peak * i / TICKS
        y = base_y - PLOT_H * i / TICKS
        out.append(f'<text x="{MARGIN_LEFT - 6}" y="{_num(y + 4)}">{_tick_label(value)}</text>')
        if peak == 0:
            break
    out.append("</g>")
    for gi, (name, values) in enumerate(groups.items()):
        color = PALETTE[gi % len(PALETTE)]
        out.append(f'<g class="series" fill="{color}">')
        for i, (label, value) in enumerate(values):
            h = PLOT_H * value / peak if peak > 0 else 0.0
            x = MARGIN_LEFT + slot * i + slot * 0.1 + bar_w * gi
            tip = f"{name} {label}: {value}" if name else f"{label}: {value}"
            out.append(f'<rect class="bar" x="{_num(x)}" y="{_num(base_y - h)}" width="{_num(bar_w)}" '
                       f'height="{_num(h)}"><title>{escape(tip)}</title></rect>')
        out.append("</g>")
    out.append('<g class="labels" font-size="10" text-anchor="end">')
    for i, label in enumerate(labels):
        x = MARGIN_LEFT + slot * (i + 0.5)
        y = base_y + 14
        out.append(f'<text x="{_num(x)}" y="{y}" transform="rotate(-45 {_num(x)} {y})">{escape(str(label))}</text>')
    out.append("</g>")
    if len(groups) > 1:
        out.append('<g class="legend" font-size="12">')
        for gi, name in enumerate(groups):
            x = MARGIN_LEFT + 10 + gi * 120
            out.append(f'<rect x="{x}" y="{MARGIN_TOP - 12}" width="10" height="10" fill="{PALETTE[gi % len(PALETTE)]}"/>')
            out.append(f"<text x=\"{x + 14}\" y=\"{MARGIN_TOP - 3}\">{escape(name)}</text>")
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg_bar(series, title: str, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg_bar_chart(series, title), encoding="utf-8")
    return path
