"""Dependency-free SVG bar, pie and line charts for hit counts and timings.

Output is deterministic: the same spec always renders to the same bytes.
Bars and wedges carry ``data-value`` (and wedges ``data-angle``) attributes
so the drawn geometry can be checked mechanically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Mapping, Sequence, Tuple, Union
from xml.sax.saxutils import escape, quoteattr

from .piglite.relation import data_files

DEFAULT_PALETTE: Tuple[str, ...] = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
)
KINDS = ("bar", "pie", "line")


class ChartError(ValueError):
    pass


class EmptyTag(ChartError):
    pass


class AllZero(ChartError):
    pass


class TooFewPoints(ChartError):
    pass


@dataclass
class Series:
    title: str
    points: List[Tuple[str, float]]

    def __post_init__(self):
        labels = [label for label, _ in self.points]
        if len(set(labels)) != len(labels):
            raise ChartError(f"duplicate labels in series {self.title!r}")
        if any(value < 0 or not math.isfinite(value) for _, value in self.points):
            raise ChartError(f"series {self.title!r} has negative or non-finite values")

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self.points]

    @property
    def values(self) -> List[float]:
        return [value for _, value in self.points]


@dataclass
class ChartSpec:
    kind: str
    series: List[Series]
    title: str = ""
    width: int = 640
    height: int = 400
    x_label: str = ""
    y_label: str = ""
    palette: Sequence[str] = field(default=DEFAULT_PALETTE)

    def __post_init__(self):
        if isinstance(self.series, Series):
            self.series = [self.series]
        if self.kind not in KINDS:
            raise ChartError(f"unknown chart kind {self.kind!r}")
        if self.width < 100 or self.height < 100:
            raise ChartError("width and height must be at least 100 px")
        if not self.palette:
            raise ChartError("palette must not be empty")
        if not self.series:
            raise ChartError("at least one series is required")
        if not self.title:
            self.title = self.series[0].title

    def color(self, i: int) -> str:
        return self.palette[i % len(self.palette)]


def read_rows(source: Union[str, Path, Mapping[str, int], Iterable[Tuple[str, int]]]):
    """(key, count) rows from a mapping, an iterable, a part file or a stored directory."""
    if isinstance(source, Mapping):
        return list(source.items())
    if isinstance(source, (str, Path)):
        rows = []
        for path in data_files(source):
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    key, _, value = line.rstrip("\n").partition("\t")
                    rows.append((key, int(value)))
        return rows
    return list(source)


def series_from_counts(source, tag: str, title: str = "") -> Series:
    """Rows whose key starts with ``<tag>-``, by descending count then label."""
    prefix = f"{tag}-"
    totals = {}
    for key, count in read_rows(source):
        if key.startswith(prefix):
            label = key[len(prefix):]
            totals[label] = totals.get(label, 0) + int(count)
    if not totals:
        raise EmptyTag(f"no rows for tag {tag!r}")
    points = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    return Series(title or f"{tag} hit counts", points)


def _num(x: float) -> str:
    text = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _doc(spec: ChartSpec, body: List[str]) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}" '
        'font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>',
        f'<text class="title" x="{_num(spec.width / 2)}" y="20" text-anchor="middle" '
        f'font-size="16">{escape(spec.title)}</text>',
    ]
    return "\n".join(head + body + ["</svg>", ""])


def _nice_max(value: float) -> float:
    if value <= 0:
        return 1.0
    exponent = math.floor(math.log10(value))
    for step in (1, 2, 2.5, 5, 10):
        candidate = step * 10 ** exponent
        if candidate >= value:
            return candidate
    return 10 ** (exponent + 1)


def render_bar(spec: ChartSpec) -> str:
    series = spec.series[0]
    if not series.points:
        raise ChartError("bar chart needs at least one point")
    left, right, top, bottom = 60, 20, 40, 60
    plot_w = spec.width - left - right
    plot_h = spec.height - top - bottom
    base_y = top + plot_h
    top_value = max(series.values)
    scale = plot_h / top_value if top_value > 0 else 0.0
    slot = plot_w / len(series.points)
    bar_w = slot * 0.7
    body = [
        f'<line class="axis" x1="{left}" y1="{base_y}" x2="{left + plot_w}" y2="{base_y}" stroke="black"/>',
        f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{base_y}" stroke="black"/>',
        f'<text class="axis-label" x="{_num(left + plot_w / 2)}" y="{spec.height - 10}" '
        f'text-anchor="middle">{escape(spec.x_label)}</text>',
        f'<text class="axis-label" x="15" y="{_num(top + plot_h / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 15 {_num(top + plot_h / 2)})">{escape(spec.y_label)}</text>',
        f'<text class="tick" x="{left - 5}" y="{base_y}" text-anchor="end">0</text>',
        f'<text class="tick" x="{left - 5}" y="{top + 4}" text-anchor="end">{_num(top_value)}</text>',
    ]
    for i, (label, value) in enumerate(series.points):
        height = value * scale
        x = left + i * slot + (slot - bar_w) / 2
        body.append(
            f'<rect class="bar" x="{_num(x)}" y="{_num(base_y - height)}" width="{_num(bar_w)}" '
            f'height="{_num(height)}" fill="{spec.color(i)}" data-label={quoteattr(label)} '
            f'data-value="{_num(value)}"/>')
        body.append(
            f'<text class="bar-label" x="{_num(x + bar_w / 2)}" y="{base_y + 15}" '
            f'text-anchor="middle">{escape(label)}</text>')
    return _doc(spec, body)


def _point(cx: float, cy: float, r: float, degrees: float) -> Tuple[float, float]:
    rad = math.radians(degrees - 90)
    return cx + r * math.cos(rad), cy + r * math.sin(rad)


def wedge_angles(values: Sequence[float]) -> List[float]:
    total = float(sum(values))
    if total <= 0:
        raise AllZero("pie chart needs a positive total")
    return [360.0 * v / total for v in values]


def render_pie(spec: ChartSpec) -> str:
    series = spec.series[0]
    if not series.points:
        raise ChartError("pie chart needs at least one point")
    angles = wedge_angles(series.values)
    legend_w = 160
    cx = (spec.width - legend_w) / 2
    cy = spec.height / 2 + 10
    r = min(spec.width - legend_w, spec.height - 50) / 2 - 10
    body = []
    start = 0.0
    for i, ((label, value), angle) in enumerate(zip(series.points, angles)):
        if value == 0:
            continue
        attrs = (f'class="wedge" fill="{spec.color(i)}" stroke="white" data-label={quoteattr(label)} '
                 f'data-value="{_num(value)}" data-angle="{angle!r}"')
        if angle >= 360.0 - 1e-9:
            body.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(r)}" {attrs}/>')
        else:
            x0, y0 = _point(cx, cy, r, start)
            x1, y1 = _point(cx, cy, r, start + angle)
            large = 1 if angle > 180 else 0
            d = (f"M {_num(cx)} {_num(cy)} L {_num(x0)} {_num(y0)} "
                 f"A {_num(r)} {_num(r)} 0 {large} 1 {_num(x1)} {_num(y1)} Z")
            body.append(f'<path d="{d}" {attrs}/>')
        start += angle
    total = sum(series.values)
    lx = spec.width - legend_w + 10
    for i, (label, value) in enumerate(series.points):
        y = 50 + i * 20
        body.append(f'<rect class="legend-swatch" x="{lx}" y="{y - 10}" width="12" height="12" '
                    f'fill="{spec.color(i)}"/>')
        body.append(f'<text class="legend" x="{lx + 18}" y="{y}">{escape(label)} '
                    f'({_num(100.0 * value / total)}%)</text>')
    return _doc(spec, body)


def render_line(spec: ChartSpec) -> str:
    """One polyline per series; x positions follow the numeric labels."""
    for s in spec.series:
        if len(s.points) < 2:
            raise TooFewPoints(f"series {s.title!r} needs at least two points")
    try:
        xs_all = [float(label) for s in spec.series for label in s.labels]
    except ValueError:
        raise ChartError("line chart labels must be numeric") from None
    left, right, top, bottom = 70, 170, 40, 60
    plot_w = spec.width - left - right
    plot_h = spec.height - top - bottom
    base_y = top + plot_h
    x_min, x_max = min(xs_all), max(xs_all)
    x_span = (x_max - x_min) or 1.0
    y_max = _nice_max(max(v for s in spec.series for v in s.values))

    def px(x: float) -> float:
        return left + (x - x_min) / x_span * plot_w

    def py(v: float) -> float:
        return base_y - v / y_max * plot_h

    body = [
        f'<line class="axis" x1="{left}" y1="{base_y}" x2="{left + plot_w}" y2="{base_y}" stroke="black"/>',
        f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{base_y}" stroke="black"/>',
        f'<text class="axis-label" x="{_num(left + plot_w / 2)}" y="{spec.height - 10}" '
        f'text-anchor="middle">{escape(spec.x_label)}</text>',
        f'<text class="axis-label" x="15" y="{_num(top + plot_h / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 15 {_num(top + plot_h / 2)})">{escape(spec.y_label)}</text>',
        f'<text class="tick" x="{left - 5}" y="{base_y}" text-anchor="end">0</text>',
        f'<text class="tick" x="{left - 5}" y="{top + 4}" text-anchor="end">{_num(y_max)}</text>',
    ]
    for label in sorted(set(xs_all)):
        body.append(f'<text class="tick" x="{_num(px(label))}" y="{base_y + 15}" '
                    f'text-anchor="middle">{_num(label)}</text>')
    for i, s in enumerate(spec.series):
        points = sorted((float(label), value) for label, value in s.points)
        coords = " ".join(f"{_num(px(x))},{_num(py(v))}" for x, v in points)
        body.append(f'<polyline class="series" fill="none" stroke="{spec.color(i)}" '
                    f'stroke-width="2" data-series={quoteattr(s.title)} points="{coords}"/>')
        ly = top + 10 + i * 20
        lx = spec.width - right + 10
        body.append(f'<line class="legend-swatch" x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" '
                    f'y2="{ly - 4}" stroke="{spec.color(i)}" stroke-width="2"/>')
        body.append(f'<text class="legend" x="{lx + 26}" y="{ly}">{escape(s.title)}</text>')
    return _doc(spec, body)


def render(spec: ChartSpec) -> str:
    return {"bar": render_bar, "pie": render_pie, "line": render_line}[spec.kind](spec)


def write_chart(spec: ChartSpec, path: Union[str, Path]) -> Path:
    path = Path(path)
    svg = render(spec)
    path.write_text(svg, encoding="utf-8")
    return path
