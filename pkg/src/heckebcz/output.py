"""CSV, JSON and SVG emitters.

Floats are written with 17 significant digits, exact field elements as
``"c0,c1,.../den"``.  CSV metadata goes in leading ``#`` comment lines, followed
by the header row.
"""
from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources

from .algebra import AlgNum

__all__ = ["fmt", "Table", "write_csv", "write_json", "load_schema", "ford_svg", "points_svg"]


def fmt(value) -> str:
    """Canonical text for one cell."""
    if isinstance(value, AlgNum):
        return value.serialize()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return format(value, ".17g")
    return str(value)


def _json_cell(value):
    if isinstance(value, AlgNum):
        return value.serialize()
    if hasattr(value, "item"):  # numpy scalar
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


class Table:
    """Rows with named columns and a flat metadata mapping."""

    def __init__(self, command: str, columns, rows=None, meta=None):
        self.command = command
        self.columns = list(columns)
        self.rows = [list(r) for r in rows or []]
        self.meta = dict(meta or {})

    def append(self, row):
        if len(row) != len(self.columns):
            raise ValueError("row length does not match the header")
        self.rows.append(list(row))

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key in sorted(self.meta):
            buf.write(f"# {key}: {json.dumps(_meta_value(self.meta[key]), sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "meta": {k: _meta_value(v) for k, v in self.meta.items()},
            "columns": self.columns,
            "rows": [[_json_cell(v) for v in r] for r in self.rows],
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _meta_value(v):
    if isinstance(v, (list, tuple)):
        return [_meta_value(x) for x in v]
    return _json_cell(v)


def write_csv(table: Table, stream):
    stream.write(table.to_csv())


def write_json(table: Table, stream):
    stream.write(table.to_json())


def load_schema() -> dict:
    text = resources.files("heckebcz").joinpath("schema/table.schema.json").read_text()
    return json.loads(text)


# -- SVG -------------------------------------------------------------------------

_SVG_HEAD = ('<?xml version="1.0" encoding="UTF-8"?>\n'
             '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n')


def _num(x: float) -> str:
    return format(x, ".6f").rstrip("0").rstrip(".") or "0"


def ford_svg(circles, x_range, width=1000, min_radius_px=0.5, title=None) -> str:
    """Circles tangent to the x-axis, drawn upward from a baseline at the bottom."""
    x0, x1 = (float(v) for v in x_range)
    if x1 <= x0:
        raise ValueError("empty x range")
    scale = width / (x1 - x0)
    tallest = max((c.radius for c in circles), default=0.5)
    height = max(int(math.ceil(2 * tallest * scale)) + 20, 40)
    base = height - 10
    out = [_SVG_HEAD.format(w=width, h=height)]
    if title:
        out.append(f"<title>{title}</title>\n")
    out.append(f'<line x1="0" y1="{base}" x2="{width}" y2="{base}" stroke="black" stroke-width="0.5"/>\n')
    out.append('<g fill="none" stroke="navy" stroke-width="0.4">\n')
    for c in circles:
        r = c.radius * scale
        if r < min_radius_px:
            continue
        cx = (c.center[0] - x0) * scale
        cy = base - c.center[1] * scale
        out.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(r)}"/>\n')
    out.append("</g>\n</svg>\n")
    return "".join(out)


def points_svg(points, extent: float, size=800, radius=0.8, title=None) -> str:
    """Point cloud in [-extent, extent]^2, y up."""
    half = size / 2
    s = half / float(extent)
    out = [_SVG_HEAD.format(w=size, h=size)]
    if title:
        out.append(f"<title>{title}</title>\n")
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="white" stroke="black"/>\n')
    out.append('<g fill="black">\n')
    for x, y in sorted(points):
        out.append(f'<circle cx="{_num(half + x * s)}" cy="{_num(half - y * s)}" r="{radius}"/>\n')
    out.append("</g>\n</svg>\n")
    return "".join(out)
