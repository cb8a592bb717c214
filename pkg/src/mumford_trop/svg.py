"""SVG drawings of planar tropical curves (3D curves are drawn by their first
two coordinates, with the third written next to each vertex)."""

from __future__ import annotations

import math
from fractions import Fraction
from html import escape

from .faithful import Crossing, TropicalCurve, ray_name

SCALE = 40  # px per unit of the value group
RAY_LENGTH = 2
_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def pretty_label(label: str) -> str:
    return label.translate(_SUB)


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def render_svg(tc: TropicalCurve, crossings: list[Crossing] = (), title: str = "") -> str:
    xy = {k: (Fraction(v[0]), Fraction(v[1])) for k, v in tc.vertices.items()}
    reach = {}
    for c in crossings:
        for name in (c.first, c.second):
            reach[name] = max(reach.get(name, 0), _param(tc, name, c.witness) + 1)
    rays = []
    for r in tc.rays:
        d = r.direction[:2]
        if not any(d):
            rays.append((r, xy[r.base], None))
            continue
        t = max(Fraction(RAY_LENGTH), reach.get(ray_name(r), 0))
        end = (xy[r.base][0] + t * d[0], xy[r.base][1] + t * d[1])
        rays.append((r, xy[r.base], end))

    pts = list(xy.values()) + [e for _, _, e in rays if e is not None]
    xmin = math.floor(min(p[0] for p in pts)) - 1
    xmax = math.ceil(max(p[0] for p in pts)) + 1
    ymin = math.floor(min(p[1] for p in pts)) - 1
    ymax = math.ceil(max(p[1] for p in pts)) + 1
    top = 30 if title else 0
    W, H = (xmax - xmin) * SCALE, (ymax - ymin) * SCALE + top

    def X(x):
        return _fmt(float((x - xmin) * SCALE))

    def Y(y):
        return _fmt(float((ymax - y) * SCALE + top))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">',
           f'<rect width="{W}" height="{H}" fill="white"/>']
    if title:
        out.append(f'<text x="8" y="20" font-size="14">{escape(title)}</text>')
    out.append('<g stroke="#e4e4e4" stroke-width="1">')
    for x in range(xmin, xmax + 1):
        out.append(f'<line x1="{X(x)}" y1="{Y(ymin)}" x2="{X(x)}" y2="{Y(ymax)}"/>')
    for y in range(ymin, ymax + 1):
        out.append(f'<line x1="{X(xmin)}" y1="{Y(y)}" x2="{X(xmax)}" y2="{Y(y)}"/>')
    out.append("</g>")

    for s in tc.segments:
        (x1, y1), (x2, y2) = xy[s.tail], xy[s.head]
        dash = ' stroke-dasharray="4 3"' if s.kind == "join" else ""
        out.append(f'<line x1="{X(x1)}" y1="{Y(y1)}" x2="{X(x2)}" y2="{Y(y2)}" '
                   f'stroke="black" stroke-width="2"{dash}><title>{escape(s.name)}</title></line>')
    for r, (bx, by), end in rays:
        name = "trop " + pretty_label(r.label)
        if end is None:
            # purely vertical in the third coordinate
            out.append(f'<text x="{X(bx)}" y="{Y(by)}" dx="4" dy="14" fill="#1f5fa8">'
                       f'{escape(name)} (h {"+" if r.direction[2] > 0 else "-"})</text>')
            continue
        ex, ey = end
        out.append(f'<line x1="{X(bx)}" y1="{Y(by)}" x2="{X(ex)}" y2="{Y(ey)}" '
                   f'stroke="#1f5fa8" stroke-width="1.5"/>')
        d = r.direction
        n = math.hypot(d[0], d[1])
        dx, dy = 10 * d[0] / n, -10 * d[1] / n
        extra = f" (h {d[2]:+d})" if tc.dim == 3 and d[2] else ""
        out.append(f'<text x="{X(ex)}" y="{Y(ey)}" dx="{_fmt(dx)}" dy="{_fmt(dy + 4)}" '
                   f'text-anchor="middle" fill="#1f5fa8">{escape(name + extra)}</text>')
    for k, (x, y) in sorted(xy.items()):
        out.append(f'<circle cx="{X(x)}" cy="{Y(y)}" r="2.5" fill="black"/>')
        if tc.dim == 3:
            h = tc.vertices[k][2]
            out.append(f'<text x="{X(x)}" y="{Y(y)}" dx="4" dy="-4" fill="#777">h={h}</text>')
    for c in crossings:
        x, y = c.witness[0], c.witness[1]
        out.append(f'<circle cx="{X(x)}" cy="{Y(y)}" r="8" fill="none" stroke="#c0392b" '
                   f'stroke-width="2"><title>{escape(c.first)} x {escape(c.second)}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _param(tc: TropicalCurve, name: str, witness) -> Fraction:
    p = tc.piece(name)
    k = next(i for i, d in enumerate(p.direction) if d)
    return (Fraction(witness[k]) - p.base[k]) / p.direction[k]
