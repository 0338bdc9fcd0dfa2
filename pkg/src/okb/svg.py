"""Deterministic SVG pictures of planar convex bodies.

Coordinates are computed exactly and rounded once, half-up, to three
decimals, so identical bodies produce byte-identical files.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import EmptyBodyError, InvalidArgumentError
from .exactgeom.rational import format_rational
from .semigroup import ConvexBody

SIZE = 400
MARGIN = 50


def _fmt(x: Fraction) -> str:
    scaled = (x * 1000 + Fraction(1, 2)).__floor__()
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 1000)
    return f"{sign}{whole}.{frac:03d}".rstrip("0").rstrip(".") if frac else f"{sign}{whole}"


def _boundary(vertices: Sequence[Tuple[Fraction, Fraction]]) -> List[Tuple[Fraction, Fraction]]:
    """Vertices of a convex polygon in counterclockwise order, starting from
    the lexicographically smallest one."""
    start = min(vertices)

    def slope_key(p):
        # every other vertex has dx >= 0, and dx == 0 only straight above
        dx, dy = p[0] - start[0], p[1] - start[1]
        return (1, 0) if dx == 0 else (0, dy / dx)

    return [start] + sorted((v for v in vertices if v != start), key=slope_key)


def render_svg(body: ConvexBody) -> str:
    p = body.polytope
    if p.ambient_dim != 2:
        raise InvalidArgumentError(f"only planar bodies can be drawn, got dimension {p.ambient_dim}")
    if p.empty:
        raise EmptyBodyError("cannot draw an empty body")
    verts = [tuple(Fraction(x) for x in v) for v in p.vertices]
    xs = [v[0] for v in verts] + [Fraction(0)]
    ys = [v[1] for v in verts] + [Fraction(0)]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, Fraction(1))
    unit = Fraction(SIZE - 2 * MARGIN) / span

    def sx(x: Fraction) -> Fraction:
        return MARGIN + (x - lo_x) * unit

    def sy(y: Fraction) -> Fraction:
        return SIZE - MARGIN - (y - lo_y) * unit

    ox, oy = sx(Fraction(0)), sy(Fraction(0))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        '<g id="axes" stroke="#000000" stroke-width="1">',
        f'<line x1="{_fmt(Fraction(MARGIN // 2))}" y1="{_fmt(oy)}" '
        f'x2="{_fmt(Fraction(SIZE - MARGIN // 2))}" y2="{_fmt(oy)}"/>',
        f'<line x1="{_fmt(ox)}" y1="{_fmt(Fraction(SIZE - MARGIN // 2))}" '
        f'x2="{_fmt(ox)}" y2="{_fmt(Fraction(MARGIN // 2))}"/>',
        '</g>',
        f'<text x="{SIZE - MARGIN // 2}" y="{_fmt(oy - 6)}" font-size="14" text-anchor="end">x₁</text>',
        f'<text x="{_fmt(ox + 6)}" y="{MARGIN // 2 + 12}" font-size="14">x₂</text>',
    ]
    ordered = _boundary(verts) if len(verts) > 2 else verts
    pts = [f"{_fmt(sx(x))} {_fmt(sy(y))}" for x, y in ordered]
    if len(verts) >= 3:
        d = "M " + " L ".join(pts) + " Z"
        out.append(f'<path class="body" d="{d}" fill="#9ecae1" fill-opacity="0.6" '
                   'stroke="#08519c" stroke-width="2"/>')
    elif len(verts) == 2:
        d = "M " + " L ".join(pts)
        out.append(f'<path class="body" d="{d}" fill="none" stroke="#08519c" stroke-width="4"/>')
    else:
        out.append(f'<path class="body" d="M {pts[0]} Z" fill="none" stroke="#08519c" '
                   'stroke-width="8" stroke-linecap="round"/>')
    for x, y in verts:
        label = f"({format_rational(x)}, {format_rational(y)})"
        out.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="3" fill="#08519c"/>')
        out.append(f'<text class="vertex" x="{_fmt(sx(x) + 5)}" y="{_fmt(sy(y) - 5)}" '
                   f'font-size="11">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
