"""Double description method for pointed polyhedral cones.

Computes the extreme rays of ``{y : r . y >= 0 for r in rows}`` with exact
integer arithmetic. Zero sets are kept as int bitmasks over row indices so the
combinatorial adjacency test is a couple of AND operations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .linalg import independent_rows, inverse
from .rational import integer_scale, primitive

Ray = Tuple[int, ...]


def _idot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def extreme_rays(rows: Sequence[Sequence[int]], dim: int) -> List[Tuple[Ray, int]]:
    """Extreme rays of a pointed cone given by integer inequality rows.

    ``rows`` must have rank ``dim`` (otherwise the cone has a lineality space
    and ValueError is raised). Returns ``(ray, zero_mask)`` pairs where bit ``i``
    of ``zero_mask`` is set when ``rows[i] . ray == 0``.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    start = independent_rows(rows, limit=dim)
    if len(start) < dim:
        raise ValueError("cone is not pointed")
    inv = inverse([rows[i] for i in start])
    rays: List[List] = []
    for j in range(dim):
        col = [inv[i][j] for i in range(dim)]
        ints, _ = integer_scale(col)
        mask = 0
        for k, i in enumerate(start):
            if k != j:
                mask |= 1 << i
        rays.append([ints, mask])

    done = set(start)
    for idx, row in enumerate(rows):
        if idx in done:
            continue
        bit = 1 << idx
        pos, neg, zero = [], [], []
        for ray in rays:
            v = _idot(row, ray[0])
            if v > 0:
                pos.append((ray, v))
            elif v < 0:
                neg.append((ray, v))
            else:
                ray[1] |= bit
                zero.append(ray)
        if not neg:
            continue
        new = [r for r, _ in pos] + zero
        if pos:
            masks = [r[1] for r in rays]
            for p, vp in pos:
                for q, vq in neg:
                    common = p[1] & q[1]
                    if common.bit_count() < dim - 2:
                        continue
                    if any((m & common) == common
                           for m in masks if m != p[1] and m != q[1]):
                        continue
                    vec = primitive([vp * b - vq * a for a, b in zip(p[0], q[0])])
                    new.append([vec, common | bit])
        rays = new
        done.add(idx)
    return [(tuple(r[0]), r[1]) for r in rays]


def homogenize(point: Sequence[Fraction]) -> Tuple[int, ...]:
    """Integer row proportional to ``(1, point)`` with positive first entry."""
    ints, _ = integer_scale([Fraction(1)] + [Fraction(x) for x in point])
    return ints
