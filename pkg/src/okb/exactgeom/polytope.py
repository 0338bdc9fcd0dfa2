"""Rational polytopes in double description.

Every polytope built here goes through :func:`convex_hull`, which produces a
canonical form: lexicographically sorted vertices and a sorted list of
primitive integer half-spaces (facets inside the affine hull plus a pair of
opposite half-spaces for each equation of the affine hull). Two polytopes are
equal as point sets exactly when they compare equal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from ..errors import DimensionMismatchError, EmptyBodyError, UnboundedError
from . import linalg
from .dd import extreme_rays, homogenize
from .rational import QuadraticValue, QVector, dot, exact_sqrt, integer_scale

Volume = Union[Fraction, QuadraticValue]


@dataclass(frozen=True, order=True)
class Halfspace:
    """The closed half-space ``{u : <u, normal> >= bound}``."""

    normal: Tuple[int, ...]
    bound: Fraction

    def value(self, x: Sequence) -> Fraction:
        return dot(self.normal, x) - self.bound

    def contains(self, x: Sequence) -> bool:
        return self.value(x) >= 0

    def negated(self) -> "Halfspace":
        return Halfspace(tuple(-a for a in self.normal), -self.bound)


def halfspace(normal: Sequence, bound) -> Halfspace:
    """Build a half-space from rational data, rescaled to a primitive normal."""
    row = [Fraction(a) for a in normal]
    if not any(row):
        raise ValueError("half-space normal must be nonzero")
    ints, k = integer_scale(row)
    return Halfspace(ints, Fraction(bound) * k)


@dataclass(frozen=True)
class RationalPolytope:
    ambient_dim: int
    vertices: Tuple[QVector, ...]
    halfspaces: Tuple[Halfspace, ...]
    empty: bool = False

    @property
    def is_empty(self) -> bool:
        return self.empty

    def contains_point(self, x: Sequence) -> bool:
        if self.empty:
            return False
        return all(h.contains(x) for h in self.halfspaces)

    def __contains__(self, x) -> bool:
        return self.contains_point(x)

    def contains(self, other: "RationalPolytope") -> bool:
        """Whether ``other`` is a subset of this polytope."""
        if other.empty:
            return True
        return all(self.contains_point(v) for v in other.vertices)

    def equalities(self) -> List[Halfspace]:
        hs = set(self.halfspaces)
        return [h for h in self.halfspaces if h.negated() in hs]

    def facets(self) -> List[Halfspace]:
        hs = set(self.halfspaces)
        return [h for h in self.halfspaces if h.negated() not in hs]


def empty_polytope(ambient_dim: int) -> RationalPolytope:
    return RationalPolytope(ambient_dim, (), (), True)


class _Frame:
    """Affine hull of a point set, parametrized by its pivot coordinates."""

    def __init__(self, points: Sequence[QVector]):
        self.origin = points[0]
        n = len(self.origin)
        diffs = [[a - b for a, b in zip(p, self.origin)] for p in points[1:]]
        self.rows, self.pivots = linalg.rref(diffs) if diffs else ([], [])
        self.dim = len(self.pivots)
        self.n = n

    def coords(self, x: Sequence) -> Tuple[Fraction, ...]:
        return tuple(x[p] for p in self.pivots)

    def point(self, c: Sequence) -> QVector:
        x = list(self.origin)
        for ci, row, p in zip(c, self.rows, self.pivots):
            shift = ci - self.origin[p]
            if shift:
                x = [a + shift * r for a, r in zip(x, row)]
        return tuple(x)

    def equations(self) -> List[Halfspace]:
        out = []
        for j in range(self.n):
            if j in self.pivots:
                continue
            normal = [Fraction(0)] * self.n
            normal[j] = Fraction(1)
            for row, p in zip(self.rows, self.pivots):
                normal[p] -= row[j]
            h = halfspace(normal, dot(normal, self.origin))
            out.extend([h, h.negated()])
        return out


def _check_dims(points: Sequence[Sequence], ambient_dim: Optional[int]) -> int:
    dims = {len(p) for p in points}
    if ambient_dim is not None:
        dims.add(ambient_dim)
    if len(dims) > 1:
        raise DimensionMismatchError(f"points of mixed dimensions {sorted(dims)}")
    return dims.pop() if dims else 0


def convex_hull(points: Iterable[Sequence], ambient_dim: Optional[int] = None) -> RationalPolytope:
    """Convex hull of finitely many rational points, in canonical form."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    n = _check_dims(pts, ambient_dim)
    if not pts:
        return empty_polytope(n)
    pts = sorted(set(pts))
    frame = _Frame(pts)
    hs = frame.equations()
    d = frame.dim
    if d == 0:
        return RationalPolytope(n, (pts[0],), tuple(sorted(hs)), False)

    rows = [homogenize(frame.coords(p)) for p in pts]
    rays = extreme_rays(rows, d + 1)
    masks = []
    for ray, mask in rays:
        normal = [Fraction(0)] * n
        for a, p in zip(ray[1:], frame.pivots):
            normal[p] = Fraction(a)
        hs.append(halfspace(normal, -Fraction(ray[0])))
        masks.append(mask)

    full = (1 << len(pts)) - 1
    vertices = []
    for i, p in enumerate(pts):
        meet = full
        for m in masks:
            if m >> i & 1:
                meet &= m
        if meet == 1 << i:
            vertices.append(p)
    return RationalPolytope(n, tuple(vertices), tuple(sorted(set(hs))), False)


def intersect_halfspaces(system: Iterable[Halfspace], ambient_dim: Optional[int] = None) -> RationalPolytope:
    """The polytope cut out by a system of half-spaces.

    Raises UnboundedError when the region is nonempty and unbounded.
    """
    system = list(system)
    n = _check_dims([h.normal for h in system], ambient_dim)
    if n == 0:
        if all(h.bound <= 0 for h in system):
            return convex_hull([()])
        return empty_polytope(0)
    normals = [h.normal for h in system]
    lineality = linalg.kernel(normals, n)
    if lineality:
        # P = (P cap L^perp) + L; decide emptiness on the slice
        extra = []
        for direction in lineality:
            h = halfspace(direction, 0)
            extra.extend([h, h.negated()])
        sliced = intersect_halfspaces(system + extra, n)
        if sliced.empty:
            return sliced
        raise UnboundedError("half-space system defines an unbounded region")

    rows = [(1,) + (0,) * n]
    for h in system:
        ints, _ = integer_scale([-h.bound] + [Fraction(a) for a in h.normal])
        rows.append(ints)
    rays = extreme_rays(rows, n + 1)
    finite = [r for r, _ in rays if r[0] > 0]
    if not finite:
        return empty_polytope(n)
    if len(finite) != len(rays):
        raise UnboundedError("half-space system defines an unbounded region")
    return convex_hull([tuple(Fraction(x, r[0]) for x in r[1:]) for r in finite], n)


def intersection(p: RationalPolytope, q: RationalPolytope) -> RationalPolytope:
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatchError("ambient dimensions differ")
    if p.empty or q.empty:
        return empty_polytope(p.ambient_dim)
    return intersect_halfspaces(p.halfspaces + q.halfspaces, p.ambient_dim)


def restrict(p: RationalPolytope, equations: Iterable[Tuple[Sequence, Fraction]]) -> RationalPolytope:
    """The slice of ``p`` where every ``<u, normal> = value`` holds."""
    if p.empty:
        return p
    extra = []
    for normal, value in equations:
        h = halfspace(normal, value)
        extra.extend([h, h.negated()])
    if not extra:
        return p
    return intersect_halfspaces(p.halfspaces + tuple(extra), p.ambient_dim)


def affine_dim(p: RationalPolytope) -> Optional[int]:
    """Dimension of the affine hull; None for the empty polytope."""
    if p.empty:
        return None
    return _Frame(list(p.vertices)).dim


def affine_map(p: RationalPolytope, matrix: Sequence[Sequence], offset: Optional[Sequence] = None) -> RationalPolytope:
    """Image of ``p`` under ``x -> matrix x + offset``."""
    rows = [[Fraction(a) for a in row] for row in matrix]
    if any(len(row) != p.ambient_dim for row in rows):
        raise DimensionMismatchError("matrix column count differs from ambient dimension")
    m = len(rows)
    b = [Fraction(x) for x in offset] if offset is not None else [Fraction(0)] * m
    if len(b) != m:
        raise DimensionMismatchError("offset length differs from matrix row count")
    if p.empty:
        return empty_polytope(m)
    return convex_hull([tuple(dot(row, v) + bi for row, bi in zip(rows, b)) for v in p.vertices], m)


def project(p: RationalPolytope, matrix: Sequence[Sequence[int]]) -> RationalPolytope:
    return affine_map(p, matrix)


def scale(p: RationalPolytope, factor) -> RationalPolytope:
    factor = Fraction(factor)
    if p.empty:
        return p
    return convex_hull([tuple(factor * x for x in v) for v in p.vertices], p.ambient_dim)


def translate(p: RationalPolytope, shift: Sequence) -> RationalPolytope:
    if p.empty:
        return p
    shift = [Fraction(s) for s in shift]
    return convex_hull([tuple(x + s for x, s in zip(v, shift)) for v in p.vertices], p.ambient_dim)


# -- triangulation and volumes ------------------------------------------------


class _Combinatorics:
    """Vertex/facet incidences of a nonempty polytope, in its pivot chart."""

    def __init__(self, p: RationalPolytope):
        self.polytope = p
        self.frame = _Frame(list(p.vertices))
        self.q = [self.frame.coords(v) for v in p.vertices]
        self.facets = p.facets()
        self.facet_sets = [frozenset(i for i, v in enumerate(p.vertices) if h.value(v) == 0)
                           for h in self.facets]
        self._tri: Dict[FrozenSet[int], List[Tuple[int, ...]]] = {}

    def dim_of(self, idx: FrozenSet[int]) -> int:
        pts = [self.q[i] for i in sorted(idx)]
        if len(pts) <= 1:
            return 0
        return linalg.rank([[a - b for a, b in zip(x, pts[0])] for x in pts[1:]])

    def subfacets(self, face: FrozenSet[int], dim: int) -> List[FrozenSet[int]]:
        out = set()
        for s in self.facet_sets:
            f = face & s
            if f != face and f and self.dim_of(f) == dim - 1:
                out.add(f)
        return sorted(out, key=sorted)

    def triangulate(self, face: FrozenSet[int], dim: int) -> List[Tuple[int, ...]]:
        """Pulling triangulation: cone from the least vertex over far facets."""
        if face in self._tri:
            return self._tri[face]
        if dim == 0:
            result = [(min(face),)]
        else:
            v0 = min(face)
            result = []
            for sub in self.subfacets(face, dim):
                if v0 in sub:
                    continue
                for simplex in self.triangulate(sub, dim - 1):
                    result.append((v0,) + simplex)
        self._tri[face] = result
        return result

    def simplex_volume(self, simplex: Sequence[int], apex=None) -> Fraction:
        """|det| / d! for a full simplex in the chart (or apex + facet simplex)."""
        pts = [self.q[i] for i in simplex]
        base = apex if apex is not None else pts[0]
        rest = pts if apex is not None else pts[1:]
        m = [[a - b for a, b in zip(x, base)] for x in rest]
        return abs(linalg.det(m)) / math.factorial(len(m))


def _chart_volume(p: RationalPolytope) -> Tuple[Fraction, _Combinatorics]:
    if p.empty:
        raise EmptyBodyError("volume of the empty polytope")
    comb = _Combinatorics(p)
    d = comb.frame.dim
    if d == 0:
        return Fraction(1), comb
    allv = frozenset(range(len(p.vertices)))
    vol = sum((comb.simplex_volume(s) for s in comb.triangulate(allv, d)), Fraction(0))
    return vol, comb


def triangulation(p: RationalPolytope) -> List[Tuple[QVector, ...]]:
    """Simplices (as vertex tuples) of a triangulation of ``p``."""
    if p.empty:
        return []
    comb = _Combinatorics(p)
    allv = frozenset(range(len(p.vertices)))
    return [tuple(p.vertices[i] for i in s) for s in comb.triangulate(allv, comb.frame.dim)]


def volume(p: RationalPolytope) -> Volume:
    """Euclidean volume of ``p`` inside its own affine hull.

    A point has volume 1. The result is a Fraction whenever it is rational
    (always the case for hulls spanned by coordinate directions) and a
    QuadraticValue otherwise.
    """
    vol, comb = _chart_volume(p)
    if comb.frame.dim == 0:
        return vol
    g = linalg.det(linalg.gram(comb.frame.rows))
    return exact_sqrt(vol * vol * g)


def lattice_volume(p: RationalPolytope) -> Fraction:
    """Volume normalized by the lattice ``Z^n`` restricted to the affine hull.

    Equals :func:`volume` for hulls parallel to a coordinate subspace; in
    general it is the growth rate that governs lattice point counts.
    """
    vol, comb = _chart_volume(p)
    if comb.frame.dim == 0:
        return vol
    ints = []
    k = Fraction(1)
    for row in comb.frame.rows:
        r, s = integer_scale(row)
        ints.append(r)
        k *= s
    return vol * linalg.maximal_minor_gcd(ints) / k


def signed_decomposition_volume(p: RationalPolytope) -> Fraction:
    """Chart volume by signed cones from a reference point over every facet.

    Independent of the pulling triangulation's choice of apex; used as an
    internal cross-check of :func:`volume`.
    """
    if p.empty:
        raise EmptyBodyError("volume of the empty polytope")
    comb = _Combinatorics(p)
    d = comb.frame.dim
    if d == 0:
        return Fraction(1)
    ref = tuple(Fraction(0) for _ in range(d))
    ref_point = comb.frame.point(ref)
    total = Fraction(0)
    for h, fs in zip(comb.facets, comb.facet_sets):
        side = h.value(ref_point)
        if side == 0:
            continue
        sign = 1 if side > 0 else -1
        for simplex in comb.triangulate(fs, d - 1):
            total += sign * comb.simplex_volume(simplex, apex=ref)
    return total


def lattice_points(p: RationalPolytope) -> List[Tuple[int, ...]]:
    """All integer points of ``p`` in lexicographic order (box scan + filter)."""
    if p.empty:
        return []
    n = p.ambient_dim
    lo = [math.ceil(min(v[i] for v in p.vertices)) for i in range(n)]
    hi = [math.floor(max(v[i] for v in p.vertices)) for i in range(n)]
    if any(a > b for a, b in zip(lo, hi)):
        return []
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return [pt for pt in itertools.product(*ranges) if p.contains_point(pt)]


# -- distances -----------------------------------------------------------------


def _faces(p: RationalPolytope) -> List[FrozenSet[int]]:
    comb = _Combinatorics(p)
    faces = {frozenset(range(len(p.vertices)))}
    frontier = set(comb.facet_sets)
    while frontier:
        faces |= frontier
        nxt = set()
        for a in frontier:
            for b in comb.facet_sets:
                c = a & b
                if c and c not in faces:
                    nxt.add(c)
        frontier = nxt
    return sorted(faces, key=lambda f: (len(f), sorted(f)))


def squared_distance(x: Sequence, p: RationalPolytope) -> Fraction:
    """Exact squared Euclidean distance from a point to a polytope.

    The nearest point lies in the relative interior of some face, where it is
    the orthogonal projection onto that face's affine hull; every candidate
    projection that lands in ``p`` is an upper bound, so the minimum is exact.
    """
    if p.empty:
        raise EmptyBodyError("distance to the empty polytope")
    x = tuple(Fraction(a) for a in x)
    if p.contains_point(x):
        return Fraction(0)
    best = None
    for face in _faces(p):
        pts = [p.vertices[i] for i in sorted(face)]
        base = pts[0]
        dirs = [[a - b for a, b in zip(v, base)] for v in pts[1:]]
        basis_idx = linalg.independent_rows(dirs) if dirs else []
        basis = [dirs[i] for i in basis_idx]
        if basis:
            g = linalg.gram(basis)
            rhs = [dot(b, [a - c for a, c in zip(x, base)]) for b in basis]
            coef = linalg.solve(g, rhs)
            y = tuple(b0 + sum((c * b[j] for c, b in zip(coef, basis)), Fraction(0))
                      for j, b0 in enumerate(base))
        else:
            y = base
        if not p.contains_point(y):
            continue
        d2 = sum(((a - b) ** 2 for a, b in zip(x, y)), Fraction(0))
        if best is None or d2 < best:
            best = d2
    return best


def hausdorff_distance(p: RationalPolytope, q: RationalPolytope) -> Volume:
    """Exact Hausdorff distance; both suprema are attained at vertices."""
    if p.empty or q.empty:
        raise EmptyBodyError("Hausdorff distance with an empty polytope")
    sq = max(
        max(squared_distance(v, q) for v in p.vertices),
        max(squared_distance(v, p) for v in q.vertices),
    )
    return exact_sqrt(sq)
