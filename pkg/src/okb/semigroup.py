"""Convex bodies from graded valuation data.

A finite piece of a graded semigroup (level ``m``, valuation vector ``nu``)
gives the truncated body ``conv{nu / m}``. The closure in the definition of
the Okounkov body is never taken symbolically: bodies built here carry an
exactness tag recording the highest level used.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .errors import InvalidArgumentError
from .exactgeom import RationalPolytope, convex_hull, empty_polytope, hausdorff_distance
from .exactgeom import polytope as _poly

BODY_KINDS = ("valuative", "limiting", "restricted", "raw")


@dataclass(frozen=True)
class Exactness:
    """``exact``, or ``truncated`` at valuation level ``level``."""

    kind: str = "exact"
    level: int = 0

    @classmethod
    def truncated(cls, level: int) -> "Exactness":
        return cls("truncated", level)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"


EXACT = Exactness()


@dataclass(frozen=True)
class ConvexBody:
    polytope: RationalPolytope
    kind: str = "raw"
    exactness: Exactness = EXACT
    flag_label: str = ""
    diagnostics: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in BODY_KINDS:
            raise InvalidArgumentError(f"unknown body kind {self.kind!r}")

    @property
    def is_empty(self) -> bool:
        return self.polytope.empty

    @property
    def ambient_dim(self) -> int:
        return self.polytope.ambient_dim


@dataclass(frozen=True)
class GradedValuationSet:
    ambient_dim: int
    entries: Tuple[Tuple[int, Tuple[int, ...]], ...]

    def __init__(self, ambient_dim: int, entries: Iterable[Tuple[int, Sequence[int]]]):
        clean = set()
        for level, vec in entries:
            vec = tuple(int(x) for x in vec)
            if int(level) <= 0:
                raise InvalidArgumentError(f"levels must be positive, got {level}")
            if len(vec) != ambient_dim:
                raise InvalidArgumentError(f"vector {vec} does not have length {ambient_dim}")
            if any(x < 0 for x in vec):
                raise InvalidArgumentError(f"valuation vector {vec} has a negative entry")
            clean.add((int(level), vec))
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "entries", tuple(sorted(clean)))

    @property
    def levels(self) -> List[int]:
        return sorted({m for m, _ in self.entries})

    def up_to(self, level: int) -> "GradedValuationSet":
        return GradedValuationSet(self.ambient_dim, [e for e in self.entries if e[0] <= level])

    def normalized_points(self) -> List[Tuple[Fraction, ...]]:
        return [tuple(Fraction(x, m) for x in vec) for m, vec in self.entries]


def body_from_valuations(gamma: GradedValuationSet) -> ConvexBody:
    """Truncated Okounkov body ``conv{nu/m}`` of a finite valuation set."""
    if not gamma.entries:
        return ConvexBody(empty_polytope(gamma.ambient_dim), "raw", Exactness.truncated(0))
    poly = convex_hull(gamma.normalized_points(), gamma.ambient_dim)
    return ConvexBody(poly, "raw", Exactness.truncated(max(gamma.levels)))


def scale_body(body: ConvexBody, m: int) -> ConvexBody:
    """The body of ``m D`` given the body of ``D``: shrink by ``1/m``."""
    if m <= 0:
        raise InvalidArgumentError("scaling level must be a positive integer")
    return replace(body, polytope=_poly.scale(body.polytope, Fraction(1, m)))


def truncation_report(gamma: GradedValuationSet):
    """Hausdorff distance between the body built from levels ``<= m`` and the
    body built from every level, for each level ``m`` present.

    Distances are exact (Fraction or QuadraticValue) and nonincreasing.
    """
    if not gamma.entries:
        return []
    full = body_from_valuations(gamma).polytope
    return [(m, hausdorff_distance(body_from_valuations(gamma.up_to(m)).polytope, full))
            for m in gamma.levels]
