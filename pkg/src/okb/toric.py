"""Smooth complete toric varieties.

A torus-invariant divisor ``D = sum a_rho D_rho`` has the polytope
``P_D = {u : <u, v_rho> >= -a_rho}``; its lattice points index a monomial
basis of sections. A flag of orbit closures given by the rays ``v_1..v_n`` of
a maximal cone has valuation ``u -> (<u, v_i> + a_i)_i``, which maps ``P_D``
unimodularly onto the Okounkov body.

Restriction to an orbit closure ``V(tau)`` kills exactly the monomials
outside the face ``F_tau(P_D) = {u in P_D : <u, v_rho> = -a_rho, rho in tau}``
and is injective on the monomials of the face, so base loci, restricted
volumes and the Nakayama property are all read off from faces.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .errors import InsideBaseLocusError, InvalidArgumentError, UnboundedLPError
from .exactgeom import (
    RationalPolytope,
    affine_dim,
    affine_map,
    empty_polytope,
    halfspace,
    intersect_halfspaces,
    lattice_points,
    lattice_volume,
    maximize,
)
from .exactgeom.linalg import det, inverse, rank
from .exactgeom.lp import feasible_free
from .exactgeom.polytope import restrict
from .exactgeom.rational import as_rational
from .semigroup import EXACT, ConvexBody, GradedValuationSet
from .surface import NamedCurve, SurfaceFlag, SurfaceModel

MINUS_INFINITY = float("-inf")
ZERO = Fraction(0)


# -- data ----------------------------------------------------------------------


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: Tuple[Tuple[int, ...], ...]
    max_cones: Tuple[Tuple[int, ...], ...]

    @classmethod
    def build(cls, rays: Iterable[Sequence[int]], max_cones: Iterable[Iterable[int]]) -> "Fan":
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays:
            raise InvalidArgumentError("a fan needs at least one ray")
        dim = len(rays[0])
        if any(len(r) != dim for r in rays):
            raise InvalidArgumentError("rays must share one dimension")
        cones = tuple(sorted({tuple(sorted(int(i) for i in c)) for c in max_cones}))
        for c in cones:
            if any(not 0 <= i < len(rays) for i in c):
                raise InvalidArgumentError(f"cone {list(c)} refers to a missing ray")
        return cls(dim, rays, cones)

    @property
    def num_rays(self) -> int:
        return len(self.rays)

    def cones(self) -> List[Tuple[int, ...]]:
        """Every cone of the fan (faces of maximal cones), the zero cone first."""
        out = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(combinations(c, k))
        return sorted(out, key=lambda c: (len(c), c))

    def is_cone(self, indices: Iterable[int]) -> bool:
        s = set(indices)
        return any(s <= set(c) for c in self.max_cones)


@dataclass(frozen=True)
class TorusDivisor:
    """Coefficients ``a_rho``, one per ray."""

    coeffs: Tuple[Fraction, ...]

    @classmethod
    def build(cls, fan: Fan, coeffs: Union[Mapping, Sequence]) -> "TorusDivisor":
        if isinstance(coeffs, Mapping):
            values = [ZERO] * fan.num_rays
            for k, v in coeffs.items():
                i = int(k)
                if not 0 <= i < fan.num_rays:
                    raise InvalidArgumentError(f"divisor refers to missing ray {k}")
                values[i] = as_rational(v)
            return cls(tuple(values))
        values = tuple(as_rational(v) for v in coeffs)
        if len(values) != fan.num_rays:
            raise InvalidArgumentError(f"divisor needs {fan.num_rays} coefficients")
        return cls(values)

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        return TorusDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, m) -> "TorusDivisor":
        m = as_rational(m)
        return TorusDivisor(tuple(m * a for a in self.coeffs))

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coeffs)


@dataclass(frozen=True)
class InvariantFlag:
    """Rays ``v_1..v_n`` of a maximal cone; ``Y_i`` is the orbit closure of the
    cone on the first ``i`` rays."""

    ray_order: Tuple[int, ...]

    def leading_cone(self, codim: int) -> "OrbitCone":
        return OrbitCone(tuple(sorted(self.ray_order[:codim])))


@dataclass(frozen=True)
class OrbitCone:
    ray_indices: Tuple[int, ...]

    @classmethod
    def of(cls, indices: Iterable[int]) -> "OrbitCone":
        return cls(tuple(sorted(int(i) for i in indices)))


def anticanonical(fan: Fan) -> TorusDivisor:
    """``A = sum D_rho``, the perturbation direction for ``B-`` and ``B+``."""
    return TorusDivisor(tuple(Fraction(1) for _ in fan.rays))


def principal_shift(fan: Fan, d: TorusDivisor, u: Sequence) -> TorusDivisor:
    """``D + div(chi^u)``: coefficients shift by ``<u, v_rho>``."""
    u = [as_rational(x) for x in u]
    return TorusDivisor(tuple(a + sum(x * y for x, y in zip(u, v))
                              for a, v in zip(d.coeffs, fan.rays)))


# -- validation ----------------------------------------------------------------


@dataclass(frozen=True)
class FanReport:
    smooth: bool
    complete: bool
    face_compatible: bool
    problems: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete and self.face_compatible


def _improper_pair(fan: Fan, c1: Sequence[int], c2: Sequence[int]) -> bool:
    """True when the two simplicial cones overlap outside their common face.

    Maximize the weight on the non-shared rays of ``c1`` over points of
    ``c1 ∩ c2`` normalized by total weight 1.
    """
    common = set(c1) & set(c2)
    only1 = [i for i in c1 if i not in common]
    if not only1:
        return False
    n = fan.dim
    cols = [fan.rays[i] for i in c1] + [tuple(-x for x in fan.rays[j]) for j in c2]
    a_eq = [[col[r] for col in cols] for r in range(n)]
    a_eq.append([1] * len(cols))
    b_eq = [0] * n + [1]
    objective = [1 if i in only1 else 0 for i in c1] + [0] * len(c2)
    res = maximize(objective, a_eq, b_eq)
    return res.feasible and res.value > 0


@lru_cache(maxsize=64)
def validate_fan(fan: Fan) -> FanReport:
    problems: List[str] = []
    n = fan.dim
    for i, r in enumerate(fan.rays):
        if all(x == 0 for x in r):
            problems.append(f"ray {i} is zero")
        elif math.gcd(*r) != 1:
            problems.append(f"ray {i} = {list(r)} is not primitive")
    smooth = True
    for c in fan.max_cones:
        if len(c) != n:
            smooth = False
            problems.append(f"cone {list(c)} is not {n}-dimensional")
            continue
        dt = det([fan.rays[i] for i in c])
        if abs(dt) != 1:
            smooth = False
            problems.append(f"cone {list(c)} is not smooth (determinant {dt})")
    compatible = True
    full = [c for c in fan.max_cones if len(c) == n]
    for c1, c2 in combinations(full, 2):
        if rank([fan.rays[i] for i in c1]) < n or rank([fan.rays[i] for i in c2]) < n:
            continue
        if _improper_pair(fan, c1, c2) or _improper_pair(fan, c2, c1):
            compatible = False
            problems.append(f"cones {list(c1)} and {list(c2)} do not meet in a common face")
    walls: Dict[Tuple[int, ...], int] = {}
    for c in full:
        for w in combinations(c, n - 1):
            walls[w] = walls.get(w, 0) + 1
    complete = bool(full)
    for w, k in sorted(walls.items()):
        if k != 2:
            complete = False
            problems.append(f"wall {list(w)} lies in {k} maximal cone(s); fan is not complete")
    if not full:
        problems.append("fan has no maximal cones")
    return FanReport(smooth, complete, compatible, tuple(problems))


def _require_valid(fan: Fan) -> None:
    report = validate_fan(fan)
    if not report.ok:
        raise InvalidArgumentError("invalid fan: " + "; ".join(report.problems))


def _check_divisor(fan: Fan, d: TorusDivisor) -> None:
    if len(d.coeffs) != fan.num_rays:
        raise InvalidArgumentError(f"divisor needs {fan.num_rays} coefficients")


# -- polytopes -----------------------------------------------------------------


def divisor_halfspaces(fan: Fan, d: TorusDivisor):
    _check_divisor(fan, d)
    return [halfspace(v, -a) for v, a in zip(fan.rays, d.coeffs)]


@lru_cache(maxsize=1024)
def divisor_polytope(fan: Fan, d: TorusDivisor) -> RationalPolytope:
    """``P_D = {u : <u, v_rho> >= -a_rho}``."""
    return intersect_halfspaces(divisor_halfspaces(fan, d), fan.dim)


def face(fan: Fan, d: TorusDivisor, tau: OrbitCone) -> RationalPolytope:
    """``F_tau(P_D)``: points of ``P_D`` with ``<u, v_rho> = -a_rho`` on ``tau``."""
    p = divisor_polytope(fan, d)
    if p.empty:
        return p
    return restrict(p, [(fan.rays[i], -d.coeffs[i]) for i in tau.ray_indices])


def is_pseudoeffective(fan: Fan, d: TorusDivisor) -> bool:
    """``[D]`` lies in the cone spanned by the ray divisors, i.e. some
    ``D + div(chi^u)`` has nonnegative coefficients."""
    _check_divisor(fan, d)
    return feasible_free(fan.rays, [-a for a in d.coeffs], fan.dim) is not None


def iitaka_dim(fan: Fan, d: TorusDivisor) -> Union[int, float]:
    dim = affine_dim(divisor_polytope(fan, d))
    return MINUS_INFINITY if dim is None else dim


def numerical_iitaka_dim(fan: Fan, d: TorusDivisor) -> Union[int, float]:
    """Equal to the Iitaka dimension on smooth complete toric varieties."""
    return iitaka_dim(fan, d)


def _check_flag(fan: Fan, flag: InvariantFlag) -> None:
    order = flag.ray_order
    if len(order) != fan.dim or len(set(order)) != fan.dim:
        raise InvalidArgumentError(f"flag needs {fan.dim} distinct rays")
    if tuple(sorted(order)) not in fan.max_cones:
        raise InvalidArgumentError(f"flag rays {list(order)} do not span a maximal cone")


def flag_map(fan: Fan, d: TorusDivisor, flag: InvariantFlag):
    """Matrix and offset of ``u -> (<u, v_i> + a_i)_i``."""
    _check_flag(fan, flag)
    matrix = [list(fan.rays[i]) for i in flag.ray_order]
    offset = [d.coeffs[i] for i in flag.ray_order]
    return matrix, offset


def okounkov_body_toric(fan: Fan, d: TorusDivisor, flag: InvariantFlag,
                        kind: str = "valuative") -> ConvexBody:
    if kind not in ("valuative", "limiting"):
        raise InvalidArgumentError(f"kind must be valuative or limiting, got {kind!r}")
    matrix, offset = flag_map(fan, d, flag)
    label = "rays " + ",".join(str(i) for i in flag.ray_order)
    p = divisor_polytope(fan, d)
    if p.empty:
        return ConvexBody(empty_polytope(fan.dim), kind, EXACT, label)
    return ConvexBody(affine_map(p, matrix, offset), kind, EXACT, label)


def sections_count(fan: Fan, d: TorusDivisor, m: int) -> int:
    if m <= 0:
        raise InvalidArgumentError("m must be a positive integer")
    md = m * d
    if not md.is_integral():
        raise InvalidArgumentError(f"{m}D does not have integer coefficients")
    return len(lattice_points(divisor_polytope(fan, md)))


def toric_valuation_set(fan: Fan, d: TorusDivisor, flag: InvariantFlag,
                        max_level: int) -> GradedValuationSet:
    """Valuation vectors of the monomial sections of ``mD`` for every
    ``m <= max_level`` with ``mD`` integral."""
    matrix, _ = flag_map(fan, d, flag)
    entries = []
    for m in range(1, max_level + 1):
        md = m * d
        if not md.is_integral():
            continue
        a = [int(md.coeffs[i]) for i in flag.ray_order]
        for u in lattice_points(divisor_polytope(fan, md)):
            nu = tuple(sum(r * x for r, x in zip(row, u)) + ai for row, ai in zip(matrix, a))
            entries.append((m, nu))
    return GradedValuationSet(fan.dim, entries)


# -- base loci -----------------------------------------------------------------


def _face_epsilon_range(fan: Fan, d: TorusDivisor, cone: Sequence[int], sign: int):
    """``(lo, hi)`` with ``{eps >= 0 : F_cone(P_{D + sign*eps*A}) != empty}
    = [lo, hi]`` (``hi`` None when unbounded), or None if that set is empty.

    The set is the projection of a polyhedron onto the ``eps`` axis, hence an
    interval.
    """
    n = fan.dim
    rows, rhs = [], []
    # variables: p (n), q (n), eps, slacks (one per non-cone ray); u = p - q
    others = [i for i in range(fan.num_rays) if i not in cone]
    for i, (v, a) in enumerate(zip(fan.rays, d.coeffs)):
        slack = [0] * len(others)
        if i in others:
            slack[others.index(i)] = -1
        rows.append(list(v) + [-x for x in v] + [sign] + slack)
        rhs.append(-a)
    width = 2 * n + 1 + len(others)
    obj = [0] * width
    obj[2 * n] = -1
    res = maximize(obj, rows, rhs)
    if not res.feasible:
        return None
    lo = -res.value
    obj[2 * n] = 1
    try:
        hi = maximize(obj, rows, rhs).value
    except UnboundedLPError:
        hi = None
    return lo, hi


@dataclass(frozen=True)
class BaseLoci:
    """Cones whose orbit closures lie in each locus (closed under taking
    larger cones), plus the ``eps`` at which the perturbed loci were read and
    the certificate that ``eps`` sits in the final chamber."""

    sb: Tuple[OrbitCone, ...]
    b_minus: Tuple[OrbitCone, ...]
    b_plus: Tuple[OrbitCone, ...]
    eps_minus: Fraction
    eps_plus: Fraction
    certificate: Tuple[str, ...]

    @staticmethod
    def divisorial(cones: Iterable[OrbitCone]) -> Tuple[int, ...]:
        return tuple(c.ray_indices[0] for c in cones if len(c.ray_indices) == 1)


def _locus(fan: Fan, d: TorusDivisor) -> Tuple[OrbitCone, ...]:
    p = divisor_polytope(fan, d)
    out = []
    for c in fan.cones():
        if p.empty or restrict(p, [(fan.rays[i], -d.coeffs[i]) for i in c]).empty:
            out.append(OrbitCone(c))
    return tuple(out)


def _stable_perturbed_locus(fan: Fan, d: TorusDivisor, sign: int):
    """Halve ``eps`` from 1 until three consecutive loci of ``D + sign*eps*A``
    agree and the chamber certificate accepts the last ``eps``.

    The certificate uses the exact interval of ``eps`` on which each face is
    nonempty: the last ``eps`` must lie strictly inside the chamber adjacent
    to 0, so the locus read there is the limit as ``eps -> 0+``.
    """
    a = anticanonical(fan)
    ranges = {c: _face_epsilon_range(fan, d, c, sign) for c in fan.cones()}
    near_zero = {c: rng is not None and rng[0] == 0 and (rng[1] is None or rng[1] > 0)
                 for c, rng in ranges.items()}

    def certified(eps: Fraction, locus: Tuple[OrbitCone, ...]) -> bool:
        in_locus = {c.ray_indices for c in locus}
        for c, rng in ranges.items():
            if near_zero[c] == (c in in_locus):
                return False
            if rng is not None and rng[0] > 0 and eps >= rng[0]:
                return False
            if near_zero[c] and rng[1] is not None and eps > rng[1]:
                return False
        return True

    eps = Fraction(1)
    history: List[Tuple[OrbitCone, ...]] = []
    for _ in range(41):
        history.append(_locus(fan, d + (sign * eps) * a))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3] \
                and certified(eps, history[-1]):
            break
        eps /= 2
    else:
        raise ArithmeticError("eps-halving did not reach a certified chamber in 40 halvings")
    notes = []
    for c, rng in ranges.items():
        if rng is None:
            notes.append(f"cone {list(c)}: face empty for every eps >= 0")
        else:
            hi = "inf" if rng[1] is None else str(rng[1])
            notes.append(f"cone {list(c)}: face nonempty for eps in [{rng[0]}, {hi}]")
    return history[-1], eps, tuple(notes)


@lru_cache(maxsize=256)
def base_loci(fan: Fan, d: TorusDivisor) -> BaseLoci:
    _require_valid(fan)
    sb = _locus(fan, d)
    if is_pseudoeffective(fan, d):
        bm, eps_m, cert_m = _stable_perturbed_locus(fan, d, +1)
    else:
        bm, eps_m, cert_m = tuple(OrbitCone(c) for c in fan.cones()), Fraction(0), ("not pseudoeffective",)
    bp, eps_p, cert_p = _stable_perturbed_locus(fan, d, -1)
    cert = tuple("B-: " + s for s in cert_m) + tuple("B+: " + s for s in cert_p)
    return BaseLoci(sb, bm, bp, eps_m, eps_p, cert)


def asymptotic_order_toric(fan: Fan, d: TorusDivisor, tau: OrbitCone) -> Fraction:
    """``ord_{V(tau)}(||D||) = min over P_D of sum_{rho in tau} (<u, v_rho> + a_rho)``."""
    if not is_pseudoeffective(fan, d):
        raise InvalidArgumentError("divisor is not pseudoeffective")
    p = divisor_polytope(fan, d)
    idx = tau.ray_indices
    return min(sum(sum(x * y for x, y in zip(u, fan.rays[i])) + d.coeffs[i] for i in idx)
               for u in p.vertices) if idx else ZERO


# -- restricted volumes and certificates ---------------------------------------


def _orbit_dim(fan: Fan, tau: OrbitCone) -> int:
    if not fan.is_cone(tau.ray_indices):
        raise InvalidArgumentError(f"{list(tau.ray_indices)} is not a cone of the fan")
    return fan.dim - len(tau.ray_indices)


def _volume_in_dim(p: RationalPolytope, k: int) -> Fraction:
    """Lattice-normalized ``k``-volume (zero when ``dim p < k``)."""
    if p.empty or affine_dim(p) < k:
        return ZERO
    return lattice_volume(p)


def _in_b_minus(fan: Fan, d: TorusDivisor, tau: OrbitCone) -> bool:
    return tau in base_loci(fan, d).b_minus


def restricted_volume_toric(fan: Fan, d: TorusDivisor, tau: OrbitCone) -> Fraction:
    """Lattice volume of ``F_tau(P_D)`` inside ``M ∩ tau^perp``.

    This is ``vol_{X|V}(D) / dim V!`` and equals the augmented version.
    """
    k = _orbit_dim(fan, tau)
    if _in_b_minus(fan, d, tau):
        raise InsideBaseLocusError(f"V({list(tau.ray_indices)}) lies in B-(D)")
    return _volume_in_dim(face(fan, d, tau), k)


@dataclass(frozen=True)
class Certificate:
    holds: bool
    reason: str
    witness: Tuple[Tuple[Fraction, ...], ...] = ()


def is_nakayama(fan: Fan, d: TorusDivisor, tau: OrbitCone) -> Certificate:
    """``V(tau)`` has dimension ``kappa(D)`` and every restriction map is
    injective, i.e. ``P_D`` lies in the face ``F_tau``."""
    kappa = iitaka_dim(fan, d)
    if kappa == MINUS_INFINITY:
        raise InvalidArgumentError("kappa(D) = -inf")
    k = _orbit_dim(fan, tau)
    if k != kappa:
        return Certificate(False, f"dim V = {k} differs from kappa = {kappa}")
    p = divisor_polytope(fan, d)
    for u in p.vertices:
        for i in tau.ray_indices:
            val = sum(x * y for x, y in zip(u, fan.rays[i])) + d.coeffs[i]
            if val != 0:
                return Certificate(False, f"monomial at vertex vanishes to order {val} along ray {i}",
                                   (u,))
    basis = tuple(tuple(Fraction(x) - Fraction(y) for x, y in zip(v, p.vertices[0]))
                  for v in p.vertices[1:])
    return Certificate(True, "P_D lies in the face F_tau", basis)


def is_positive_volume(fan: Fan, d: TorusDivisor, tau: OrbitCone) -> Certificate:
    if not is_pseudoeffective(fan, d):
        raise InvalidArgumentError("divisor is not pseudoeffective")
    kappa_nu = numerical_iitaka_dim(fan, d)
    k = _orbit_dim(fan, tau)
    if k != kappa_nu:
        return Certificate(False, f"dim V = {k} differs from kappa_nu = {kappa_nu}")
    if _in_b_minus(fan, d, tau):
        return Certificate(False, "V lies in B-(D)")
    vol = _volume_in_dim(face(fan, d, tau), k)
    if vol <= 0:
        return Certificate(False, "restricted volume is zero")
    f = face(fan, d, tau)
    return Certificate(True, f"restricted volume {vol} > 0", f.vertices)


def restricted_divisor_polytope(fan: Fan, d: TorusDivisor, tau: OrbitCone) -> RationalPolytope:
    """Polytope of ``D|_V`` for ``V = V(tau)``, placed in the affine slice
    ``<u, v_rho> = -a_rho`` (``rho`` in ``tau``) so the flag map applies.

    Only rays adjacent to ``tau`` (those in its star) constrain it."""
    _orbit_dim(fan, tau)
    tau_set = set(tau.ray_indices)
    star = sorted({i for c in fan.max_cones if tau_set <= set(c) for i in c} - tau_set)
    system = []
    for i in tau.ray_indices:
        system.append(halfspace(fan.rays[i], -d.coeffs[i]))
        system.append(halfspace([-x for x in fan.rays[i]], d.coeffs[i]))
    system += [halfspace(fan.rays[i], -d.coeffs[i]) for i in star]
    return intersect_halfspaces(system, fan.dim)


def restricted_body(fan: Fan, d: TorusDivisor, flag: InvariantFlag, codim: int) -> ConvexBody:
    """Okounkov body of ``D|_V`` on ``V = Y_codim`` in the coordinates of the
    full flag (the first ``codim`` coordinates are 0)."""
    matrix, offset = flag_map(fan, d, flag)
    p = restricted_divisor_polytope(fan, d, flag.leading_cone(codim))
    label = f"restriction to Y_{codim}"
    if p.empty:
        return ConvexBody(empty_polytope(fan.dim), "restricted", EXACT, label)
    return ConvexBody(affine_map(p, matrix, offset), "restricted", EXACT, label)


# -- toric surfaces as numerical surface models --------------------------------


@dataclass(frozen=True)
class ToricSurface:
    """A smooth complete toric surface as a numerical model.

    The basis of N^1 is the ray divisors outside the first maximal cone;
    curve ``"D<i>"`` is the invariant curve of ray ``i``.
    """

    fan: Fan
    model: SurfaceModel
    basis_rays: Tuple[int, ...]
    ray_classes: Tuple[Tuple[Fraction, ...], ...]

    def divisor_class(self, d: TorusDivisor) -> Tuple[Fraction, ...]:
        out = [ZERO] * self.model.rank
        for a, cls in zip(d.coeffs, self.ray_classes):
            out = [x + a * y for x, y in zip(out, cls)]
        return tuple(out)

    def flag(self, flag: InvariantFlag) -> SurfaceFlag:
        _check_flag(self.fan, flag)
        first, second = flag.ray_order
        return SurfaceFlag.at(f"D{first}", {f"D{second}": 1})


def _self_intersection(fan: Fan, i: int) -> int:
    nbrs = sorted({j for c in fan.max_cones if i in c for j in c if j != i})
    if len(nbrs) != 2:
        raise InvalidArgumentError(f"ray {i} does not have two neighbours")
    v = fan.rays[i]
    s = [x + y for x, y in zip(fan.rays[nbrs[0]], fan.rays[nbrs[1]])]
    k = next(j for j in range(2) if v[j] != 0)
    b = Fraction(s[k], v[k])
    if [b * x for x in v] != s:
        raise InvalidArgumentError("neighbour sum is not a multiple of the ray")
    return -int(b)


def surface_model_from_fan(fan: Fan) -> ToricSurface:
    _require_valid(fan)
    if fan.dim != 2:
        raise InvalidArgumentError("surface models need a 2-dimensional fan")
    sigma = fan.max_cones[0]
    basis = tuple(i for i in range(fan.num_rays) if i not in sigma)
    dual = inverse([fan.rays[i] for i in sigma])  # columns: dual basis u_j
    classes = []
    for i in range(fan.num_rays):
        if i in basis:
            classes.append(tuple(Fraction(int(i == b)) for b in basis))
        else:
            j = sigma.index(i)
            u = [dual[r][j] for r in range(2)]
            classes.append(tuple(-sum(x * y for x, y in zip(u, fan.rays[b])) for b in basis))

    def ray_pair(i: int, j: int) -> int:
        if i == j:
            return _self_intersection(fan, i)
        return 1 if tuple(sorted((i, j))) in fan.max_cones else 0

    form = [[ray_pair(i, j) for j in basis] for i in basis]
    rho = len(basis)
    gens = []
    for cls in classes:
        if cls not in gens:
            gens.append(cls)
    curves = [NamedCurve(f"D{i}", cls) for i, cls in enumerate(classes)]

    def pair(x, y):
        return sum(x[i] * form[i][j] * y[j] for i in range(rho) for j in range(rho))

    rows = [[pair(g, [Fraction(int(r == c)) for c in range(rho)]) for r in range(rho)] for g in gens]
    witness = feasible_free(rows, [1] * len(gens), rho)
    if witness is None:
        raise InvalidArgumentError("no ample class: the surface is not projective")
    model = SurfaceModel.build(form, gens, curves, witness)
    return ToricSurface(fan, model, basis, tuple(classes))


__all__ = [
    "BaseLoci", "Certificate", "Fan", "FanReport", "InvariantFlag", "MINUS_INFINITY",
    "OrbitCone", "ToricSurface", "TorusDivisor", "anticanonical", "asymptotic_order_toric",
    "base_loci", "divisor_polytope", "face", "flag_map", "iitaka_dim", "is_nakayama",
    "is_positive_volume", "is_pseudoeffective", "numerical_iitaka_dim", "okounkov_body_toric",
    "principal_shift", "restricted_body", "restricted_divisor_polytope",
    "restricted_volume_toric", "sections_count", "surface_model_from_fan",
    "toric_valuation_set", "validate_fan",
]
