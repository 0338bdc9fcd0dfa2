"""Surfaces given by numerical data: an intersection form on N^1 and a
finitely generated effective cone.

Everything is exact. The Zariski decomposition is computed by the support
iteration (start from the curves the class meets negatively, solve the Gram
system, add any curve the positive part still meets negatively, repeat). The
limiting Okounkov body with respect to a curve flag is computed by a chamber
walk along ``D - tC``: on every chamber the support of the negative part is
constant and every quantity is affine in ``t``, so breakpoints are exact.

To find the chamber starting at ``t0`` the decomposition is run once over the
ordered field ``Q(delta)`` truncated to first order, i.e. for the class
``D - (t0 + delta) C`` with ``delta`` a positive infinitesimal. Its support is
the support on the open chamber and its first-order part is the slope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    InsideBaseLocusError,
    InvalidArgumentError,
    ModelInconsistentError,
    NotPseudoeffectiveError,
    UnboundedLPError,
)
from .exactgeom import convex_hull, empty_polytope, in_cone, maximize
from .exactgeom.linalg import inertia, rank, solve
from .exactgeom.rational import as_rational
from .semigroup import EXACT, ConvexBody

ClassVector = Tuple[Fraction, ...]
ZERO = Fraction(0)


def class_vector(coords: Sequence) -> ClassVector:
    return tuple(as_rational(x) for x in coords)


@dataclass(frozen=True)
class NamedCurve:
    name: str
    cls: ClassVector


@dataclass(frozen=True)
class SurfaceModel:
    """Numerical surface: pairing on a basis of N^1, effective-cone
    generators, the irreducible curves that may carry negative parts, and an
    ample class.

    ``curves`` must contain every curve of negative self-intersection; curves
    of nonnegative self-intersection may be listed too (they are never part
    of a negative support but can be used as flag curves by name).
    """

    rank: int
    form: Tuple[Tuple[Fraction, ...], ...]
    eff_generators: Tuple[ClassVector, ...]
    curves: Tuple[NamedCurve, ...]
    ample_witness: ClassVector

    @classmethod
    def build(cls, form, eff_generators, curves, ample_witness) -> "SurfaceModel":
        form = tuple(class_vector(row) for row in form)
        rho = len(form)
        named = []
        for c in curves:
            if isinstance(c, NamedCurve):
                named.append(c)
            else:
                name, coords = c
                named.append(NamedCurve(str(name), class_vector(coords)))
        model = cls(rho, form, tuple(class_vector(g) for g in eff_generators),
                    tuple(named), class_vector(ample_witness))
        model._check_shapes()
        return model

    def _check_shapes(self) -> None:
        rho = self.rank
        if any(len(row) != rho for row in self.form):
            raise InvalidArgumentError("intersection form must be square")
        vectors = list(self.eff_generators) + [c.cls for c in self.curves] + [self.ample_witness]
        if any(len(v) != rho for v in vectors):
            raise InvalidArgumentError(f"class vectors must have length {rho}")
        names = [c.name for c in self.curves]
        if len(set(names)) != len(names):
            raise InvalidArgumentError("curve names must be unique")

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        return sum((Fraction(x[i]) * self.form[i][j] * Fraction(y[j])
                    for i in range(self.rank) for j in range(self.rank) if x[i] and y[j]), ZERO)

    def curve_index(self, name: str) -> int:
        for i, c in enumerate(self.curves):
            if c.name == name:
                return i
        raise InvalidArgumentError(f"no curve named {name!r}")

    def curve_with_class(self, cls: Sequence) -> Optional[int]:
        cls = class_vector(cls)
        for i, c in enumerate(self.curves):
            if c.cls == cls:
                return i
        return None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: Tuple[str, ...]


def validate_model(model: SurfaceModel) -> ValidationReport:
    problems: List[str] = []
    for i in range(model.rank):
        for j in range(model.rank):
            if model.form[i][j] != model.form[j][i]:
                problems.append("intersection form is not symmetric")
                break
        else:
            continue
        break
    pos, neg, zero = inertia(model.form)
    if (pos, neg, zero) != (1, model.rank - 1, 0):
        problems.append(f"signature ({pos}, {neg}, {zero}) violates the Hodge index theorem; "
                        f"expected (1, {model.rank - 1}, 0)")
    for g in model.eff_generators:
        if model.pair(model.ample_witness, g) <= 0:
            problems.append(f"ample witness is not positive on generator {_fmt(g)}")
    curve_classes = {c.cls for c in model.curves}
    for g in model.eff_generators:
        if model.pair(g, g) < 0 and g not in curve_classes:
            problems.append(f"negative generator {_fmt(g)} is missing from the curve list")
    if model.eff_generators and rank(model.eff_generators) != model.rank:
        problems.append("effective generators do not span N^1")
    return ValidationReport(not problems, tuple(problems))


def _fmt(v: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def is_pseudoeffective(model: SurfaceModel, d: Sequence) -> bool:
    return in_cone(class_vector(d), model.eff_generators) is not None


# -- first-order arithmetic over Q(delta) ------------------------------------
# A value is a pair (x0, x1) meaning x0 + x1*delta; comparisons are lexicographic.


def _sign(x0: Fraction, x1: Fraction) -> int:
    if x0 != 0:
        return 1 if x0 > 0 else -1
    if x1 != 0:
        return 1 if x1 > 0 else -1
    return 0


@dataclass(frozen=True)
class _Decomp:
    support: Tuple[int, ...]
    coeffs0: Tuple[Fraction, ...]
    coeffs1: Tuple[Fraction, ...]
    p0: ClassVector
    p1: ClassVector


def _decompose(model: SurfaceModel, d0: Sequence[Fraction], d1: Sequence[Fraction]) -> _Decomp:
    rho = model.rank
    curves = model.curves
    dc0 = [model.pair(d0, c.cls) for c in curves]
    dc1 = [model.pair(d1, c.cls) for c in curves]
    support: List[int] = []
    c0: List[Fraction] = []
    c1: List[Fraction] = []
    while True:
        if support:
            gram = [[model.pair(curves[i].cls, curves[j].cls) for j in support] for i in support]
            try:
                c0 = solve(gram, [dc0[i] for i in support])
                c1 = solve(gram, [dc1[i] for i in support])
            except ZeroDivisionError:
                raise ModelInconsistentError("singular Gram matrix on the negative support") from None
        p0 = list(d0)
        p1 = list(d1)
        for k, i in enumerate(support):
            for r in range(rho):
                p0[r] -= c0[k] * curves[i].cls[r]
                p1[r] -= c1[k] * curves[i].cls[r]
        new = [i for i in range(len(curves)) if i not in support
               and _sign(model.pair(p0, curves[i].cls), model.pair(p1, curves[i].cls)) < 0]
        if not new:
            break
        for i in new:
            if model.pair(curves[i].cls, curves[i].cls) >= 0:
                raise ModelInconsistentError(
                    f"curve {curves[i].name} has nonnegative self-intersection but the "
                    "positive part meets it negatively")
        support = sorted(support + new)
    if support:
        gram = [[model.pair(curves[i].cls, curves[j].cls) for j in support] for i in support]
        pos, neg, zero = inertia(gram)
        if neg != len(support):
            raise ModelInconsistentError("Gram matrix of the negative support is not negative definite")
        for k, i in enumerate(support):
            if _sign(c0[k], c1[k]) <= 0:
                raise ModelInconsistentError(
                    f"nonpositive coefficient for {curves[i].name}; the curve list is incomplete")
    for g in model.eff_generators:
        if _sign(model.pair(p0, g), model.pair(p1, g)) < 0:
            raise ModelInconsistentError(
                f"positive part is negative on generator {_fmt(g)}; the curve list is incomplete")
    return _Decomp(tuple(support), tuple(c0), tuple(c1), tuple(p0), tuple(p1))


# -- Zariski decomposition -----------------------------------------------------


@dataclass(frozen=True)
class ZariskiPair:
    """``D = P + N`` with ``N = sum coeff * curve``; support sorted by name."""

    positive: ClassVector
    negative_support: Tuple[Tuple[str, Fraction], ...]

    def coefficient(self, name: str) -> Fraction:
        return dict(self.negative_support).get(name, ZERO)

    def negative_class(self, model: SurfaceModel) -> ClassVector:
        n = [ZERO] * model.rank
        for name, c in self.negative_support:
            cls = model.curves[model.curve_index(name)].cls
            n = [a + c * b for a, b in zip(n, cls)]
        return tuple(n)


def zariski_decompose(model: SurfaceModel, d: Sequence) -> ZariskiPair:
    d = class_vector(d)
    if not is_pseudoeffective(model, d):
        raise NotPseudoeffectiveError(f"class {_fmt(d)} is not pseudoeffective")
    dec = _decompose(model, d, [ZERO] * model.rank)
    support = sorted((model.curves[i].name, c) for i, c in zip(dec.support, dec.coeffs0))
    return ZariskiPair(dec.p0, tuple(support))


def volume(model: SurfaceModel, d: Sequence) -> Fraction:
    """``vol(D) = P^2`` for a pseudoeffective class."""
    p = zariski_decompose(model, d).positive
    return model.pair(p, p)


def asymptotic_order(model: SurfaceModel, d: Sequence, curve: Union[str, int]) -> Fraction:
    """``ord_E(||D||)``: the coefficient of ``E`` in the negative part."""
    name = model.curves[curve].name if isinstance(curve, int) else curve
    model.curve_index(name)
    return zariski_decompose(model, d).coefficient(name)


def divisorial_b_minus(model: SurfaceModel, d: Sequence) -> List[str]:
    return [name for name, _ in zariski_decompose(model, d).negative_support]


def mu_threshold(model: SurfaceModel, d: Sequence, c: Sequence) -> Fraction:
    """Largest ``s >= 0`` with ``D - sC`` pseudoeffective."""
    d = class_vector(d)
    c = class_vector(c)
    if not is_pseudoeffective(model, d):
        raise NotPseudoeffectiveError(f"class {_fmt(d)} is not pseudoeffective")
    gens = model.eff_generators
    # variables: lambda_1..lambda_k, s ; sum lambda_i G_i + s C = D
    a_eq = [[g[r] for g in gens] + [c[r]] for r in range(model.rank)]
    objective = [0] * len(gens) + [1]
    try:
        res = maximize(objective, a_eq, d)
    except UnboundedLPError:
        raise InvalidArgumentError("threshold is unbounded: C lies in the recession of the "
                                   "effective cone, which a valid model excludes") from None
    return res.value


# -- flags and limiting bodies -------------------------------------------------


@dataclass(frozen=True)
class SurfaceFlag:
    """``S ⊇ C ∋ x``.

    ``curve`` names a model curve; alternatively ``curve_class`` gives a class
    whose general member is the flag curve. ``incidence`` maps curve names to
    local intersection multiplicities with ``C`` at ``x``; None means a
    general point.
    """

    curve: Optional[str] = None
    curve_class: Optional[ClassVector] = None
    incidence: Optional[Tuple[Tuple[str, int], ...]] = None

    @classmethod
    def general(cls, curve: Optional[str] = None, curve_class=None) -> "SurfaceFlag":
        return cls(curve, None if curve_class is None else class_vector(curve_class), None)

    @classmethod
    def at(cls, curve: str, incidence: Mapping[str, int]) -> "SurfaceFlag":
        return cls(curve, None, tuple(sorted((str(k), int(v)) for k, v in incidence.items())))

    @property
    def label(self) -> str:
        base = self.curve if self.curve is not None else f"general member of {_fmt(self.curve_class)}"
        if self.incidence is None:
            return f"{base}, general point"
        return base + ", point " + ", ".join(f"{k}:{v}" for k, v in self.incidence)


def _resolve_flag(model: SurfaceModel, flag: SurfaceFlag) -> Tuple[ClassVector, Optional[int], Dict[int, int]]:
    if flag.curve is not None:
        idx = model.curve_index(flag.curve)
        c = model.curves[idx].cls
    elif flag.curve_class is not None:
        c = class_vector(flag.curve_class)
        if len(c) != model.rank:
            raise InvalidArgumentError(f"flag class must have length {model.rank}")
        idx = model.curve_with_class(c)
        if idx is not None and model.pair(c, c) >= 0:
            idx = None  # a moving class: its general member is not a listed curve
    else:
        raise InvalidArgumentError("flag needs a curve name or a curve class")
    if all(x == 0 for x in c):
        raise InvalidArgumentError("flag curve class is zero")
    incidence: Dict[int, int] = {}
    for name, mult in (flag.incidence or ()):
        j = model.curve_index(name)
        if mult < 0:
            raise InvalidArgumentError(f"incidence for {name} is negative")
        if j == idx:
            continue
        if mult > 0 and model.pair(c, model.curves[j].cls) < mult:
            raise InvalidArgumentError(
                f"incidence {mult} of {name} exceeds its intersection number with the flag curve")
        incidence[j] = mult
    return c, idx, incidence


@dataclass(frozen=True)
class PiecewiseLinearFn:
    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        bp = self.breakpoints
        if not bp[0] <= t <= bp[-1]:
            raise InvalidArgumentError(f"{t} outside [{bp[0]}, {bp[-1]}]")
        for k in range(len(bp) - 1):
            if bp[k] <= t <= bp[k + 1]:
                lam = (t - bp[k]) / (bp[k + 1] - bp[k])
                return self.values[k] + lam * (self.values[k + 1] - self.values[k])
        return self.values[0]

    def slopes(self) -> List[Fraction]:
        bp, v = self.breakpoints, self.values
        return [(v[k + 1] - v[k]) / (bp[k + 1] - bp[k]) for k in range(len(bp) - 1)]


@dataclass(frozen=True)
class Chamber:
    """On ``[start, end]``: ``N_t = sum (c0 + (t - start) c1) * curve``."""

    start: Fraction
    end: Fraction
    support: Tuple[str, ...]
    coeffs0: Tuple[Fraction, ...]
    coeffs1: Tuple[Fraction, ...]


@dataclass(frozen=True)
class SurfaceBody:
    body: ConvexBody
    a: Optional[Fraction]
    mu: Optional[Fraction]
    alpha: Optional[PiecewiseLinearFn]
    beta: Optional[PiecewiseLinearFn]
    chambers: Tuple[Chamber, ...] = ()
    diagnostics: Tuple[str, ...] = field(default=(), compare=False)


def limiting_body_surface(model: SurfaceModel, d: Sequence, flag: SurfaceFlag) -> SurfaceBody:
    d = class_vector(d)
    c, cidx, incidence = _resolve_flag(model, flag)
    if not is_pseudoeffective(model, d):
        body = ConvexBody(empty_polytope(2), "limiting", EXACT, flag.label)
        return SurfaceBody(body, None, None, None, None, (), ("class is not pseudoeffective",))
    zero = [ZERO] * model.rank
    base = _decompose(model, d, zero)
    a = ZERO
    if cidx is not None and cidx in base.support:
        a = base.coeffs0[base.support.index(cidx)]
    mu = mu_threshold(model, d, c)
    minus_c = [-x for x in c]
    diagnostics: List[str] = []

    def alpha_of(dec_support, coeffs) -> Fraction:
        return sum((coeffs[k] * incidence.get(i, 0)
                    for k, i in enumerate(dec_support) if i != cidx), ZERO)

    chambers: List[Chamber] = []
    points: List[Tuple[Fraction, Fraction, Fraction]] = []  # (t, alpha, beta)
    if a == mu:
        dec = _decompose(model, [x - a * y for x, y in zip(d, c)], zero)
        al = alpha_of(dec.support, dec.coeffs0)
        points.append((a, al, al + model.pair(c, dec.p0)))
    t0 = a
    probes = [cur.cls for cur in model.curves] + list(model.eff_generators)
    while t0 < mu:
        dt = [x - t0 * y for x, y in zip(d, c)]
        dec = _decompose(model, dt, minus_c)
        t1 = mu
        for k in range(len(dec.support)):
            if dec.coeffs1[k] < 0:
                t1 = min(t1, t0 - dec.coeffs0[k] / dec.coeffs1[k])
        for x in probes:
            v0, v1 = model.pair(dec.p0, x), model.pair(dec.p1, x)
            if v1 < 0:
                t1 = min(t1, t0 - v0 / v1)
        if t1 <= t0:
            raise ModelInconsistentError("chamber walk failed to advance")
        names = tuple(model.curves[i].name for i in dec.support)
        chambers.append(Chamber(t0, t1, names, dec.coeffs0, dec.coeffs1))
        if cidx is not None and cidx in dec.support:
            k = dec.support.index(cidx)
            diagnostics.append(
                f"C-component: N_t contains {model.curves[cidx].name} with coefficient "
                f"{dec.coeffs0[k]} + {dec.coeffs1[k]}*(t - {t0}) on ({t0}, {t1}); "
                "excluded from alpha")
        for t in (t0, t1):
            h = t - t0
            coeffs = [x0 + h * x1 for x0, x1 in zip(dec.coeffs0, dec.coeffs1)]
            p = [x0 + h * x1 for x0, x1 in zip(dec.p0, dec.p1)]
            al = alpha_of(dec.support, coeffs)
            be = al + model.pair(c, p)
            if points and points[-1][0] == t:
                if points[-1][1:] != (al, be):
                    diagnostics.append(f"alpha/beta jump at t = {t}; closure taken")
                    prev = points[-1]
                    points[-1] = (t, min(prev[1], al), max(prev[2], be))
            else:
                points.append((t, al, be))
        t0 = t1
    ts = tuple(p[0] for p in points)
    alpha = PiecewiseLinearFn(ts, tuple(p[1] for p in points))
    beta = PiecewiseLinearFn(ts, tuple(p[2] for p in points))
    _check_shape(alpha, beta)
    verts = [(t, al) for t, al, _ in points] + [(t, be) for t, _, be in points]
    body = ConvexBody(convex_hull(verts, 2), "limiting", EXACT, flag.label, tuple(diagnostics))
    return SurfaceBody(body, a, mu, alpha, beta, tuple(chambers), tuple(diagnostics))


def _check_shape(alpha: PiecewiseLinearFn, beta: PiecewiseLinearFn) -> None:
    if any(b < a for a, b in zip(alpha.values, beta.values)):
        raise ModelInconsistentError("beta < alpha somewhere on [a, mu]")
    sa, sb = alpha.slopes(), beta.slopes()
    if any(x > y for x, y in zip(sa, sa[1:])):
        raise ModelInconsistentError("alpha is not convex")
    if any(x < y for x, y in zip(sb, sb[1:])):
        raise ModelInconsistentError("beta is not concave")


def fiber_length(sb: SurfaceBody, t) -> Fraction:
    """Length of the vertical fiber of the body over ``x1 = t``."""
    if sb.alpha is None:
        raise InvalidArgumentError("empty body")
    return sb.beta(t) - sb.alpha(t)


def _flag_for(model: SurfaceModel, c) -> Tuple[SurfaceFlag, ClassVector, Optional[int]]:
    if isinstance(c, str):
        idx = model.curve_index(c)
        return SurfaceFlag.general(c), model.curves[idx].cls, idx
    cls = class_vector(c)
    flag = SurfaceFlag.general(curve_class=cls)
    _, idx, _ = _resolve_flag(model, flag)
    return flag, cls, idx


def restricted_vol_plus(model: SurfaceModel, d: Sequence, c) -> Fraction:
    """``vol+_{S|C}(D) = C.D - C.N`` for a curve ``C`` outside ``B-(D)``.

    ``c`` is a curve name or a class (meaning a general member of it).
    """
    d = class_vector(d)
    _, cls, idx = _flag_for(model, c)
    zp = zariski_decompose(model, d)
    if idx is not None and zp.coefficient(model.curves[idx].name) > 0:
        raise InsideBaseLocusError(f"flag curve {model.curves[idx].name} lies in B-(D)")
    return model.pair(cls, d) - model.pair(cls, zp.negative_class(model))


def jow_probe(model: SurfaceModel, d: Sequence, flags: Sequence) -> Tuple[Fraction, ...]:
    """Reconstruct ``(C_i . D)_i`` from bodies and asymptotic orders only.

    For each flag curve ``C`` the fiber length of the limiting body over
    ``x1 = 0`` is ``vol+_{S|C}(D)``; adding back ``sum ord_E(||D||) C.E``
    recovers ``C.D``. The flags must span N^1, so equal probes mean
    numerically equivalent classes.
    """
    d = class_vector(d)
    resolved = [_flag_for(model, c) for c in flags]
    if rank([cls for _, cls, _ in resolved]) != model.rank:
        raise InvalidArgumentError("probe curves do not span N^1")
    zp = zariski_decompose(model, d)
    probe = []
    for flag, cls, idx in resolved:
        sb = limiting_body_surface(model, d, flag)
        if sb.a != 0:
            raise InsideBaseLocusError(f"probe curve {flag.label} lies in B-(D)")
        vol_plus = fiber_length(sb, sb.a)
        correction = sum((coef * model.pair(cls, model.curves[model.curve_index(name)].cls)
                          for name, coef in zp.negative_support), ZERO)
        probe.append(vol_plus + correction)
    return tuple(probe)
