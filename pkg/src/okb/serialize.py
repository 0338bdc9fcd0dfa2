"""JSON encoding of every value the toolkit exchanges.

Rationals are always written as strings (``"3"``, ``"-1/2"``); integers and
``"p/q"`` strings are accepted on input, floats never are. Decoders raise
InputError on malformed data and re-check polytope invariants so a decoded
value is always a valid one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, List, Mapping, Sequence

from .errors import InputError, OkbError
from .exactgeom import RationalPolytope, convex_hull, empty_polytope, halfspace
from .exactgeom.rational import QuadraticValue, as_rational, format_rational
from .semigroup import BODY_KINDS, ConvexBody, Exactness, GradedValuationSet
from .surface import NamedCurve, PiecewiseLinearFn, SurfaceFlag, SurfaceModel, ZariskiPair
from .toric import MINUS_INFINITY, Fan, InvariantFlag, OrbitCone, TorusDivisor

SCHEMA_VERSION = "1.0"


# -- scalars -------------------------------------------------------------------


def q(x) -> str:
    if isinstance(x, QuadraticValue):
        return x.to_json()
    if x == MINUS_INFINITY:
        return "-inf"
    return format_rational(Fraction(x))


def qlist(v: Sequence) -> List[str]:
    return [q(x) for x in v]


def _need(obj: Any, key: str, kind=None):
    if not isinstance(obj, Mapping):
        raise InputError(f"expected a JSON object, got {type(obj).__name__}")
    if key not in obj:
        raise InputError(f"missing key {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise InputError(f"key {key!r} has the wrong type")
    return value


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{what} must be an integer")
    return x


def _rationals(v, what: str) -> List[Fraction]:
    if not isinstance(v, list):
        raise InputError(f"{what} must be a list")
    return [as_rational(x) for x in v]


# -- polytopes and bodies ------------------------------------------------------


def polytope_to_json(p: RationalPolytope) -> Dict[str, Any]:
    return {
        "ambient_dim": p.ambient_dim,
        "vertices": [qlist(v) for v in p.vertices],
        "halfspaces": [{"normal": list(h.normal), "bound": q(h.bound)} for h in p.halfspaces],
        "empty": p.empty,
    }


def polytope_from_json(obj: Any) -> RationalPolytope:
    n = _int(_need(obj, "ambient_dim"), "ambient_dim")
    if obj.get("empty", False):
        return empty_polytope(n)
    verts = [_rationals(v, "vertex") for v in _need(obj, "vertices", list)]
    if not verts:
        raise InputError("a nonempty polytope needs vertices")
    try:
        p = convex_hull(verts, n)
    except OkbError as exc:
        raise InputError(str(exc)) from None
    if "halfspaces" in obj:
        given = []
        for h in _need(obj, "halfspaces", list):
            normal = [_int(x, "normal entry") for x in _need(h, "normal", list)]
            given.append(halfspace(normal, as_rational(_need(h, "bound"))))
        if sorted(given) != list(p.halfspaces):
            raise InputError("halfspaces do not describe the hull of the vertices")
    if sorted({tuple(v) for v in verts}) != list(p.vertices):
        raise InputError("vertex list contains points that are not vertices of its hull")
    return p


def exactness_to_json(e: Exactness) -> Dict[str, Any]:
    return {"kind": "exact"} if e.is_exact else {"kind": "truncated", "level": e.level}


def exactness_from_json(obj: Any) -> Exactness:
    kind = _need(obj, "kind", str)
    if kind == "exact":
        return Exactness()
    if kind == "truncated":
        return Exactness.truncated(_int(_need(obj, "level"), "level"))
    raise InputError(f"unknown exactness {kind!r}")


def body_to_json(b: ConvexBody) -> Dict[str, Any]:
    return {
        "kind": b.kind,
        "exactness": exactness_to_json(b.exactness),
        "flag_label": b.flag_label,
        "polytope": polytope_to_json(b.polytope),
    }


def body_from_json(obj: Any) -> ConvexBody:
    kind = _need(obj, "kind", str)
    if kind not in BODY_KINDS:
        raise InputError(f"unknown body kind {kind!r}")
    return ConvexBody(polytope_from_json(_need(obj, "polytope")), kind,
                      exactness_from_json(_need(obj, "exactness")),
                      str(obj.get("flag_label", "")))


def pl_to_json(f: PiecewiseLinearFn) -> List[Dict[str, str]]:
    return [{"t": q(t), "value": q(v)} for t, v in zip(f.breakpoints, f.values)]


# -- semigroup -----------------------------------------------------------------


def valuation_set_from_json(obj: Any) -> GradedValuationSet:
    n = _int(_need(obj, "ambient_dim"), "ambient_dim")
    entries = []
    for e in _need(obj, "entries", list):
        level = _int(_need(e, "level"), "level")
        vec = [_int(x, "valuation entry") for x in _need(e, "vector", list)]
        entries.append((level, vec))
    try:
        return GradedValuationSet(n, entries)
    except OkbError as exc:
        raise InputError(str(exc)) from None


def valuation_set_to_json(g: GradedValuationSet) -> Dict[str, Any]:
    return {"ambient_dim": g.ambient_dim,
            "entries": [{"level": m, "vector": list(v)} for m, v in g.entries]}


# -- toric ---------------------------------------------------------------------


def fan_from_json(obj: Any) -> Fan:
    _int(_need(obj, "dim"), "dim")
    rays = [[_int(x, "ray entry") for x in r] for r in _need(obj, "rays", list)]
    cones = [[_int(i, "cone index") for i in c] for c in _need(obj, "max_cones", list)]
    try:
        fan = Fan.build(rays, cones)
    except OkbError as exc:
        raise InputError(str(exc)) from None
    if fan.dim != obj["dim"]:
        raise InputError("dim does not match the ray length")
    return fan


def fan_to_json(f: Fan) -> Dict[str, Any]:
    return {"dim": f.dim, "rays": [list(r) for r in f.rays], "max_cones": [list(c) for c in f.max_cones]}


def divisor_from_json(obj: Any, fan: Fan) -> TorusDivisor:
    coeffs = _need(obj, "coeffs")
    if not isinstance(coeffs, (Mapping, list)):
        raise InputError("coeffs must be an object or a list")
    try:
        if isinstance(coeffs, Mapping):
            coeffs = {int(k): v for k, v in coeffs.items()}
        return TorusDivisor.build(fan, coeffs)
    except (OkbError, ValueError) as exc:
        raise InputError(str(exc)) from None


def divisor_to_json(d: TorusDivisor) -> Dict[str, Any]:
    return {"coeffs": {str(i): q(a) for i, a in enumerate(d.coeffs) if a != 0}}


def toric_flag_from_json(obj: Any) -> InvariantFlag:
    return InvariantFlag(tuple(_int(i, "ray index") for i in _need(obj, "ray_order", list)))


def toric_flag_to_json(f: InvariantFlag) -> Dict[str, Any]:
    return {"ray_order": list(f.ray_order)}


def orbit_cone_from_json(obj: Any) -> OrbitCone:
    return OrbitCone.of(_int(i, "ray index") for i in _need(obj, "ray_indices", list))


def orbit_cone_to_json(c: OrbitCone) -> Dict[str, Any]:
    return {"ray_indices": list(c.ray_indices)}


# -- surfaces ------------------------------------------------------------------


def model_from_json(obj: Any) -> SurfaceModel:
    rho = _int(_need(obj, "rank"), "rank")
    form = [_rationals(row, "form row") for row in _need(obj, "form", list)]
    gens = [_rationals(g, "generator") for g in _need(obj, "eff_generators", list)]
    curves = []
    for c in _need(obj, "curves", list):
        curves.append(NamedCurve(str(_need(c, "name", str)), tuple(_rationals(_need(c, "class"), "curve class"))))
    ample = _rationals(_need(obj, "ample_witness"), "ample_witness")
    try:
        model = SurfaceModel.build(form, gens, curves, ample)
    except OkbError as exc:
        raise InputError(str(exc)) from None
    if model.rank != rho:
        raise InputError("rank does not match the form")
    return model


def model_to_json(m: SurfaceModel) -> Dict[str, Any]:
    return {
        "rank": m.rank,
        "form": [qlist(r) for r in m.form],
        "eff_generators": [qlist(g) for g in m.eff_generators],
        "curves": [{"name": c.name, "class": qlist(c.cls)} for c in m.curves],
        "ample_witness": qlist(m.ample_witness),
    }


def class_from_json(obj: Any) -> List[Fraction]:
    """A divisor class: ``{"class": [...]}`` or a bare list."""
    if isinstance(obj, list):
        return _rationals(obj, "class")
    return _rationals(_need(obj, "class"), "class")


def surface_flag_from_json(obj: Any) -> SurfaceFlag:
    if not isinstance(obj, Mapping):
        raise InputError("surface flag must be a JSON object")
    point = obj.get("point", "general")
    if "curve" in obj:
        curve = _need(obj, "curve", str)
        if point == "general":
            return SurfaceFlag.general(curve)
        inc = _need(point, "incidence", dict)
        return SurfaceFlag.at(curve, {str(k): _int(v, "incidence") for k, v in inc.items()})
    if "class" in obj:
        if point != "general":
            raise InputError("a flag on a general member of a class must use a general point")
        return SurfaceFlag.general(curve_class=class_from_json(obj))
    raise InputError("surface flag needs 'curve' or 'class'")


def surface_flag_to_json(f: SurfaceFlag) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    if f.curve is not None:
        out["curve"] = f.curve
    else:
        out["class"] = qlist(f.curve_class)
    out["point"] = "general" if f.incidence is None else {"incidence": dict(f.incidence)}
    return out


def zariski_to_json(z: ZariskiPair) -> Dict[str, Any]:
    return {"positive": qlist(z.positive),
            "negative_support": [{"curve": n, "coefficient": q(c)} for n, c in z.negative_support]}
