"""``okb``: batch front-end for the toric, surface and semigroup computations.

Every run writes one JSON document ``{schema_version, command, result,
diagnostics}`` with sorted keys. Exit status: 0 success, 1 bad input
(unreadable file, schema violation, inconsistent arguments), 2 domain
refusal (empty body where one is not allowed, flag curve inside the
restricted base locus, non-pseudoeffective class, inconsistent model, a
failed cross-check).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import serialize as ser
from . import surface, toric
from .errors import DimensionMismatchError, InputError, InvalidArgumentError, OkbError
from .exactgeom import affine_dim, volume
from .semigroup import body_from_valuations, truncation_report
from .svg import render_svg

COMMANDS = (
    "validate", "toric-body", "toric-baseloci", "toric-certify", "surface-zariski",
    "surface-body", "surface-volplus", "semigroup-body", "xcheck",
)


class DomainFailure(OkbError):
    """A computation ran but its verdict is a failure (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="okb", description="Okounkov bodies of toric divisors and surface classes.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--in", dest="inputs", action="append", required=True, metavar="FILE",
                   help="input file; repeat to process a batch")
    p.add_argument("--divisor", metavar="FILE", help="torus divisor or surface class")
    p.add_argument("--flag", metavar="FILE", help="toric flag or surface flag")
    p.add_argument("--out", metavar="PATH", help="output file (a directory for batches)")
    p.add_argument("--svg", metavar="FILE", help="SVG picture of a 2-dimensional body")
    p.add_argument("--kind", choices=("valuative", "limiting"), default="valuative")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    return p


def _load(path: Optional[str], what: str) -> Any:
    if path is None:
        raise InputError(f"--{what} is required for this command")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


class _Run:
    def __init__(self, args, path: str):
        self.args = args
        self.path = path
        self.diagnostics: List[str] = []
        self.svg_body = None

    def data(self):
        return _load(self.path, "in")

    def fan(self) -> toric.Fan:
        return ser.fan_from_json(self.data())

    def toric_divisor(self, fan) -> toric.TorusDivisor:
        return ser.divisor_from_json(_load(self.args.divisor, "divisor"), fan)

    def toric_flag(self) -> Optional[toric.InvariantFlag]:
        if self.args.flag is None:
            return None
        return ser.toric_flag_from_json(_load(self.args.flag, "flag"))

    def model(self) -> surface.SurfaceModel:
        return ser.model_from_json(self.data())

    def surface_class(self):
        return ser.class_from_json(_load(self.args.divisor, "divisor"))

    def surface_flag(self) -> surface.SurfaceFlag:
        return ser.surface_flag_from_json(_load(self.args.flag, "flag"))


# -- commands ------------------------------------------------------------------


def _validate(run: _Run) -> Dict[str, Any]:
    data = run.data()
    if isinstance(data, dict) and "rays" in data:
        rep = toric.validate_fan(ser.fan_from_json(data))
        return {"type": "fan", "ok": rep.ok, "smooth": rep.smooth, "complete": rep.complete,
                "face_compatible": rep.face_compatible, "problems": list(rep.problems)}
    if isinstance(data, dict) and "form" in data:
        rep = surface.validate_model(ser.model_from_json(data))
        return {"type": "surface-model", "ok": rep.ok, "problems": list(rep.problems)}
    if isinstance(data, dict) and "entries" in data:
        g = ser.valuation_set_from_json(data)
        return {"type": "valuation-set", "ok": True, "problems": [],
                "entries": len(g.entries), "levels": g.levels}
    if isinstance(data, dict) and "polytope" in data:
        ser.body_from_json(data)
        return {"type": "body", "ok": True, "problems": []}
    if isinstance(data, dict) and "ambient_dim" in data:
        ser.polytope_from_json(data)
        return {"type": "polytope", "ok": True, "problems": []}
    raise InputError("unrecognised input: expected a fan, surface model, valuation set, body or polytope")


def _checked_fan(run: _Run) -> toric.Fan:
    fan = run.fan()
    rep = toric.validate_fan(fan)
    if not rep.ok:
        raise InputError("invalid fan: " + "; ".join(rep.problems))
    return fan


def _toric_body(run: _Run) -> Dict[str, Any]:
    fan = _checked_fan(run)
    d = run.toric_divisor(fan)
    flag = run.toric_flag()
    if flag is None:
        raise InputError("--flag is required for toric-body")
    body = toric.okounkov_body_toric(fan, d, flag, run.args.kind)
    if body.is_empty:
        run.diagnostics.append("divisor is not pseudoeffective: the body is empty")
    run.svg_body = body
    result = {"body": ser.body_to_json(body), "kappa": ser.q(toric.iitaka_dim(fan, d)),
              "kappa_nu": ser.q(toric.numerical_iitaka_dim(fan, d))}
    if not body.is_empty:
        result["volume"] = ser.q(volume(body.polytope))
        result["dim"] = affine_dim(body.polytope)
    return result


def _cones_json(cones) -> List[List[int]]:
    return [list(c.ray_indices) for c in cones]


def _toric_baseloci(run: _Run) -> Dict[str, Any]:
    fan = _checked_fan(run)
    d = run.toric_divisor(fan)
    bl = toric.base_loci(fan, d)
    run.diagnostics.extend(bl.certificate)
    return {
        "SB": _cones_json(bl.sb), "B_minus": _cones_json(bl.b_minus), "B_plus": _cones_json(bl.b_plus),
        "divisorial": {"SB": list(toric.BaseLoci.divisorial(bl.sb)),
                       "B_minus": list(toric.BaseLoci.divisorial(bl.b_minus)),
                       "B_plus": list(toric.BaseLoci.divisorial(bl.b_plus))},
        "eps_minus": ser.q(bl.eps_minus), "eps_plus": ser.q(bl.eps_plus),
    }


def _toric_certify(run: _Run) -> Dict[str, Any]:
    fan = _checked_fan(run)
    d = run.toric_divisor(fan)
    flag = run.toric_flag()
    kappa = toric.iitaka_dim(fan, d)
    result: Dict[str, Any] = {"kappa": ser.q(kappa), "kappa_nu": ser.q(toric.numerical_iitaka_dim(fan, d))}
    if kappa == toric.MINUS_INFINITY:
        raise DomainFailure("kappa(D) = -inf: no subvariety can be certified")
    if flag is not None:
        toric.flag_map(fan, d, flag)
        cones = [flag.leading_cone(k) for k in range(fan.dim + 1)]
    else:
        cones = [toric.OrbitCone(c) for c in fan.cones()]
    bl = toric.base_loci(fan, d)
    rows = []
    for tau in cones:
        nak = toric.is_nakayama(fan, d, tau)
        pv = toric.is_positive_volume(fan, d, tau)
        row = {"cone": list(tau.ray_indices), "dim": fan.dim - len(tau.ray_indices),
               "nakayama": nak.holds, "nakayama_reason": nak.reason,
               "positive_volume": pv.holds, "positive_volume_reason": pv.reason,
               "in_B_minus": tau in bl.b_minus}
        if tau not in bl.b_minus:
            row["restricted_volume"] = ser.q(toric.restricted_volume_toric(fan, d, tau))
        rows.append(row)
    result["subvarieties"] = rows
    return result


def _surface_zariski(run: _Run) -> Dict[str, Any]:
    model = run.model()
    d = run.surface_class()
    zp = surface.zariski_decompose(model, d)
    p = zp.positive
    return {"zariski": ser.zariski_to_json(zp), "volume": ser.q(model.pair(p, p)),
            "B_minus_divisorial": [n for n, _ in zp.negative_support]}


def _surface_body(run: _Run) -> Dict[str, Any]:
    model = run.model()
    d = run.surface_class()
    flag = run.surface_flag()
    sb = surface.limiting_body_surface(model, d, flag)
    run.diagnostics.extend(sb.diagnostics)
    run.svg_body = sb.body
    result: Dict[str, Any] = {"body": ser.body_to_json(sb.body)}
    if sb.alpha is not None:
        result.update({"a": ser.q(sb.a), "mu": ser.q(sb.mu),
                       "alpha": ser.pl_to_json(sb.alpha), "beta": ser.pl_to_json(sb.beta),
                       "chambers": [{"start": ser.q(c.start), "end": ser.q(c.end),
                                     "support": list(c.support)} for c in sb.chambers],
                       "volume": ser.q(volume(sb.body.polytope))})
    return result


def _surface_volplus(run: _Run) -> Dict[str, Any]:
    model = run.model()
    d = run.surface_class()
    flag = run.surface_flag()
    c = flag.curve if flag.curve is not None else flag.curve_class
    if flag.incidence is not None:
        run.diagnostics.append("incidence data is ignored: vol+ uses a general flag point")
    cls = model.curves[model.curve_index(c)].cls if isinstance(c, str) else c
    return {"vol_plus": ser.q(surface.restricted_vol_plus(model, d, c)),
            "mu": ser.q(surface.mu_threshold(model, d, cls))}


def _semigroup_body(run: _Run) -> Dict[str, Any]:
    g = ser.valuation_set_from_json(run.data())
    body = body_from_valuations(g)
    run.svg_body = body
    if body.is_empty:
        run.diagnostics.append("no valuation entries: the body is empty")
    return {"body": ser.body_to_json(body),
            "truncation": [{"level": m, "hausdorff": ser.q(dist)} for m, dist in truncation_report(g)]}


def _xcheck(run: _Run) -> Dict[str, Any]:
    fan = _checked_fan(run)
    d = run.toric_divisor(fan)
    ts = toric.surface_model_from_fan(fan)
    given = run.toric_flag()
    flags = [given] if given is not None else [
        toric.InvariantFlag(order) for c in fan.max_cones for order in (c, c[::-1])]
    rows = []
    verdict = "EQUAL"
    for flag in flags:
        tb = toric.okounkov_body_toric(fan, d, flag, "limiting")
        sb = surface.limiting_body_surface(ts.model, ts.divisor_class(d), ts.flag(flag))
        same = tb.polytope == sb.body.polytope
        if not same:
            verdict = "DIFFERENT"
        rows.append({"flag": list(flag.ray_order), "equal": same,
                     "toric": ser.polytope_to_json(tb.polytope),
                     "surface": ser.polytope_to_json(sb.body.polytope)})
    if verdict != "EQUAL":
        run.diagnostics.append("toric and surface pipelines disagree")
    return {"verdict": verdict, "flags": rows, "surface_class": ser.qlist(ts.divisor_class(d))}


HANDLERS: Dict[str, Callable[[_Run], Dict[str, Any]]] = {
    "validate": _validate, "toric-body": _toric_body, "toric-baseloci": _toric_baseloci,
    "toric-certify": _toric_certify, "surface-zariski": _surface_zariski,
    "surface-body": _surface_body, "surface-volplus": _surface_volplus,
    "semigroup-body": _semigroup_body, "xcheck": _xcheck,
}


# -- driver --------------------------------------------------------------------


def _document(command: str, result: Any, diagnostics: Sequence[str]) -> str:
    doc = {"schema_version": ser.SCHEMA_VERSION, "command": command,
           "result": result, "diagnostics": list(diagnostics)}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _run_one(args, path: str, svg_path: Optional[str]) -> Tuple[int, str]:
    run = _Run(args, path)
    code = 0
    result = None
    try:
        result = HANDLERS[args.command](run)
        if args.command == "xcheck" and result["verdict"] != "EQUAL":
            code = 2
        if svg_path is not None:
            if run.svg_body is None:
                raise InputError(f"--svg is not supported by {args.command}")
            Path(svg_path).write_text(render_svg(run.svg_body), encoding="utf-8")
    except (InputError, DimensionMismatchError, InvalidArgumentError) as exc:
        code, result = 1, None
        run.diagnostics.append(f"input error: {exc}")
    except OkbError as exc:
        code, result = 2, None
        run.diagnostics.append(f"{type(exc).__name__}: {exc}")
    except (TypeError, ValueError, KeyError, AttributeError) as exc:
        # malformed nesting that slipped past the schema checks
        code, result = 1, None
        run.diagnostics.append(f"input error: malformed data ({type(exc).__name__}: {exc})")
    return code, _document(args.command, result, run.diagnostics)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
    except InputError as exc:
        sys.stderr.write(f"okb: {exc}\n")
        return 1
    inputs = args.inputs
    if len(inputs) == 1:
        code, text = _run_one(args, inputs[0], args.svg)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return code
    if args.svg:
        sys.stderr.write("okb: --svg takes a single --in\n")
        return 1
    if not args.out:
        sys.stderr.write("okb: a batch needs --out DIR\n")
        return 1
    out_dir = Path(args.out)
    os.makedirs(out_dir, exist_ok=True)
    stems = [Path(p).stem for p in inputs]
    if len(set(stems)) != len(stems):
        sys.stderr.write("okb: batch inputs must have distinct file names\n")
        return 1
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        outcomes = list(pool.map(lambda p: _run_one(args, p, None), inputs))
    for stem, (_, text) in zip(stems, outcomes):
        (out_dir / f"{stem}.json").write_text(text, encoding="utf-8")
    return max(code for code, _ in outcomes)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
