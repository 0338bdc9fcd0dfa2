from __future__ import annotations

import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import FIXTURES, load_divisors, load_fan, load_model
from okb import cli, serialize as ser
from okb.errors import EmptyBodyError, InputError, InvalidArgumentError
from okb.exactgeom import convex_hull, empty_polytope
from okb.exactgeom.rational import QuadraticValue
from okb.semigroup import ConvexBody, Exactness
from okb.surface import SurfaceFlag
from okb.svg import render_svg
from okb.toric import InvariantFlag, OrbitCone

F = Fraction
TORIC = FIXTURES / "toric"
SURF = FIXTURES / "surface"


# -- JSON ----------------------------------------------------------------------


def test_rationals_are_strings():
    assert ser.q(F(-1, 2)) == "-1/2"
    assert ser.q(3) == "3"
    assert ser.q(float("-inf")) == "-inf"
    assert ser.q(QuadraticValue(2)) == QuadraticValue(2).to_json()


def test_polytope_round_trip():
    p = convex_hull([(0, 0), (F(3, 2), 0), (0, F(1, 3))])
    assert ser.polytope_from_json(json.loads(json.dumps(ser.polytope_to_json(p)))) == p
    assert ser.polytope_from_json(ser.polytope_to_json(empty_polytope(3))) == empty_polytope(3)


def test_polytope_decoder_rejects_inconsistent_data():
    good = ser.polytope_to_json(convex_hull([(0, 0), (1, 0), (0, 1)]))
    bad = dict(good, vertices=good["vertices"] + [["1/4", "1/4"]])
    with pytest.raises(InputError):
        ser.polytope_from_json(bad)
    bad = dict(good, halfspaces=good["halfspaces"][:2])
    with pytest.raises(InputError):
        ser.polytope_from_json(bad)
    with pytest.raises(InputError):
        ser.polytope_from_json(dict(good, vertices=[[0.5, 0]]))


def test_body_round_trip():
    body = ConvexBody(convex_hull([(1, 0), (2, 0)]), "limiting", Exactness.truncated(4), "E2")
    assert ser.body_from_json(json.loads(json.dumps(ser.body_to_json(body)))) == body


def test_fan_divisor_flag_round_trip():
    fan = load_fan("bl2p2")
    assert ser.fan_from_json(ser.fan_to_json(fan)) == fan
    for _, _, d in load_divisors("bl2p2"):
        assert ser.divisor_from_json(ser.divisor_to_json(d), fan) == d
    flag = InvariantFlag((4, 3))
    assert ser.toric_flag_from_json(ser.toric_flag_to_json(flag)) == flag
    c = OrbitCone.of([3, 4])
    assert ser.orbit_cone_from_json(ser.orbit_cone_to_json(c)) == c


def test_model_and_flag_round_trip():
    model = load_model("del_pezzo_7")
    assert ser.model_from_json(ser.model_to_json(model)) == model
    for flag in (SurfaceFlag.general("E2"), SurfaceFlag.at("E2", {"L-E1-E2": 1}),
                 SurfaceFlag.general(curve_class=(1, 0, 0))):
        assert ser.surface_flag_from_json(ser.surface_flag_to_json(flag)) == flag


def test_fan_decoder_rejects_floats():
    with pytest.raises(InputError):
        ser.fan_from_json({"dim": 2, "rays": [[1.0, 0], [0, 1]], "max_cones": [[0, 1]]})


# -- SVG -----------------------------------------------------------------------


def body(*points):
    return ConvexBody(convex_hull(points))


def path_of(svg):
    paths = re.findall(r'<path class="body" d="([^"]*)"([^>]*)/>', svg)
    assert len(paths) == 1
    return paths[0]


def test_svg_triangle_closed_path():
    d, attrs = path_of(render_svg(body((0, 0), (1, 0), (0, 1))))
    assert d.endswith("Z")
    assert len(re.findall(r"[ML] ", d)) == 3
    assert 'fill="none"' not in attrs


def test_svg_segment_stroke_only():
    d, attrs = path_of(render_svg(body((0, 0), (0, 1))))
    assert "Z" not in d and len(re.findall(r"[ML] ", d)) == 2
    assert 'fill="none"' in attrs and "stroke=" in attrs


def test_svg_empty_and_wrong_dimension():
    with pytest.raises(EmptyBodyError):
        render_svg(ConvexBody(empty_polytope(2)))
    with pytest.raises(InvalidArgumentError):
        render_svg(body((0, 0, 0), (1, 0, 0)))


def test_svg_deterministic_and_labelled():
    b = body((0, 0), (F(3, 2), F(1, 3)), (0, 1))
    svg = render_svg(b)
    assert svg == render_svg(body((0, 1), (0, 0), (F(3, 2), F(1, 3))))
    assert "(3/2, 1/3)" in svg


# -- CLI -----------------------------------------------------------------------


def run_cli(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_cli_toric_body_plane(capsys):
    code, doc = run_cli(capsys, "toric-body", "--in", TORIC / "p2" / "fan.json",
                        "--divisor", TORIC / "p2" / "divisors" / "hyperplane.json",
                        "--flag", TORIC / "p2" / "flags" / "first_two_rays.json")
    assert code == 0
    assert doc["schema_version"] == ser.SCHEMA_VERSION
    poly = doc["result"]["body"]["polytope"]
    assert sorted(poly["vertices"]) == [["0", "0"], ["0", "1"], ["1", "0"]]


def test_cli_surface_body_elliptic_ruled(capsys, tmp_path):
    svg = tmp_path / "body.svg"
    er = SURF / "elliptic_ruled"
    code, doc = run_cli(capsys, "surface-body", "--in", er / "model.json",
                        "--divisor", er / "classes" / "tautological.json",
                        "--flag", er / "flags" / "fiber_general.json", "--svg", svg)
    assert code == 0
    assert doc["result"]["body"]["polytope"]["vertices"] == [["0", "0"], ["0", "1"]]
    d, attrs = path_of(svg.read_text(encoding="utf-8"))
    (x0, _), (x1, _) = [p.split() for p in re.split(r"[ML] ", d)[1:]]
    assert x0 == x1 and 'fill="none"' in attrs


def test_cli_xcheck_equal(capsys):
    bl = TORIC / "bl2p2"
    code, doc = run_cli(capsys, "xcheck", "--in", bl / "fan.json",
                        "--divisor", bl / "divisors" / "l_minus_e1_plus_e2.json")
    assert code == 0 and doc["result"]["verdict"] == "EQUAL"
    assert len(doc["result"]["flags"]) == 10


def test_cli_xcheck_different_exits_2(capsys, monkeypatch):
    from okb import toric

    def shifted(fan, d, flag, kind="valuative"):
        return ConvexBody(convex_hull([(0, 0)]), kind)

    monkeypatch.setattr(toric, "okounkov_body_toric", shifted)
    bl = TORIC / "bl2p2"
    code, doc = run_cli(capsys, "xcheck", "--in", bl / "fan.json",
                        "--divisor", bl / "divisors" / "l_minus_e1_plus_e2.json")
    assert code == 2 and doc["result"]["verdict"] == "DIFFERENT"


def test_cli_domain_error_exits_2(capsys):
    dp = SURF / "del_pezzo_7"
    code, doc = run_cli(capsys, "surface-volplus", "--in", dp / "model.json",
                        "--divisor", dp / "classes" / "l_minus_e1_plus_e2.json",
                        "--flag", dp / "flags" / "e2_general.json")
    assert code == 2 and doc["result"] is None
    assert doc["diagnostics"][0].startswith("InsideBaseLocusError")


def test_cli_input_errors_exit_1(capsys, tmp_path):
    code, doc = run_cli(capsys, "toric-body", "--in", tmp_path / "missing.json")
    assert code == 1 and doc["result"] is None
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _ = run_cli(capsys, "validate", "--in", bad)
    assert code == 1
    assert cli.main(["no-such-command", "--in", str(bad)]) == 1


def test_cli_validate_detects_types(capsys):
    code, doc = run_cli(capsys, "validate", "--in", TORIC / "f1" / "fan.json")
    assert code == 0 and doc["result"]["type"] == "fan" and doc["result"]["ok"]
    code, doc = run_cli(capsys, "validate", "--in", SURF / "del_pezzo_7" / "model.json")
    assert code == 0 and doc["result"]["type"] == "surface-model"


def test_cli_baseloci_and_certify(capsys):
    bl = TORIC / "bl2p2"
    args = ["--in", bl / "fan.json", "--divisor", bl / "divisors" / "l_minus_e1_plus_e2.json"]
    code, doc = run_cli(capsys, "toric-baseloci", *args)
    assert code == 0 and doc["result"]["divisorial"]["B_minus"] == [4]
    code, doc = run_cli(capsys, "toric-certify", *args, "--flag", bl / "flags" / "through_e1.json")
    rows = {tuple(r["cone"]): r for r in doc["result"]["subvarieties"]}
    assert rows[(1,)]["nakayama"] and rows[(1,)]["restricted_volume"] == "1"


def test_cli_semigroup_and_zariski(capsys):
    code, doc = run_cli(capsys, "semigroup-body", "--in", FIXTURES / "semigroup" / "segment_1_2.json")
    assert code == 0
    assert doc["result"]["body"]["exactness"] == {"kind": "truncated", "level": 1}
    dp = SURF / "del_pezzo_7"
    code, doc = run_cli(capsys, "surface-zariski", "--in", dp / "model.json",
                        "--divisor", dp / "classes" / "l_minus_e1_plus_e2.json")
    assert code == 0
    assert doc["result"]["zariski"]["negative_support"] == [{"curve": "E2", "coefficient": "1"}]
    assert doc["result"]["B_minus_divisorial"] == ["E2"]


def test_cli_batch_is_deterministic(tmp_path):
    inputs = [FIXTURES / "semigroup" / n for n in
              ("projective_line_level5.json", "segment_1_2.json", "single_point.json")]
    outs = []
    for jobs in ("1", "3"):
        out = tmp_path / f"out{jobs}"
        argv = ["semigroup-body", "--jobs", jobs, "--out", str(out)]
        for p in inputs:
            argv += ["--in", str(p)]
        assert cli.main(argv) == 0
        outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert outs[0] == outs[1] and len(outs[0]) == 3


def test_console_script_output_is_byte_identical():
    argv = [sys.executable, "-m", "okb.cli", "toric-baseloci",
            "--in", str(TORIC / "f1" / "fan.json"),
            "--divisor", str(TORIC / "f1" / "divisors" / "two_e_plus_f.json")]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and b'"schema_version": "1.0"' in first
