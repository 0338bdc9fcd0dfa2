from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Tuple

import pytest

from okb import serialize as ser
from okb.exactgeom.linalg import inertia

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: Dict[int, Tuple[bool, str]] = {}


def load_json(*parts: str):
    return json.loads((FIXTURES.joinpath(*parts)).read_text(encoding="utf-8"))


def toric_fixture_names() -> List[str]:
    return sorted(p.name for p in (FIXTURES / "toric").iterdir() if (p / "fan.json").exists())


def load_fan(name: str):
    return ser.fan_from_json(load_json("toric", name, "fan.json"))


def load_divisors(name: str):
    """(stem, type tag, divisor) for every divisor fixture of a fan."""
    fan = load_fan(name)
    out = []
    for path in sorted((FIXTURES / "toric" / name / "divisors").glob("*.json")):
        obj = json.loads(path.read_text(encoding="utf-8"))
        out.append((path.stem, obj.get("type", ""), ser.divisor_from_json(obj, fan)))
    return out


def load_model(name: str):
    return ser.model_from_json(load_json("surface", name, "model.json"))


def load_class(name: str, cls: str):
    return ser.class_from_json(load_json("surface", name, "classes", cls + ".json"))


def random_pseudoeffective(model, rng, big_only=False):
    """A random nonnegative rational combination of effective generators."""
    while True:
        coeffs = [Fraction(rng.randint(0, 6), rng.choice([1, 1, 2, 3])) for _ in model.eff_generators]
        if big_only:
            coeffs = [c + Fraction(1, 7) for c in coeffs]
        if any(coeffs):
            return tuple(sum((c * g[i] for c, g in zip(coeffs, model.eff_generators)), Fraction(0))
                         for i in range(model.rank))


def zariski_problems(model, d, zp) -> List[str]:
    """Every violated invariant of a Zariski decomposition D = P + N."""
    problems = []
    n = zp.negative_class(model)
    if tuple(a + b for a, b in zip(zp.positive, n)) != tuple(d):
        problems.append("P + N != D")
    for g in model.eff_generators:
        if model.pair(zp.positive, g) < 0:
            problems.append(f"P not nef against {g}")
    curves = [model.curves[model.curve_index(name)].cls for name, _ in zp.negative_support]
    for name, c in zp.negative_support:
        if c <= 0:
            problems.append(f"coefficient of {name} is {c}")
    for cls in curves:
        if model.pair(zp.positive, cls) != 0:
            problems.append(f"P.{cls} != 0")
    if curves:
        gram = [[model.pair(x, y) for y in curves] for x in curves]
        if inertia(gram) != (0, len(curves), 0):
            problems.append("support Gram matrix not negative definite")
    return problems


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    name = item.name
    if report.when == "call" and report.failed and name.startswith("test_criterion_"):
        n = int(name.split("_")[2])
        # a criterion that raised before recording its own line still gets one
        ACCEPTANCE.setdefault(n, (False, f"error: {call.excinfo.typename}: {call.excinfo.value}"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
