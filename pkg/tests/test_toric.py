from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import load_divisors, load_fan, toric_fixture_names
from okb.errors import InsideBaseLocusError, InvalidArgumentError
from okb.exactgeom import affine_dim, affine_map, lattice_points, lattice_volume, scale
from okb.semigroup import body_from_valuations
from okb.toric import (
    BaseLoci,
    Fan,
    InvariantFlag,
    OrbitCone,
    TorusDivisor,
    anticanonical,
    asymptotic_order_toric,
    base_loci,
    divisor_polytope,
    flag_map,
    iitaka_dim,
    is_nakayama,
    is_positive_volume,
    is_pseudoeffective,
    numerical_iitaka_dim,
    okounkov_body_toric,
    principal_shift,
    restricted_volume_toric,
    sections_count,
    toric_valuation_set,
    validate_fan,
)

F = Fraction
MINUS_INF = float("-inf")


def verts(*ps):
    return tuple(sorted(tuple(F(x) for x in p) for p in ps))


@pytest.fixture(scope="module")
def plane():
    return Fan.build([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


@pytest.fixture(scope="module")
def blowup():
    return Fan.build([(1, 0), (1, 1), (0, 1), (-1, -1), (0, -1)],
                     [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


@pytest.fixture(scope="module")
def blowup_d(blowup):
    # L - E1 + E2: rays 2 and 4
    return TorusDivisor.build(blowup, {2: 1, 4: 1})


def cone(*idx):
    return OrbitCone.of(idx)


# -- fans ----------------------------------------------------------------------


def test_plane_fan_valid(plane):
    assert validate_fan(plane).ok


def test_missing_cone_incomplete():
    rep = validate_fan(Fan.build([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)]))
    assert rep.smooth and not rep.complete and not rep.ok


def test_nonsmooth_cone():
    rep = validate_fan(Fan.build([(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)]))
    assert not rep.smooth and not rep.ok


def test_overlapping_cones_rejected():
    rep = validate_fan(Fan.build([(1, 0), (0, 1), (-1, -1), (1, 1)], [(0, 1), (1, 2), (0, 2), (0, 3)]))
    assert not rep.ok


@pytest.mark.parametrize("name", toric_fixture_names())
def test_fixture_fans_valid(name):
    assert validate_fan(load_fan(name)).ok


# -- polytopes and Iitaka data -------------------------------------------------


def test_divisor_polytope_examples(plane):
    assert divisor_polytope(plane, TorusDivisor.build(plane, {2: 1})).vertices == verts((0, 0), (1, 0), (0, 1))
    assert divisor_polytope(plane, TorusDivisor.build(plane, {})).vertices == verts((0, 0))
    assert divisor_polytope(plane, TorusDivisor.build(plane, {2: -1})).empty


def test_iitaka_examples(plane, blowup, blowup_d):
    assert iitaka_dim(plane, TorusDivisor.build(plane, {2: 1})) == 2
    assert iitaka_dim(plane, TorusDivisor.build(plane, {})) == 0
    assert iitaka_dim(plane, TorusDivisor.build(plane, {2: -1})) == MINUS_INF
    assert iitaka_dim(blowup, blowup_d) == 1
    assert numerical_iitaka_dim(blowup, blowup_d) == 1


def test_pseudoeffective(plane, blowup):
    assert is_pseudoeffective(plane, TorusDivisor.build(plane, {0: 1, 1: -1}))
    assert not is_pseudoeffective(plane, TorusDivisor.build(plane, {2: -1}))
    # E1 - E2 is not pseudoeffective
    assert not is_pseudoeffective(blowup, TorusDivisor.build(blowup, {1: 1, 4: -1}))


def test_anticanonical_is_all_ones(blowup):
    assert anticanonical(blowup).coeffs == (1,) * 5


# -- Okounkov bodies -----------------------------------------------------------


def test_plane_body_matches_semigroup_oracle(plane):
    d = TorusDivisor.build(plane, {2: 1})
    flag = InvariantFlag((0, 1))
    body = okounkov_body_toric(plane, d, flag)
    assert body.polytope.vertices == verts((0, 0), (1, 0), (0, 1))
    oracle = body_from_valuations(toric_valuation_set(plane, d, flag, 10))
    assert oracle.polytope == body.polytope


def test_zero_divisor_body_is_origin(plane):
    for c in plane.max_cones:
        body = okounkov_body_toric(plane, TorusDivisor.build(plane, {}), InvariantFlag(c))
        assert body.polytope.vertices == verts((0, 0))


def test_blowup_body_segment(blowup, blowup_d):
    for kind in ("valuative", "limiting"):
        body = okounkov_body_toric(blowup, blowup_d, InvariantFlag((4, 3)), kind)
        assert body.kind == kind
        assert body.polytope.vertices == verts((1, 0), (2, 0))
    oracle = body_from_valuations(toric_valuation_set(blowup, blowup_d, InvariantFlag((4, 3)), 10))
    assert oracle.polytope.vertices == verts((1, 0), (2, 0))


def test_blowup_flags_through_other_curve(blowup, blowup_d):
    assert okounkov_body_toric(blowup, blowup_d, InvariantFlag((4, 0))).polytope.vertices == verts((1, 0), (2, 1))
    for order in ((1, 2), (1, 0)):
        body = okounkov_body_toric(blowup, blowup_d, InvariantFlag(order)).polytope
        assert all(v[0] == 0 for v in body.vertices)


def test_not_pseudoeffective_body_empty(plane):
    body = okounkov_body_toric(plane, TorusDivisor.build(plane, {2: -1}), InvariantFlag((0, 1)))
    assert body.is_empty


def test_bad_flag_rejected(plane):
    d = TorusDivisor.build(plane, {2: 1})
    with pytest.raises(InvalidArgumentError):
        okounkov_body_toric(plane, d, InvariantFlag((0,)))
    with pytest.raises(InvalidArgumentError):
        okounkov_body_toric(plane, d, InvariantFlag((0, 0)))


def test_body_in_positive_orthant():
    for name in toric_fixture_names():
        fan = load_fan(name)
        for _, _, d in load_divisors(name):
            for c in fan.max_cones:
                body = okounkov_body_toric(fan, d, InvariantFlag(c)).polytope
                assert all(x >= 0 for v in body.vertices for x in v)


# -- sections ------------------------------------------------------------------


def test_sections_count_examples(plane):
    assert sections_count(plane, TorusDivisor.build(plane, {2: 1}), 2) == 6
    assert sections_count(plane, TorusDivisor.build(plane, {}), 3) == 1
    assert sections_count(plane, TorusDivisor.build(plane, {2: -1}), 1) == 0
    with pytest.raises(InvalidArgumentError):
        sections_count(plane, TorusDivisor.build(plane, {2: F(1, 2)}), 1)


@pytest.mark.parametrize("name", ["p2", "f1", "bl2p2", "p1_cubed"])
def test_sections_count_equals_body_lattice_points(name):
    fan = load_fan(name)
    flag = InvariantFlag(fan.max_cones[0])
    for _, _, d in load_divisors(name):
        for m in (1, 2, 3):
            if not (m * d).is_integral():
                continue
            body = okounkov_body_toric(fan, d, flag).polytope
            # the flag map is unimodular with integral offset for integral mD
            assert sections_count(fan, d, m) == len(lattice_points(scale(body, m)))


def test_sections_grow_like_volume(plane):
    d = TorusDivisor.build(plane, {2: 1})
    # h^0(mH) = (m+1)(m+2)/2
    assert [sections_count(plane, d, m) for m in range(1, 6)] == [(m + 1) * (m + 2) // 2 for m in range(1, 6)]


# -- invariance properties -----------------------------------------------------


@pytest.mark.parametrize("name", toric_fixture_names())
def test_homogeneity_and_principal_shift(name):
    rng = random.Random(name)
    fan = load_fan(name)
    for _, _, d in load_divisors(name):
        flag = InvariantFlag(fan.max_cones[-1])
        body = okounkov_body_toric(fan, d, flag).polytope
        for m in (2, 3):
            assert okounkov_body_toric(fan, m * d, flag).polytope == scale(body, m)
        for _ in range(3):
            u = [F(rng.randint(-4, 4), rng.choice([1, 2])) for _ in range(fan.dim)]
            assert okounkov_body_toric(fan, principal_shift(fan, d, u), flag).polytope == body


def test_flag_map_is_unimodular(blowup, blowup_d):
    from okb.exactgeom.linalg import det
    for c in blowup.max_cones:
        matrix, _ = flag_map(blowup, blowup_d, InvariantFlag(c))
        assert abs(det(matrix)) == 1


@pytest.mark.parametrize("name", ["p2", "f1", "bl2p2", "f2", "f1_x_p1"])
def test_order_is_minimal_first_coordinate(name):
    fan = load_fan(name)
    for _, _, d in load_divisors(name):
        if not is_pseudoeffective(fan, d):
            continue
        for c in fan.max_cones:
            flag = InvariantFlag(c)
            body = okounkov_body_toric(fan, d, flag).polytope
            first = min(v[0] for v in body.vertices)
            assert asymptotic_order_toric(fan, d, cone(c[0])) == first


# -- base loci -----------------------------------------------------------------


def test_ample_base_loci_empty(plane):
    b = base_loci(plane, TorusDivisor.build(plane, {2: 1}))
    assert b.sb == () and b.b_minus == () and b.b_plus == ()


def test_blowup_base_loci(blowup, blowup_d):
    b = base_loci(blowup, blowup_d)
    assert BaseLoci.divisorial(b.b_minus) == (4,)
    assert BaseLoci.divisorial(b.sb) == (4,)


def test_zero_divisor_base_loci(plane):
    b = base_loci(plane, TorusDivisor.build(plane, {}))
    assert b.sb == () and b.b_minus == ()
    assert set(b.b_plus) == {OrbitCone.of(c) for c in plane.cones()}


@pytest.mark.parametrize("name", toric_fixture_names())
def test_base_loci_nested_and_order_positive(name):
    fan = load_fan(name)
    for _, _, d in load_divisors(name):
        if not is_pseudoeffective(fan, d):
            continue
        b = base_loci(fan, d)
        assert set(b.b_minus) <= set(b.sb) <= set(b.b_plus)
        assert b.eps_minus > 0 and b.eps_plus > 0
        for i in range(fan.num_rays):
            inside = cone(i) in b.b_minus
            assert (asymptotic_order_toric(fan, d, cone(i)) > 0) == inside


# -- restricted volumes and certificates ---------------------------------------


def test_restricted_volume_examples(plane, blowup, blowup_d):
    h = TorusDivisor.build(plane, {2: 1})
    assert restricted_volume_toric(plane, h, cone(0)) == 1
    assert restricted_volume_toric(plane, h, cone()) == F(1, 2)
    assert restricted_volume_toric(blowup, blowup_d, cone(1)) == 1
    assert restricted_volume_toric(blowup, blowup_d, cone(3)) == 1
    with pytest.raises(InsideBaseLocusError):
        restricted_volume_toric(blowup, blowup_d, cone(4))


def test_nakayama_examples(plane, blowup, blowup_d):
    assert is_nakayama(plane, TorusDivisor.build(plane, {2: 1}), cone()).holds
    assert not is_nakayama(blowup, blowup_d, cone(0, 1)).holds
    assert is_nakayama(blowup, blowup_d, cone(1)).holds
    assert is_nakayama(blowup, blowup_d, cone(3)).holds
    # the segment projects injectively along ray 2, yet D.C = 0 on that curve:
    # sections of D all vanish along V(ray 2) except those on the face
    assert not is_nakayama(blowup, blowup_d, cone(2)).holds
    with pytest.raises(InvalidArgumentError):
        is_nakayama(plane, TorusDivisor.build(plane, {2: -1}), cone())


def test_positive_volume_examples(plane, blowup, blowup_d):
    assert is_positive_volume(plane, TorusDivisor.build(plane, {2: 1}), cone()).holds
    assert not is_positive_volume(blowup, blowup_d, cone(4)).holds
    assert is_positive_volume(blowup, blowup_d, cone(1)).holds
    with pytest.raises(InvalidArgumentError):
        is_positive_volume(plane, TorusDivisor.build(plane, {2: -1}), cone())


def test_certified_subvariety_body_volume(blowup, blowup_d):
    body = okounkov_body_toric(blowup, blowup_d, InvariantFlag((1, 2))).polytope
    assert affine_dim(body) == 1
    assert lattice_volume(body) == restricted_volume_toric(blowup, blowup_d, cone(1))


def test_body_is_affine_image_of_polytope(blowup, blowup_d):
    matrix, offset = flag_map(blowup, blowup_d, InvariantFlag((4, 3)))
    assert affine_map(divisor_polytope(blowup, blowup_d), matrix, offset) == \
        okounkov_body_toric(blowup, blowup_d, InvariantFlag((4, 3))).polytope


@pytest.mark.parametrize("name", ["bl2p2", "f1", "p2_x_p1", "f1_x_p1", "p1_cubed"])
def test_certified_subvarieties_shape_the_body(name):
    from okb.toric import face
    fan = load_fan(name)
    for _, _, d in load_divisors(name):
        if not is_pseudoeffective(fan, d):
            continue
        kappa = iitaka_dim(fan, d)
        for c in fan.cones():
            tau = OrbitCone.of(c)
            nak = is_nakayama(fan, d, tau).holds
            pv = is_positive_volume(fan, d, tau).holds
            if not (nak or pv):
                continue
            f = face(fan, d, tau)
            assert affine_dim(f) == fan.dim - len(c) == kappa
            assert restricted_volume_toric(fan, d, tau) > 0
            top = next(m for m in fan.max_cones if set(c) <= set(m))
            flag = InvariantFlag(tuple(c) + tuple(i for i in top if i not in c))
            body = okounkov_body_toric(fan, d, flag).polytope
            # leading coordinates vanish along the certified subvariety
            assert all(v[i] == 0 for v in body.vertices for i in range(len(c)))
