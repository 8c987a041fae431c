import json
import random

import pytest
from conftest import corpus

from hbcurves import standard_surface
from hbcurves.covers import (
    CoverError,
    FiniteGroupRep,
    apply_deck,
    build_cover,
    certificate_problems,
    crossing_components,
    cyclic_rep,
    degree_one_search,
    elevate,
    extends_to_handlebody_cover,
    flexibility_certificate,
    hom_from_intersection,
    lift_degree,
    lift_degrees,
    lifted_handlebody,
    load_cover,
    quotient_cover,
    recur_meridian,
    trivial_rep,
    wave_violation,
)
from hbcurves.curves import curve, geometric_intersection, homology_class, self_intersection
from hbcurves.handlebody import is_meridian, standard_handlebody

FIG_DELTA2 = "a1 b1 b2 -a1 -b2 -b1"


@pytest.fixture
def fig_cover(g2):
    return build_cover(g2, hom_from_intersection(g2, curve(g2, "b1"), 3))


def test_hom_from_intersection_images(g2):
    rep = hom_from_intersection(g2, curve(g2, "b1"), 3)
    assert rep.images == (1, 0, 0, 0)
    assert rep.degree == 3
    sep = curve(g2, "a1 b1 -a1 -b1")
    assert hom_from_intersection(g2, sep, 5).degree == 1
    with pytest.raises(CoverError):
        hom_from_intersection(g2, curve(g2, "b1"), 1)


def test_image_subgroup_degree(g2):
    rep = cyclic_rep(g2, (2, 0, 4, 0), 6)
    assert rep.degree == 3
    assert build_cover(g2, rep).total.genus() == 4


def test_build_cover_basics(g2):
    triv = build_cover(g2, trivial_rep(g2))
    assert triv.total.genus() == 2 and triv.degree == 1 and triv.normal
    torus = standard_surface(1)
    c = build_cover(torus, cyclic_rep(torus, (1, 0), 2))
    assert c.total.genus() == 1 and c.total.euler_characteristic() == 0
    assert c.map.check() == []


def test_fig1_cover(fig_cover, g2):
    assert fig_cover.total.genus() == 4
    assert fig_cover.total.euler_characteristic() == -6
    assert lift_degree(fig_cover, curve(g2, "a1")) == 3
    assert lift_degree(fig_cover, curve(g2, FIG_DELTA2)) == 1
    assert [e.degree for e in elevate(fig_cover, curve(g2, "a2"))] == [1, 1, 1]
    assert [e.degree for e in elevate(fig_cover, curve(g2, "a1"))] == [3]


def test_rep_errors(g2):
    torus = standard_surface(1)
    with pytest.raises(CoverError, match="disconnected"):
        build_cover(torus, FiniteGroupRep(2, ((0, 1), (0, 1))))
    with pytest.raises(CoverError, match="relator"):
        build_cover(torus, FiniteGroupRep(3, ((1, 0, 2), (0, 2, 1))))
    with pytest.raises(CoverError):
        build_cover(torus, FiniteGroupRep(2, ((0, 0), (0, 1))))


def test_non_normal_cover_degrees():
    # the 3-sheeted cover from S3 acting on cosets of a transposition
    S = standard_surface(2)
    rep = FiniteGroupRep(3, ((1, 0, 2), (1, 0, 2), (0, 2, 1), (0, 2, 1)))
    c = build_cover(S, rep)
    assert not c.normal
    x = curve(S, "b1 b2")
    assert sorted(lift_degrees(c, x)) == lift_degrees(c, x)
    assert sum(lift_degrees(c, x)) == 3
    assert sum(e.degree for e in elevate(c, x)) == 3


def test_degree_sum_property():
    S, curves = corpus(2, 4)
    rng = random.Random(1)
    for n in (2, 3, 4, 6):
        cover = build_cover(S, hom_from_intersection(S, rng.choice(curves), n))
        for c in rng.sample(curves, 10):
            els = elevate(cover, c)
            assert sum(e.degree for e in els) == cover.degree
            assert {e.degree for e in els} == {lift_degree(cover, c)}
            assert all(self_intersection(e.curve) == 0 for e in els)
            assert all(len(e.curve) == e.degree * len(e.base_curve) for e in els)


def test_extension_examples(fig_cover, g2):
    H = standard_handlebody(2, g2)
    assert extends_to_handlebody_cover(build_cover(g2, trivial_rep(g2)), H).extends
    r = extends_to_handlebody_cover(fig_cover, H)
    assert not r.extends and r.witness == 0
    good = build_cover(g2, hom_from_intersection(g2, curve(g2, "a1"), 3))
    assert extends_to_handlebody_cover(good, H).extends


def test_meridians_elevate_to_meridians(g2):
    S, curves = corpus(2, 5)
    H = standard_handlebody(2, S)
    cover = build_cover(S, hom_from_intersection(S, curve(S, "a1"), 3))
    Hup = lifted_handlebody(cover, H)
    assert Hup.genus == cover.total.genus() == 4
    for c in curves:
        if is_meridian(H, c):
            assert all(is_meridian(Hup, e.curve) for e in elevate(cover, c))
    with pytest.raises(CoverError):
        lifted_handlebody(build_cover(S, hom_from_intersection(S, curve(S, "b1"), 3)), H)


def test_flexibility_certificate(fig_cover, g2):
    H = standard_handlebody(2, g2)
    cert = flexibility_certificate(fig_cover, H, [curve(g2, "a2"), curve(g2, FIG_DELTA2)])
    assert cert is not None and cert.odd_count == 1
    assert certificate_problems(cert, H) == []
    assert flexibility_certificate(build_cover(g2, trivial_rep(g2)), H, [curve(g2, "a1"), curve(g2, "a2")]) is None
    # the three elevations of a2 are pairwise disjoint
    assert flexibility_certificate(fig_cover, H, [curve(g2, "a2")]) is None
    with pytest.raises(CoverError):
        flexibility_certificate(fig_cover, H, [curve(g2, "b1")])
    json.dumps(cert.to_dict())


def test_quotients(g2):
    six = build_cover(g2, hom_from_intersection(g2, curve(g2, "b1"), 6))
    assert six.degree == 6 and six.normal
    assert quotient_cover(six, range(6)).degree == 1
    three = quotient_cover(six, [0, 3])
    assert three.degree == 3
    with pytest.raises(CoverError):
        quotient_cover(six, [0, 1])  # not a subgroup
    S, curves = corpus(2, 4)
    rng = random.Random(7)
    for c in rng.sample(curves, 20):
        assert lift_degree(six, c) % lift_degree(three, c) == 0
        assert six.degree % three.degree == 0


def test_quotient_rejects_non_normal_subgroup():
    # S3 acting regularly on itself; the subgroup generated by a transposition is not normal
    S = standard_surface(2)
    elems = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (2, 1, 0), (0, 2, 1)]
    index = {e: i for i, e in enumerate(elems)}

    def right_mult(g):
        return tuple(index[tuple(g[x] for x in e)] for e in elems)

    t, r = elems[3], elems[1]
    rep = FiniteGroupRep(6, (right_mult(t), right_mult(t), right_mult(r), right_mult(r)))
    c = build_cover(S, rep)
    assert c.normal
    with pytest.raises(CoverError, match="normal"):
        quotient_cover(c, [right_mult(t)[0]])
    assert quotient_cover(c, [1, 2]).degree == 2


def test_deck_action_on_homology(g2):
    six = build_cover(g2, hom_from_intersection(g2, curve(g2, "b1"), 6))
    mid = quotient_cover(six, [0, 2, 4])
    assert mid.degree == 2
    for el in elevate(mid, curve(g2, "b1")):
        h = homology_class(el.curve)
        for k in range(mid.degree):
            img = homology_class(apply_deck(mid, k, el.curve))
            assert img == h or img == [-x for x in h]


def test_deck_preserves_intersections(fig_cover, g2):
    els = [e.curve for e in elevate(fig_cover, curve(g2, "a2"))] + [
        e.curve for e in elevate(fig_cover, curve(g2, FIG_DELTA2))
    ]
    for k in range(3):
        moved = [apply_deck(fig_cover, k, c) for c in els]
        assert geometric_intersection(moved[0], moved[3]) == geometric_intersection(els[0], els[3])


def test_cover_file_round_trip(fig_cover):
    back = load_cover(fig_cover.to_json())
    assert back.rep.perms == fig_cover.rep.perms and back.total == fig_cover.total


def test_wave_violation_trivial_cases(g2):
    H = standard_handlebody(2, g2)
    triv = build_cover(g2, trivial_rep(g2))
    system = list(H.disk_system)
    assert not wave_violation(triv, curve(g2, FIG_DELTA2), system)
    assert not wave_violation(triv, curve(g2, "a1 a2"), system)  # disjoint: vacuous


def test_recur_meridian(g3):
    H = standard_handlebody(3, g3)
    a1, a2, a3 = curve(g3, "a1"), curve(g3, "a2"), curve(g3, "a3")
    d = recur_meridian(H, a1, a2, curve(g3, "b2 b3 a1"), a3)
    assert self_intersection(d) == 0 and is_meridian(H, d)
    cover = build_cover(g3, hom_from_intersection(g3, curve(g3, "b2"), 3))
    assert wave_violation(cover, d, [a1, a3])
    for crossings in crossing_components(cover, d, [a1, a3]):
        comps = [c for _, c in crossings]
        assert all(comps[k] != comps[(k + 1) % len(comps)] for k in range(len(comps)))
    with pytest.raises(CoverError, match="alpha' once"):
        recur_meridian(H, a1, a2, curve(g3, "b2"), a3)
    with pytest.raises(CoverError, match="meridian"):
        recur_meridian(H, curve(g3, "b1"), a2, curve(g3, "b2 b3 a1"), a3)
    with pytest.raises(CoverError, match="genus"):
        g2 = standard_surface(2)
        recur_meridian(standard_handlebody(2, g2), curve(g2, "a1"), curve(g2, "a2"), curve(g2, "b1"))


def test_degree_one_examples():
    assert degree_one_search((0, 5), 7).moves == ()
    assert degree_one_search((0, 5), 7).zero_index == 1
    r = degree_one_search((2, 1), 3)
    assert r.moves == (("exchange", 2, 1, 1),)
    assert r.residues == (2, 0)
    with pytest.raises(ValueError):
        degree_one_search((3,), 5)
    big = degree_one_search((5, 7, 3), 1000)
    assert big.found and 0 in big.residues
