import pytest
from conftest import corpus

from hbcurves.curves import TwistWord, curve, geometric_intersection
from hbcurves.handlebody import (
    DiskPath,
    HandlebodyError,
    HandlebodyStructure,
    check_disk_path,
    check_multitwist,
    complement_components,
    disk_exchange_path,
    find_wave,
    handlebody_word,
    has_wave,
    is_meridian,
    is_reduced_disk_system,
    standard_handlebody,
)

FIG_DELTA2 = "a1 b1 b2 -a1 -b2 -b1"


@pytest.fixture
def H2(g2):
    return standard_handlebody(2, g2)


def test_standard_structure(H2):
    assert H2.genus == 2
    assert H2.problems() == []
    assert HandlebodyStructure.from_json(H2.surface, H2.to_json()).disk_system == H2.disk_system


def test_bad_structures(g2):
    with pytest.raises(HandlebodyError):
        HandlebodyStructure(g2, (curve(g2, "a1"),)).check()
    with pytest.raises(HandlebodyError):
        HandlebodyStructure(g2, (curve(g2, "a1"), curve(g2, "a1 b1 -a1 -b1"))).check()


def test_handlebody_words(H2, g2):
    assert handlebody_word(H2, curve(g2, "b1")) == (1,)
    assert handlebody_word(H2, curve(g2, "-b2")) == (-2,)
    assert handlebody_word(H2, curve(g2, "a1")) == ()
    assert len(handlebody_word(H2, curve(g2, "b1 b2"))) == 2


def test_meridians(H2, g2):
    assert is_meridian(H2, curve(g2, "a2"))
    assert is_meridian(H2, curve(g2, FIG_DELTA2))
    assert is_meridian(H2, curve(g2, "a1 b1 -a1 -b1"))  # separating meridian
    assert not is_meridian(H2, curve(g2, "b1"))
    with pytest.raises(HandlebodyError):
        is_meridian(H2, curve(g2, "a1 a1"))


def test_reduced_systems(H2, g2):
    assert is_reduced_disk_system(H2, [curve(g2, "a1"), curve(g2, "a1 a2")])
    assert not is_reduced_disk_system(H2, [curve(g2, "a1 b1 -a1 -b1"), curve(g2, "a1")])
    with pytest.raises(HandlebodyError):
        is_reduced_disk_system(H2, [curve(g2, "a1")])
    assert complement_components([curve(g2, "a1 b1 -a1 -b1")]) == 2


def test_wave_on_fig1_curve(H2, g2):
    d2 = curve(g2, FIG_DELTA2)
    w = find_wave([d2], list(H2.disk_system), H2)
    assert w is not None and is_meridian(H2, w.surgery)
    assert w.side in ("left", "right")
    assert has_wave([d2], list(H2.disk_system))
    assert find_wave([curve(g2, "a1")], [curve(g2, "a2")], H2) is None
    d = w.to_dict()
    assert set(d) >= {"host", "subarc", "hit_component", "side", "surgery"}


def test_wave_rejects_non_meridians(H2, g2):
    with pytest.raises(HandlebodyError):
        find_wave([curve(g2, "b1")], [curve(g2, "a1")], H2)


def test_multitwist_verdicts(H2, g2):
    a1, a2, b1, b2 = (curve(g2, x) for x in ("a1", "a2", "b1", "b2"))
    assert check_multitwist(H2, TwistWord(((a1, 1), (a2, -3)))).kind == "AllMeridian"
    v = check_multitwist(H2, TwistWord(((b1, 1),)))
    assert v.kind == "Obstructed" and "odd number" in v.reason
    v = check_multitwist(H2, TwistWord(((b1, 1), (b2, 1))))
    assert v.kind == "Obstructed"
    v = check_multitwist(H2, TwistWord(((b1, 1), (b2, -1))))
    assert v.kind == "Obstructed" and "pairing" in v.reason
    # isotopic factors merge: T_b1 T_b1^-1 is trivial
    assert check_multitwist(H2, TwistWord(((b1, 1), (b1, -1)))).kind == "AllMeridian"
    with pytest.raises(HandlebodyError):
        check_multitwist(H2, TwistWord(((a1, 1), (b1, 1))))


def test_multitwist_paired_candidate(H2, g2):
    # disjoint non-meridians with the same handlebody word, twisted oppositely
    b1, other = curve(g2, "b1"), curve(g2, "b1 a2")
    assert geometric_intersection(b1, other) == 0
    v = check_multitwist(H2, TwistWord(((b1, 1), (other, -1))))
    assert v.kind == "PairedCandidate" and v.necessary_only
    assert v.matching == ((0, 1),)


def test_disk_path(H2, g2):
    start = list(H2.disk_system)
    target = [curve(g2, "a1 a2"), curve(g2, "a1 -b1 a2 b1 a2")]
    path = disk_exchange_path(H2, start, target, 6)
    assert path.found and len(path) == 3
    assert check_disk_path(H2, path) == []
    assert len(disk_exchange_path(H2, start, start, 6)) == 1
    with pytest.raises(HandlebodyError):
        disk_exchange_path(H2, start, [curve(g2, "b1"), curve(g2, "a2")], 6)


def test_check_disk_path_catches_intersection(H2, g2):
    bad = DiskPath(((curve(g2, "a1"), curve(g2, "a2")), (curve(g2, FIG_DELTA2), curve(g2, "a1 a2"))), True, 6)
    assert check_disk_path(H2, bad)


def test_meridian_counts_genus_two():
    S, curves = corpus(2, 6)
    H = standard_handlebody(2, S)
    by_len = [0] * 6
    for c in curves:
        if is_meridian(H, c):
            by_len[len(c) - 1] += 1
    assert by_len == [2, 1, 0, 2, 2, 9]
