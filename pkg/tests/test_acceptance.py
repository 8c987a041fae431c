"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line."""

import random
import time
from collections import deque

from conftest import corpus, record
from hyperbolic_oracle import IntersectionOracle

from hbcurves import standard_surface
from hbcurves.covers import (
    apply_move,
    build_cover,
    degree_one_search,
    extends_to_handlebody_cover,
    hom_from_intersection,
    lift_degree,
    residue_moves,
)
from hbcurves.curves import (
    TwistWord,
    algebraic_intersection,
    dehn_twist,
    geometric_intersection,
    self_intersection,
)
from hbcurves.handlebody import (
    DiskSystemSpace,
    check_disk_path,
    check_multitwist,
    disk_exchange_path,
    find_wave,
    is_meridian,
    standard_handlebody,
)
from hbcurves.scenarios import fig1, recur


def test_criterion_1_fig1_pipeline():
    t = time.perf_counter()
    res = fig1().results
    elapsed = time.perf_counter() - t
    ok = (
        res["cover_degree"] == 3
        and res["cover_genus"] == 4
        and res["cover_euler_characteristic"] == -6
        and res["elevations"] == {"delta1": 3, "delta2": 3}
        and all(len(m) == 2 for m in res["delta2_met_by_each_delta1_elevation"])
        and all(p[2] == 1 for p in res["odd_pairs"])
        and len(res["odd_pairs"]) == 6
        and res["certificate"]["odd_count"] % 2 == 1
        and elapsed < 10
    )
    record(1, ok, f"genus {res['cover_genus']}, chi {res['cover_euler_characteristic']}, "
                  f"{len(res['odd_pairs'])} odd pairs, {elapsed:.2f}s")
    assert ok


def _meridian_multicurves(H, curves, total):
    mers = [c for c in curves if is_meridian(H, c)]
    n = len(mers)
    inter = [[geometric_intersection(a, b) for b in mers] for a in mers]
    out = []

    def rec(start, chosen, used):
        if chosen:
            out.append(tuple(chosen))
        for j in range(start, n):
            if used + len(mers[j]) <= total and all(inter[j][c] == 0 for c in chosen):
                rec(j + 1, chosen + [j], used + len(mers[j]))

    rec(0, [], 0)
    return mers, inter, out


def test_criterion_2_wave_totality():
    S, curves = corpus(2, 8)
    H = standard_handlebody(2, S)
    mers, inter, multis = _meridian_multicurves(H, curves, 8)
    pairs = failures = 0
    for A in multis:
        for B in multis:
            if not any(inter[a][b] for a in A for b in B):
                continue
            pairs += 1
            w = find_wave([mers[a] for a in A], [mers[b] for b in B], H)
            if w is None or self_intersection(w.surgery) or not is_meridian(H, w.surgery):
                failures += 1
    ok = failures == 0 and pairs > 0
    record(2, ok, f"{len(multis)} meridian multicurves, {pairs} intersecting pairs, {failures} failures")
    assert ok


def test_criterion_3_extension_decision():
    S, curves = corpus(3, 4)
    H = standard_handlebody(3, S)
    mers = [c for c in curves if is_meridian(H, c)]
    mismatches = checked = 0
    for n in (2, 3, 4, 5):
        for alpha in curves:
            cover = build_cover(S, hom_from_intersection(S, alpha, n))
            verdict = extends_to_handlebody_cover(cover, H).extends
            expected = all(algebraic_intersection(d, alpha) % n == 0 for d in H.disk_system)
            all_lift = all(lift_degree(cover, m) == 1 for m in mers)
            checked += 1
            if verdict != expected or verdict != all_lift:
                mismatches += 1
    ok = mismatches == 0
    record(3, ok, f"{checked} covers over {len(curves)} curves, {len(mers)} meridians, {mismatches} mismatches")
    assert ok


def test_criterion_4_multitwist_verdicts():
    S, curves = corpus(2, 5)
    H = standard_handlebody(2, S)
    curves = list(curves)
    mer = [is_meridian(H, c) for c in curves]
    n = len(curves)
    inter = [[geometric_intersection(a, b) for b in curves] for a in curves]
    multis = []
    for i in range(n):
        multis.append((i,))
        for j in range(i + 1, n):
            if inter[i][j] == 0:
                multis.append((i, j))
                for k in range(j + 1, n):
                    if inter[i][k] == 0 and inter[j][k] == 0:
                        multis.append((i, j, k))
    same_sign = parity = bad = 0
    for m in multis:
        for sign in (1, -1):
            for power in (1, 2):
                v = check_multitwist(H, TwistWord(tuple((curves[i], sign * power) for i in m)))
                same_sign += 1
                if (v.kind == "AllMeridian") != all(mer[i] for i in m):
                    bad += 1
        if len(m) % 2 and not any(mer[i] for i in m):
            signs = [1 if t % 2 else -1 for t in range(len(m))]
            v = check_multitwist(H, TwistWord(tuple((curves[i], s) for i, s in zip(m, signs))))
            parity += 1
            if v.kind != "Obstructed" or "odd number" not in v.reason:
                bad += 1
    ok = bad == 0
    record(4, ok, f"{same_sign} same-sign specs, {parity} odd non-meridian specs, {bad} disagreements")
    assert ok


def test_criterion_5_intersection_oracle_and_twists():
    S, curves = corpus(2, 7)
    oracle = IntersectionOracle(S)
    pairs = bad = 0
    for i, a in enumerate(curves):
        for b in curves[i:]:
            if len(a) + len(b) > 8:
                continue
            pairs += 1
            if geometric_intersection(a, b) != oracle.intersection(a.crossings, b.crossings):
                bad += 1
    rng = random.Random(5)
    short = [c for c in curves if len(c) <= 4]
    by_i = {1: [], 2: []}
    for i, a in enumerate(short):
        for b in short[i + 1:]:
            k = geometric_intersection(a, b)
            if k in by_i:
                by_i[k].append((a, b))
    twist_bad = twist_checked = 0
    for k, lst in by_i.items():
        for a, b in rng.sample(lst, min(12, len(lst))):
            for power in (1, 2, 3):
                twist_checked += 1
                if geometric_intersection(dehn_twist(a, b, power), a) != power * k * k:
                    twist_bad += 1
    ok = bad == 0 and twist_bad == 0 and twist_checked > 0
    record(5, ok, f"{pairs} pairs vs oracle ({bad} mismatches), {twist_checked} twist checks ({twist_bad} failures)")
    assert ok


def test_criterion_6_disk_exchange_connectivity():
    S = standard_surface(2)
    H = standard_handlebody(2, S)
    space = DiskSystemSpace.build(H, 6)
    systems = space.systems()
    unreachable = invalid = 0
    for i, a in enumerate(systems):
        for b in systems[i + 1:]:
            path = disk_exchange_path(H, [space.meridians[x] for x in a], [space.meridians[x] for x in b], 6, space)
            if not path.found:
                unreachable += 1
            elif check_disk_path(H, path):
                invalid += 1
    ok = unreachable == 0 and invalid == 0 and len(systems) > 1
    record(6, ok, f"{len(systems)} reduced systems, {unreachable} unreachable pairs, {invalid} invalid paths")
    assert ok


def _oracle_distances(g, n):
    """Distance of every residue tuple to a tuple with a zero, by BFS from all targets."""
    moves = residue_moves(g, n)
    dist = {}
    queue = deque()
    for code in range(n**g):
        t = tuple((code // n**j) % n for j in range(g))
        if 0 in t:
            dist[t] = 0
            queue.append(t)
    while queue:
        cur = queue.popleft()
        for m in moves:  # every move is invertible, so the move graph is symmetric
            nxt = apply_move(cur, m, n)
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    return dist


def test_criterion_7_degree_one_search():
    tuples = bad = 0
    for g in (2, 3):
        for n in range(2, 13):
            dist = _oracle_distances(g, n)
            for code in range(n**g):
                r = tuple((code // n**j) % n for j in range(g))
                tuples += 1
                res = degree_one_search(r, n)
                state = r
                for m in res.moves:
                    state = apply_move(state, m, n)
                if (
                    r not in dist
                    or not res.found
                    or state != res.residues
                    or state[res.zero_index - 1] != 0
                    or len(res.moves) != dist[r]
                ):
                    bad += 1
    ok = bad == 0
    record(7, ok, f"{tuples} residue tuples, {bad} disagreements with the reachability oracle")
    assert ok


def test_criterion_8_recur_scenario():
    res = recur().results
    violations = [v["wave_violation"] for v in res["covers"].values()]
    ok = res["is_meridian"] and res["self_intersection"] == 0 and all(violations)
    record(8, ok, f"delta = {res['delta']}, wave violation in {sum(violations)}/{len(violations)} covers")
    assert ok
