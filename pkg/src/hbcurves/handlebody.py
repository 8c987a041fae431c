"""Handlebody structures given by disk systems: meridians, waves, multitwists, disk exchanges."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from . import freegroup
from .curves import (
    CurveDiagram,
    CurveError,
    Multicurve,
    TwistWord,
    curve,
    geometric_intersection,
    is_essential,
    is_isotopic,
    minimal_arrangement,
    normalize,
    normalize_word,
    reduce_cyclic,
    self_intersection,
)
from .overlay import Arrangement, Overlay
from .polysurface import PolySurface, standard_surface


class HandlebodyError(ValueError):
    """Raised when an input violates a handlebody precondition."""


def complement_components(curves) -> int:
    """Number of components of the surface cut along pairwise disjoint curves."""
    curves = list(curves)
    arr = minimal_arrangement(curves)
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            if arr.crossing_count(i, j):
                raise HandlebodyError(f"curves {i} and {j} intersect")
    return Overlay(arr, range(len(curves))).n_regions


@dataclass(frozen=True)
class HandlebodyStructure:
    """A handlebody bounded by ``surface``, fixed by a reduced disk system."""

    surface: PolySurface
    disk_system: tuple[CurveDiagram, ...]
    generator_names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.generator_names:
            names = tuple(f"x{i + 1}" for i in range(len(self.disk_system)))
            object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "disk_system", tuple(normalize(c) for c in self.disk_system))

    @property
    def genus(self) -> int:
        return len(self.disk_system)

    def problems(self) -> list[str]:
        out = []
        g = self.surface.genus()
        if len(self.disk_system) != g:
            out.append(f"disk system has {len(self.disk_system)} curves, surface genus is {g}")
        for i, c in enumerate(self.disk_system):
            if c.surface != self.surface:
                out.append(f"disk {i} lives on another surface")
                return out
            if self_intersection(c):
                out.append(f"disk {i} is not simple")
            elif complement_components([c]) != 1:
                out.append(f"disk {i} is separating")
        if out:
            return out
        try:
            if complement_components(self.disk_system) != 1:
                out.append("complement of the disk system is disconnected")
        except HandlebodyError as exc:
            out.append(str(exc))
        return out

    def check(self) -> "HandlebodyStructure":
        bad = self.problems()
        if bad:
            raise HandlebodyError("; ".join(bad))
        return self

    # -- file format ---------------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "generators": list(self.generator_names),
                "disks": [c.to_records() for c in self.disk_system],
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, surface: PolySurface, text: str) -> "HandlebodyStructure":
        data = json.loads(text)
        disks = tuple(CurveDiagram.from_records(surface, recs) for recs in data["disks"])
        return cls(surface, disks, tuple(data.get("generators") or ())).check()


def standard_handlebody(g: int, surface: PolySurface | None = None) -> HandlebodyStructure:
    """Disk ``i`` is the taut curve crossing edge ``a_i`` once and no other edge."""
    surface = surface or standard_surface(g)
    disks = tuple(curve(surface, [f"a{i + 1}"]) for i in range(g))
    return HandlebodyStructure(surface, disks).check()


def handlebody_word(H: HandlebodyStructure, c: CurveDiagram) -> tuple[int, ...]:
    """Signed crossings of ``c`` with the disk system, freely and cyclically reduced.

    Letter ``i`` (1-based) records a crossing of disk ``i`` from its right to
    its left; ``-i`` the opposite direction.
    """
    c = normalize(c)
    arr = Arrangement.from_words(H.surface, [c.crossings] + [d.crossings for d in H.disk_system])
    letters = [-sign * k for _, _, k, _, sign, _ in arr.events_along(0, range(1, H.genus + 1))]
    return freegroup.cyclic_reduce(letters)


def is_meridian(H: HandlebodyStructure, c: CurveDiagram) -> bool:
    if self_intersection(c):
        raise HandlebodyError("meridian test needs a simple curve")
    return not handlebody_word(H, c)


def is_reduced_disk_system(H: HandlebodyStructure, m) -> bool:
    comps = list(m)
    if len(comps) != H.genus:
        raise HandlebodyError(f"expected {H.genus} curves, got {len(comps)}")
    for c in comps:
        if self_intersection(c) or not is_essential(c) or not is_meridian(H, c):
            return False
    try:
        return complement_components(comps) == 1
    except HandlebodyError:
        return False


# -- waves -----------------------------------------------------------------------


@dataclass(frozen=True)
class Wave:
    host: int  # index of the component of A carrying the subarc
    subarc: tuple[int, int]  # chord indices of the host where the subarc starts and ends
    hit_component: int  # index of the component of B met at both ends
    side: str  # side of the hit component on which the subarc lies
    arc_darts: tuple[int, ...]  # edge crossings of the subarc
    surgery: CurveDiagram

    def to_dict(self) -> dict:
        s = self.surgery.surface
        return {
            "host": self.host,
            "subarc": list(self.subarc),
            "hit_component": self.hit_component,
            "side": self.side,
            "arc": [s.dart_name(d) for d in self.arc_darts],
            "surgery": self.surgery.to_records(),
        }


def _cyc_range(i1: int, t1: float, i2: int, t2: float, n: int) -> int:
    """Number of points passed walking forward from chord i1 (at t1) to chord i2 (at t2)."""
    steps = (i2 - i1) % n
    if steps == 0 and not t2 > t1:
        steps = n
    return steps


def _surgery_candidates(arr: Arrangement, host: int, ev1, ev2):
    pts_a = arr.curves[host]
    na = len(pts_a)
    i1, t1 = ev1[0], ev1[1]
    i2, t2 = ev2[0], ev2[1]
    arc = [arr.dart_of[pts_a[(i1 + 1 + r) % na]] for r in range(_cyc_range(i1, t1, i2, t2, na))]
    beta = ev1[2]
    pts_b = arr.curves[beta]
    nb = len(pts_b)
    j1, u1 = ev1[3], ev1[5]
    j2, u2 = ev2[3], ev2[5]
    fwd = [arr.dart_of[pts_b[(j2 + 1 + r) % nb]] for r in range(_cyc_range(j2, u2, j1, u1, nb))]
    back = [arr.dart_of[pts_b[(j2 - r) % nb]] ^ 1 for r in range(_cyc_range(j1, u1, j2, u2, nb))]
    return arc, [arc + fwd, arc + back]


def _wave_candidates(arr: Arrangement, n_a: int, n_b: int):
    """Same-component, same-side subarcs of A with respect to B, in traversal order."""
    others = range(n_a, n_a + n_b)
    for host in range(n_a):
        events = arr.events_along(host, others)
        m = len(events)
        if m < 2:
            continue
        for k in range(m):
            ev1, ev2 = events[k], events[(k + 1) % m]
            if ev1[2] != ev2[2] or ev1[4] != -ev2[4]:
                continue
            yield host, ev1, ev2


def has_wave(A, B) -> bool:
    """Whether some component of A has a wave with respect to B (minimal position assumed)."""
    A, B = list(A), list(B)
    arr = minimal_arrangement(A + B)
    return any(True for _ in _wave_candidates(arr, len(A), len(B)))


def find_wave(A, B, H: HandlebodyStructure, check_meridians: bool = True) -> Wave | None:
    """A wave of A with respect to B whose surgery curve is a meridian; None if A and B are disjoint."""
    A, B = list(A), list(B)
    if check_meridians:
        for name, mc in (("A", A), ("B", B)):
            for i, c in enumerate(mc):
                if not is_meridian(H, c):
                    raise HandlebodyError(f"component {i} of {name} is not a meridian")
    arr = minimal_arrangement(A + B)
    n_a, n_b = len(A), len(B)
    if not any(arr.crossing_count(i, n_a + j) for i in range(n_a) for j in range(n_b)):
        return None
    surface = H.surface
    for host, ev1, ev2 in _wave_candidates(arr, n_a, n_b):
        arc, words = _surgery_candidates(arr, host, ev1, ev2)
        for w in words:
            w = reduce_cyclic(w)
            if not w:
                continue
            c = normalize_word(surface, w)
            if self_intersection(c) or not is_essential(c) or not is_meridian(H, c):
                continue
            side = "right" if ev1[4] > 0 else "left"
            return Wave(host, (ev1[0], ev2[0]), ev1[2] - n_a, side, tuple(arc), c)
    raise HandlebodyError("no wave with a meridian surgery found (inputs are not meridians of one handlebody)")


# -- multitwists -----------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionVerdict:
    """Outcome of the multitwist extension test.

    ``kind`` is ``AllMeridian``, ``PairedCandidate`` (necessary conditions
    only) or ``Obstructed``; obstructions carry the offending factor indices.
    """

    kind: str
    reason: str = ""
    witness: tuple[int, ...] = ()
    matching: tuple[tuple[int, int], ...] = ()
    meridians: tuple[int, ...] = ()
    necessary_only: bool = False

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "reason": self.reason,
            "witness": list(self.witness),
            "matching": [list(p) for p in self.matching],
            "meridians": list(self.meridians),
            "necessary_only": self.necessary_only,
        }


def _merge_factors(spec: TwistWord):
    """Collapse isotopic factors (twists about one curve commute and add)."""
    merged: list[list] = []
    for c, k in spec.factors:
        c = normalize(c)
        for item in merged:
            if is_isotopic(item[0], c):
                item[1] += k
                break
        else:
            merged.append([c, k])
    return [(c, k) for c, k in merged if k]


def check_multitwist(H: HandlebodyStructure, spec: TwistWord) -> ExtensionVerdict:
    factors = _merge_factors(spec)
    for i, (c, _) in enumerate(factors):
        if self_intersection(c):
            raise HandlebodyError(f"factor {i} is not simple")
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if geometric_intersection(factors[i][0], factors[j][0]):
                raise HandlebodyError(f"factors {i} and {j} intersect")
    if not factors:
        return ExtensionVerdict("AllMeridian")
    mer = [is_meridian(H, c) for c, _ in factors]
    meridians = tuple(i for i, m in enumerate(mer) if m)
    rest = [i for i, m in enumerate(mer) if not m]
    if not rest:
        return ExtensionVerdict("AllMeridian", meridians=meridians)
    if len(rest) % 2:
        return ExtensionVerdict(
            "Obstructed", "odd number of non-meridian curves cannot be paired by annuli", tuple(rest), meridians=meridians
        )
    signs = {1 if k > 0 else -1 for _, k in factors}
    if len(signs) == 1:
        return ExtensionVerdict(
            "Obstructed", "twists of one handedness about non-meridians", tuple(rest), meridians=meridians
        )
    words = {i: freegroup.conjugacy_key(handlebody_word(H, factors[i][0]), up_to_inverse=True) for i in rest}

    def ok(i, j):
        return (factors[i][1] > 0) != (factors[j][1] > 0) and words[i] == words[j]

    def match(todo):
        if not todo:
            return []
        i = todo[0]
        for j in todo[1:]:
            if ok(i, j):
                sub = match([x for x in todo[1:] if x != j])
                if sub is not None:
                    return [(i, j)] + sub
        return None

    found = match(rest)
    if found is None:
        lonely = tuple(i for i in rest if not any(ok(i, j) for j in rest if j != i)) or tuple(rest)
        return ExtensionVerdict("Obstructed", "no admissible annulus pairing", lonely, meridians=meridians)
    return ExtensionVerdict("PairedCandidate", "", (), tuple(found), meridians, necessary_only=True)


# -- disk exchanges ----------------------------------------------------------------


@dataclass
class DiskSystemSpace:
    """Reduced disk systems built from meridians of bounded complexity."""

    H: HandlebodyStructure
    bound: int
    meridians: list[CurveDiagram] = field(default_factory=list)
    disjoint: list[set] = field(default_factory=list)
    registry: object = None

    @classmethod
    def build(cls, H: HandlebodyStructure, bound: int, extra=()) -> "DiskSystemSpace":
        from .complexgraph import CurveRegistry, enumerate_curves

        space = cls(H, bound)
        space.registry = CurveRegistry(H.surface)
        for key in enumerate_curves(H.surface, bound):
            c = key.diagram(H.surface)
            if is_meridian(H, c):
                space._add(c)
        for c in extra:
            space.index_of(c)
        return space

    def _add(self, c: CurveDiagram) -> int:
        idx, new = self.registry.lookup_or_add(c)
        if new:
            self.meridians.append(self.registry.curves[idx])
            self.disjoint.append(set())
            for j in range(len(self.meridians) - 1):
                if geometric_intersection(self.meridians[j], self.meridians[idx]) == 0:
                    self.disjoint[idx].add(j)
                    self.disjoint[j].add(idx)
        return idx

    def index_of(self, c: CurveDiagram) -> int:
        if not is_meridian(self.H, c):
            raise HandlebodyError("not a meridian")
        return self._add(normalize(c))

    def is_reduced(self, system) -> bool:
        return complement_components([self.meridians[i] for i in system]) == 1

    def neighbours(self, system: tuple[int, ...], target=None):
        cand = set.intersection(*(self.disjoint[i] for i in system)) - set(system)
        if target is not None:
            # wave surgery of the target system along the current one
            cur = [self.meridians[i] for i in system]
            tgt = [self.meridians[i] for i in target]
            try:
                wave = find_wave(tgt, cur, self.H, check_meridians=False)
            except HandlebodyError:
                wave = None
            if wave is not None and len(wave.surgery) <= self.bound:
                k = self._add(wave.surgery)
                if all(k in self.disjoint[i] for i in system):
                    cand.add(k)
        out = []
        for m in sorted(cand):
            for pos in range(len(system)):
                nxt = tuple(sorted(system[:pos] + system[pos + 1 :] + (m,)))
                if self.is_reduced(nxt):
                    out.append(nxt)
        return out

    def systems(self) -> list[tuple[int, ...]]:
        """All reduced systems made of the enumerated meridians."""
        g = self.H.genus
        out = []

        def rec(start, chosen):
            if len(chosen) == g:
                if self.is_reduced(tuple(chosen)):
                    out.append(tuple(chosen))
                return
            for m in range(start, len(self.meridians)):
                if all(m in self.disjoint[c] for c in chosen):
                    rec(m + 1, chosen + [m])

        rec(0, [])
        return out


@dataclass(frozen=True)
class DiskPath:
    systems: tuple[tuple[CurveDiagram, ...], ...]
    found: bool
    bound: int

    def __len__(self) -> int:
        return len(self.systems)


def disk_exchange_path(H: HandlebodyStructure, C, C2, bound: int, space: DiskSystemSpace | None = None) -> DiskPath:
    """Breadth-first search for reduced systems C = C_1, ..., C_n = C2 with consecutive ones disjoint.

    Intermediate systems use meridians with at most ``bound`` crossings.
    """
    C, C2 = list(C), list(C2)
    for name, system in (("start", C), ("target", C2)):
        if not is_reduced_disk_system(H, system):
            raise HandlebodyError(f"{name} is not a reduced disk system")
    if space is None:
        space = DiskSystemSpace.build(H, bound)
    start = tuple(sorted(space.index_of(c) for c in C))
    goal = tuple(sorted(space.index_of(c) for c in C2))
    prev = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            path = []
            while cur is not None:
                path.append(tuple(space.meridians[i] for i in cur))
                cur = prev[cur]
            return DiskPath(tuple(reversed(path)), True, bound)
        for nxt in space.neighbours(cur, goal):
            if nxt not in prev:
                prev[nxt] = cur
                queue.append(nxt)
    return DiskPath((), False, bound)


def check_disk_path(H: HandlebodyStructure, path: DiskPath) -> list[str]:
    """Independent re-check: every system reduced, consecutive systems disjoint."""
    out = []
    for k, system in enumerate(path.systems):
        if not is_reduced_disk_system(H, system):
            out.append(f"system {k} is not reduced")
    for k in range(len(path.systems) - 1):
        for a in path.systems[k]:
            for b in path.systems[k + 1]:
                if geometric_intersection(a, b):
                    out.append(f"systems {k} and {k + 1} intersect")
    return out


__all__ = [
    "DiskPath",
    "DiskSystemSpace",
    "ExtensionVerdict",
    "HandlebodyError",
    "HandlebodyStructure",
    "Multicurve",
    "Wave",
    "check_disk_path",
    "check_multitwist",
    "complement_components",
    "disk_exchange_path",
    "find_wave",
    "handlebody_word",
    "has_wave",
    "is_meridian",
    "is_reduced_disk_system",
    "standard_handlebody",
]
