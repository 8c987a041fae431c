"""Simple closed curves as crossing diagrams, intersection numbers and Dehn twists."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .overlay import Arrangement, CurveError, Overlay, check_word, reverse_word
from .polysurface import PolySurface, edge_of

__all__ = [
    "CurveDiagram",
    "CurveError",
    "Multicurve",
    "TwistWord",
    "algebraic_intersection",
    "apply_twist_word",
    "canonical_word",
    "curve",
    "dehn_twist",
    "edge_dual",
    "geometric_intersection",
    "homology_class",
    "is_essential",
    "is_isotopic",
    "normalize",
    "reduce_cyclic",
    "self_intersection",
    "symplectic_form",
]


def reduce_cyclic(word) -> list[int]:
    """Cancel backtracks (a crossing immediately undone through the same edge)."""
    out: list[int] = []
    for d in word:
        if out and out[-1] == d ^ 1:
            out.pop()
        else:
            out.append(d)
    i, j = 0, len(out) - 1
    while i < j and out[j] == out[i] ^ 1:
        i += 1
        j -= 1
    return out[i : j + 1]


def canonical_word(word) -> tuple[int, ...]:
    """Least rotation of the word or of its reverse (unoriented cyclic form)."""
    best = None
    for w in (list(word), reverse_word(word)):
        for k in range(len(w)):
            cand = tuple(w[k:] + w[:k])
            if best is None or cand < best:
                best = cand
    return best if best is not None else ()


def _least_rotation(word) -> tuple[int, ...]:
    w = list(word)
    return min(tuple(w[k:] + w[:k]) for k in range(len(w)))


@dataclass(frozen=True)
class CurveDiagram:
    """An oriented closed curve given by the darts it exits through, in order.

    ``slots[i]`` is the position of crossing ``i`` among this curve's points on
    its edge, counted along the positive direction of the edge.
    """

    surface: PolySurface
    crossings: tuple[int, ...]
    slots: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.crossings)

    def reversed(self) -> "CurveDiagram":
        n = len(self.crossings)
        return CurveDiagram(
            self.surface,
            tuple(reverse_word(self.crossings)),
            tuple(self.slots[n - 1 - i] for i in range(n)),
        )

    @cached_property
    def key(self) -> tuple[int, ...]:
        return canonical_word(self.crossings)

    @cached_property
    def oriented_key(self) -> tuple[int, ...]:
        return _least_rotation(self.crossings)

    @property
    def is_simple(self) -> bool:
        return _own_crossings(self) == 0

    def names(self) -> list[str]:
        return [self.surface.dart_name(d) for d in self.crossings]

    # -- file format ---------------------------------------------------------

    def to_records(self) -> list[list]:
        out = []
        for d, s in zip(self.crossings, self.slots):
            out.append([self.surface.edge_names[edge_of(d)], "+" if d & 1 == 0 else "-", s])
        return out

    def to_json(self) -> str:
        return json.dumps({"crossings": self.to_records()}, separators=(",", ":"))

    @classmethod
    def from_records(cls, surface: PolySurface, records) -> "CurveDiagram":
        darts, slots = [], []
        for rec in records:
            name, sign = rec[0], rec[1]
            e = surface.edge_index(name)
            if sign not in ("+", "-"):
                raise CurveError(f"bad sign {sign!r}")
            darts.append(2 * e + (0 if sign == "+" else 1))
            slots.append(int(rec[2]) if len(rec) > 2 else -1)
        check_word(surface, darts)
        if any(s < 0 for s in slots):
            return normalize_word(surface, darts, reduce=False)
        diagram = cls(surface, tuple(darts), tuple(slots))
        _check_slots(diagram)
        return diagram


def _check_slots(c: CurveDiagram) -> None:
    per_edge: dict[int, list[int]] = {}
    for d, s in zip(c.crossings, c.slots):
        per_edge.setdefault(edge_of(d), []).append(s)
    for e, lst in per_edge.items():
        if sorted(lst) != list(range(len(lst))):
            raise CurveError(f"slots on edge {c.surface.edge_names[e]} are not a strict total order")


def _arrangement_of(curves) -> Arrangement:
    """Arrangement placing each diagram with its own slots (no interleaving choice made)."""
    surface = curves[0].surface
    arr = Arrangement(surface)
    by_edge: dict[int, list[tuple[int, int]]] = {}
    for cv, c in enumerate(curves):
        if c.surface is not surface and c.surface != surface:
            raise CurveError("diagrams live on different surfaces")
        pids = []
        for d, s in zip(c.crossings, c.slots):
            pid = len(arr.dart_of)
            arr.dart_of.append(d)
            arr.curve_of.append(cv)
            pids.append(pid)
            by_edge.setdefault(edge_of(d), []).append((s, pid))
        arr.curves.append(pids)
    for e, lst in by_edge.items():
        lst.sort()
        arr.edge_points[e] = [p for _, p in lst]
    return arr


def _own_crossings(c: CurveDiagram) -> int:
    return _arrangement_of([c]).self_crossings(0)


def normalize_word(surface: PolySurface, word, reduce: bool = True) -> CurveDiagram:
    word = list(word)
    check_word(surface, word)
    if reduce:
        word = reduce_cyclic(word)
        if not word:
            raise CurveError("curve reduces to nothing (it is null-homotopic)")
        check_word(surface, word)
    arr = Arrangement.from_words(surface, [word])
    return CurveDiagram(surface, tuple(word), tuple(arr.slots(0)))


def curve(surface: PolySurface, spec) -> CurveDiagram:
    """Build a taut diagram from darts or signed edge names such as ``["a1", "-b2"]``."""
    if isinstance(spec, str):
        spec = spec.replace(",", " ").split()
    darts = [surface.parse_dart(t) if isinstance(t, str) else int(t) for t in spec]
    return normalize_word(surface, darts)


def edge_dual(surface: PolySurface, name: str) -> CurveDiagram:
    """The curve crossing edge ``name`` once (only meaningful when both sides lie in one face)."""
    return curve(surface, [name])


def normalize(c: CurveDiagram) -> CurveDiagram:
    """Taut representative: backtracks removed, strands ordered lexicographically."""
    return normalize_word(c.surface, c.crossings)


def self_intersection(c: CurveDiagram) -> int:
    """Self-crossings of the taut drawing of ``c``; zero certifies simplicity."""
    c = normalize(c)
    arr = Arrangement.from_words(c.surface, [c.crossings])
    return arr.self_crossings(0)


def _require_simple(*curves: CurveDiagram) -> list[CurveDiagram]:
    out = []
    for c in curves:
        n = normalize(c)
        if self_intersection(n):
            raise CurveError("curve is not simple")
        out.append(n)
    return out


def minimal_arrangement(curves) -> Arrangement:
    """Joint position of taut simple curves with all pairwise bigons removed."""
    curves = list(curves)
    if not curves:
        raise CurveError("no curves")
    surface = curves[0].surface
    for c in curves:
        if c.surface != surface:
            raise CurveError("diagrams live on different surfaces")
    arr = Arrangement.from_words(surface, [normalize(c).crossings for c in curves])
    for cv in range(len(curves)):
        if arr.self_crossings(cv):
            raise CurveError("curve is not simple")
    arr.remove_bigons()
    return arr


def geometric_intersection(a: CurveDiagram, b: CurveDiagram) -> int:
    """Minimal number of intersection points over isotopies of ``a`` and ``b``."""
    arr = minimal_arrangement([a, b])
    return arr.crossing_count(0, 1)


def intersection_matrix(curves) -> list[list[int]]:
    arr = minimal_arrangement(curves)
    n = len(curves)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = arr.crossing_count(i, j)
    return m


def algebraic_intersection(a: CurveDiagram, b: CurveDiagram) -> int:
    """Signed count of crossings; positive where ``b`` crosses ``a`` from right to left."""
    if a.surface != b.surface:
        raise CurveError("diagrams live on different surfaces")
    arr = Arrangement.from_words(a.surface, [normalize(a).crossings, normalize(b).crossings])
    return sum(ev[4] for ev in arr.events_along(0, [1]))


def crossing_vector(c: CurveDiagram) -> list[int]:
    v = [0] * c.surface.num_edges
    for d in c.crossings:
        v[edge_of(d)] += 1 if d & 1 == 0 else -1
    return v


def _cycle_basis(surface: PolySurface) -> list[list[tuple[int, int]]]:
    """Fundamental cycles of the 1-skeleton as lists of (edge, +-1)."""
    # endpoints of edge e: tail vertex of its positive dart, tail vertex of its negative dart
    n_v = surface.num_vertices
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(n_v)}
    for e in range(surface.num_edges):
        t, h = surface.tail_vertex(2 * e), surface.tail_vertex(2 * e + 1)
        adj[t].append((h, e, 1))
        adj[h].append((t, e, -1))
    parent: dict[int, tuple[int, int, int] | None] = {0: None}
    order = [0]
    tree_edges = set()
    for v in order:
        for w, e, s in adj[v]:
            if w not in parent:
                parent[w] = (v, e, s)
                tree_edges.add(e)
                order.append(w)

    def path_to_root(v):
        out = []
        while parent[v] is not None:
            u, e, s = parent[v]
            out.append((e, -s))  # walking from v back to u
            v = u
        return out

    cycles = []
    for e in range(surface.num_edges):
        if e in tree_edges:
            continue
        t, h = surface.tail_vertex(2 * e), surface.tail_vertex(2 * e + 1)
        # root -> t, edge e, h -> root
        to_t = [(ee, -s) for ee, s in reversed(path_to_root(t))]
        cyc = to_t + [(e, 1)] + path_to_root(h)
        acc: dict[int, int] = {}
        for ee, s in cyc:
            acc[ee] = acc.get(ee, 0) + s
        cycles.append(sorted((ee, s) for ee, s in acc.items() if s))
    return cycles


def _is_standard(surface: PolySurface) -> bool:
    from .polysurface import standard_surface

    g = surface.genus()
    return g >= 1 and surface == standard_surface(g)


def homology_class(c: CurveDiagram) -> list[int]:
    """Homology class of ``c``.

    On the standard surface the coordinates are with respect to the edge loops
    ``a1, b1, a2, b2, ...``, so that :func:`symplectic_form` of two classes is
    their algebraic intersection.  On other surfaces the vector lists the
    algebraic intersections with a basis of skeleton cycles.
    """
    v = crossing_vector(c)
    if _is_standard(c.surface):
        h = []
        for i in range(0, len(v), 2):
            h += [v[i + 1], -v[i]]
        return h
    if c.surface.num_vertices == 1:
        return v
    return [sum(s * v[e] for e, s in cyc) for cyc in _cycle_basis(c.surface)]


def symplectic_form(u, v) -> int:
    """Intersection form on standard-surface homology vectors (basis a1, b1, a2, b2, ...)."""
    total = 0
    for i in range(0, len(u), 2):
        total += u[i] * v[i + 1] - u[i + 1] * v[i]
    return total


def is_essential(c: CurveDiagram) -> bool:
    arr = Arrangement.from_words(c.surface, [normalize(c).crossings])
    if arr.self_crossings(0):
        raise CurveError("curve is not simple")
    return not Overlay(arr, (0,)).disk_regions()


def is_isotopic(a: CurveDiagram, b: CurveDiagram, oriented: bool = False) -> bool:
    """Exact isotopy test for simple essential curves (annulus criterion)."""
    if a.surface != b.surface:
        return False
    if a.key == b.key:
        return not oriented or a.oriented_key == b.oriented_key
    arr = minimal_arrangement([a, b])
    if arr.crossing_count(0, 1):
        return False
    walks = Overlay(arr, (0, 1)).annulus_between(0, 1)
    if walks is None:
        return False
    if oriented:
        # the annulus lies on the same side of both walks; parallel orientations
        # therefore show up as opposite walk directions
        return walks[0].runs[0].direction != walks[1].runs[0].direction
    return True


@dataclass(frozen=True)
class Multicurve:
    components: tuple[CurveDiagram, ...]

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def problems(self) -> list[str]:
        out = []
        comps = self.components
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if geometric_intersection(comps[i], comps[j]):
                    out.append(f"components {i} and {j} intersect")
                elif is_isotopic(comps[i], comps[j]):
                    out.append(f"components {i} and {j} are isotopic")
        return out


@dataclass(frozen=True)
class TwistWord:
    """Product of Dehn twist powers, applied left to right."""

    factors: tuple[tuple[CurveDiagram, int], ...]

    def __post_init__(self):
        for _, k in self.factors:
            if k == 0:
                raise ValueError("twist powers must be nonzero")

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((c, -k) for c, k in reversed(self.factors)))


def dehn_twist(target: CurveDiagram, twister: CurveDiagram, n: int) -> CurveDiagram:
    """Image of ``target`` under the ``n``-th power of the twist about ``twister``.

    Positive ``n`` is a left twist: arriving at the twist curve, turn left and
    go around it.
    """
    if n == 0:
        return normalize(target)
    (twister,) = _require_simple(twister)
    target = normalize(target)
    surface = target.surface
    arr = Arrangement.from_words(surface, [target.crossings, twister.crossings])
    events = arr.events_along(0, [1])
    if not events:
        return target
    a = list(target.crossings)
    t = list(twister.crossings)
    m = len(t)
    by_chord: dict[int, list] = {}
    for ev in events:
        by_chord.setdefault(ev[0], []).append(ev)
    word: list[int] = []
    for i in range(len(a)):
        word.append(a[i])
        for _, _, _, k, sign, _ in by_chord.get(i, ()):
            # sign > 0: the twist curve points to our left
            forward = (sign > 0) == (n > 0)
            if forward:
                detour = [t[(k + 1 + r) % m] for r in range(m)]
            else:
                detour = [t[(k - r) % m] ^ 1 for r in range(m)]
            word.extend(detour * abs(n))
    result = normalize_word(surface, word)
    if self_intersection(result):
        raise CurveError("twist produced a non-simple diagram")
    return result


def apply_twist_word(w: TwistWord, c: CurveDiagram) -> CurveDiagram:
    out = normalize(c)
    for twister, k in w.factors:
        out = dehn_twist(out, twister, k)
    return out
