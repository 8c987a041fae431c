"""Bounded enumeration of curve classes and finite slices of curve-type graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .curves import (
    CurveDiagram,
    CurveError,
    canonical_word,
    homology_class,
    intersection_matrix,
    is_essential,
    is_isotopic,
    normalize_word,
)
from .overlay import Arrangement
from .polysurface import PolySurface

FLAVORS = ("curve", "disk", "multicurve")

# rough cap on the number of cyclic words examined by one enumeration
MAX_WORDS = 20_000_000


class ResourceGuardError(RuntimeError):
    """Raised when a requested bound would enumerate too many words."""


@dataclass(frozen=True, order=True)
class CurveKey:
    """Isotopy class label: shortest least cyclic word found plus a fingerprint."""

    word: tuple[int, ...]
    fingerprint: tuple[int, ...] = field(compare=False)

    def diagram(self, surface: PolySurface) -> CurveDiagram:
        return normalize_word(surface, self.word)

    def names(self, surface: PolySurface) -> str:
        return " ".join(surface.dart_name(d) for d in self.word)


def _estimate_words(surface: PolySurface, bound: int) -> int:
    branch = max(len(f) for f in surface.faces) - 1
    total, layer = 0, 2 * surface.num_edges
    for _ in range(bound):
        total += layer
        layer *= max(branch, 1)
    return total


def cyclic_words(surface: PolySurface, length: int):
    """Cyclically reduced, face-consistent words in least rotation/reflection form."""
    face_of = surface.face_of
    n_darts = 2 * surface.num_edges
    word: list[int] = []

    def prefix_ok() -> bool:
        # a rotation starting at k that already beats the word's prefix can be pruned
        n = len(word)
        for k in range(1, n):
            for r in range(n - k):
                a, b = word[k + r], word[r]
                if a != b:
                    if a < b:
                        return False
                    break
        return True

    def rec():
        if len(word) == length:
            if word[-1] ^ 1 != word[0] and face_of[word[0]] == face_of[word[-1] ^ 1]:
                t = tuple(word)
                if canonical_word(t) == t:
                    yield t
            return
        for d in range(word[0] if word else 0, n_darts):
            if word and (d == word[-1] ^ 1 or face_of[d] != face_of[word[-1] ^ 1]):
                continue
            word.append(d)
            if prefix_ok():
                yield from rec()
            word.pop()

    yield from rec()


def drawn_simple(surface: PolySurface, word) -> bool:
    return Arrangement.from_words(surface, [word]).is_simple_fast(0)


def _edge_duals(surface: PolySurface) -> list[CurveDiagram]:
    out = []
    for e in range(surface.num_edges):
        if surface.face_of[2 * e] == surface.face_of[2 * e + 1]:
            out.append(normalize_word(surface, [2 * e]))
    return out


def fingerprint(c: CurveDiagram, probes) -> tuple[int, ...]:
    from .curves import geometric_intersection

    h = homology_class(c)
    lead = next((x for x in h if x), 0)
    if lead < 0:
        h = [-x for x in h]
    return tuple(geometric_intersection(c, p) for p in probes) + tuple(h)


class CurveRegistry:
    """Isotopy classes seen so far, with exact lookup."""

    def __init__(self, surface: PolySurface, probes=None):
        self.surface = surface
        self.probes = _edge_duals(surface) if probes is None else list(probes)
        self.curves: list[CurveDiagram] = []
        self._buckets: dict[tuple, list[int]] = {}

    def lookup(self, c: CurveDiagram):
        fp = fingerprint(c, self.probes)
        for idx in self._buckets.get(fp, ()):
            if is_isotopic(c, self.curves[idx]):
                return idx, fp
        return None, fp

    def lookup_or_add(self, c: CurveDiagram) -> tuple[int, bool]:
        idx, fp = self.lookup(c)
        if idx is not None:
            return idx, False
        self.curves.append(c)
        self._buckets.setdefault(fp, []).append(len(self.curves) - 1)
        return len(self.curves) - 1, True


def enumerate_curves(surface: PolySurface, max_crossings: int, probes=None) -> list[CurveKey]:
    """All essential simple curve classes with a taut diagram of at most ``max_crossings`` crossings.

    Classes are deduplicated by an exact isotopy test; each is represented by
    its shortest, lexicographically least word.  Output is sorted by
    (length, word).
    """
    if max_crossings < 1:
        raise ValueError("max_crossings must be at least 1")
    if _estimate_words(surface, max_crossings) > MAX_WORDS:
        raise ResourceGuardError(f"bound {max_crossings} is too large for this surface")
    probes = _edge_duals(surface) if probes is None else list(probes)
    buckets: dict[tuple, list[CurveDiagram]] = {}
    keys: list[CurveKey] = []
    for length in range(1, max_crossings + 1):
        for w in cyclic_words(surface, length):
            if not drawn_simple(surface, w):
                continue
            c = normalize_word(surface, w)
            try:
                if not is_essential(c):
                    continue
            except CurveError:
                continue
            fp = fingerprint(c, probes)
            bucket = buckets.setdefault(fp, [])
            if any(is_isotopic(c, other) for other in bucket):
                continue
            bucket.append(c)
            keys.append(CurveKey(w, fp))
    keys.sort(key=lambda k: (len(k.word), k.word))
    return keys


# -- graph slices -------------------------------------------------------------------


@dataclass(frozen=True)
class GraphSlice:
    """Finite induced subgraph of the curve, disk or multicurve graph.

    Vertices of the multicurve flavor are tuples of indices into ``curves``;
    the other flavors have one curve per vertex.
    """

    flavor: str
    curves: tuple[CurveDiagram, ...]
    vertices: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]
    bound: int | None = None

    def __len__(self) -> int:
        return len(self.vertices)

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def label(self, v: int) -> str:
        return " + ".join(" ".join(self.curves[i].names()) for i in self.vertices[v])

    def adjacency_matrix(self) -> list[list[int]]:
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for u, v in self.edges:
            m[u][v] = m[v][u] = 1
        return m

    def matrix_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.adjacency_matrix()) + "\n"

    def to_dot(self) -> str:
        lines = [f'graph "{self.flavor}" {{', f'  label="{self.flavor} slice, bound {self.bound}";']
        for v in range(len(self.vertices)):
            lines.append(f'  v{v} [label="{self.label(v)}"];')
        for u, v in sorted(self.edges):
            lines.append(f"  v{u} -- v{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _as_diagrams(surface: PolySurface, curves) -> list[CurveDiagram]:
    out = []
    for c in curves:
        out.append(c.diagram(surface) if isinstance(c, CurveKey) else c)
    return out


def pairwise_intersections(curves) -> list[list[int]]:
    from .curves import geometric_intersection

    n = len(curves)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = geometric_intersection(curves[i], curves[j])
    return m


def graph_slice(
    surface: PolySurface,
    curves,
    H=None,
    flavor: str = "curve",
    bound: int | None = None,
    max_components: int = 2,
) -> GraphSlice:
    """Slice spanned by ``curves``: edges join disjoint vertices.

    The disk flavor keeps only meridians of ``H``; the multicurve flavor takes
    every set of at most ``max_components`` pairwise disjoint curves as a vertex.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    if flavor == "disk" and H is None:
        raise ValueError("the disk flavor needs a handlebody structure")
    diagrams = _as_diagrams(surface, curves)
    if flavor == "disk":
        from .handlebody import is_meridian

        diagrams = [c for c in diagrams if is_meridian(H, c)]
    m = pairwise_intersections(diagrams)
    n = len(diagrams)
    if flavor == "multicurve":
        vertices: list[tuple[int, ...]] = []

        def grow(chosen: tuple[int, ...], start: int):
            vertices.append(chosen)
            if len(chosen) == max_components:
                return
            for j in range(start, n):
                if all(m[i][j] == 0 for i in chosen):
                    grow(chosen + (j,), j + 1)

        for i in range(n):
            grow((i,), i + 1)
        vertices.sort(key=lambda v: (len(v), v))
        edges = set()
        for a in range(len(vertices)):
            for b in range(a + 1, len(vertices)):
                if all(m[i][j] == 0 and i != j for i in vertices[a] for j in vertices[b]):
                    edges.add((a, b))
    else:
        vertices = [(i,) for i in range(n)]
        edges = {(i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] == 0}
    return GraphSlice(flavor, tuple(diagrams), tuple(vertices), frozenset(edges), bound)


def vertex_index(sl: GraphSlice, c: CurveDiagram) -> int | None:
    """Index of the single-curve vertex isotopic to ``c``."""
    for v, comps in enumerate(sl.vertices):
        if len(comps) == 1 and is_isotopic(sl.curves[comps[0]], c):
            return v
    return None


@dataclass(frozen=True)
class LinkReport:
    bound: int | None
    system: tuple[int, ...]
    link: tuple[int, ...]  # vertices disjoint from (and not in) the system
    non_meridians: tuple[int, ...]  # link vertices that are not meridians
    reduced: bool  # whether the system is a reduced disk system

    @property
    def contained(self) -> bool:
        """Whether the link lies in the disk graph."""
        return not self.non_meridians

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "system": list(self.system),
            "link": list(self.link),
            "non_meridians": list(self.non_meridians),
            "reduced": self.reduced,
            "contained": self.contained,
        }


def link_check(sl: GraphSlice, system, H) -> LinkReport:
    """Link of a set of slice vertices, and which of its vertices are meridians.

    For a reduced disk system every link vertex must be a meridian.
    """
    from .handlebody import is_meridian, is_reduced_disk_system

    if sl.flavor == "multicurve":
        raise ValueError("link check works on single-curve slices")
    system = tuple(system)
    if any(not 0 <= v < len(sl.vertices) for v in system):
        raise ValueError("system vertex not in the slice")
    link = tuple(
        v for v in range(len(sl.vertices)) if v not in system and all(sl.adjacent(v, s) for s in system)
    )
    bad = tuple(v for v in link if not is_meridian(H, sl.curves[sl.vertices[v][0]]))
    comps = [sl.curves[sl.vertices[v][0]] for v in system]
    reduced = len(comps) == H.genus and is_reduced_disk_system(H, comps)
    return LinkReport(sl.bound, system, link, bad, reduced)


def is_superinjective(table, dom: GraphSlice, cod: GraphSlice):
    """Whether ``table`` (dom vertex -> cod vertex) preserves adjacency and non-adjacency.

    Returns ``(True, None)`` or ``(False, (u, v))`` with a violating pair.
    """
    table = dict(table)
    missing = [v for v in range(len(dom.vertices)) if v not in table]
    if missing:
        raise ValueError(f"map is not defined on vertex {missing[0]}")
    if any(not 0 <= w < len(cod.vertices) for w in table.values()):
        raise ValueError("map sends a vertex outside the codomain")
    n = len(dom.vertices)
    for u in range(n):
        for v in range(u + 1, n):
            a, b = table[u], table[v]
            if dom.adjacent(u, v) != (a != b and cod.adjacent(a, b)):
                return False, (u, v)
    return True, None
