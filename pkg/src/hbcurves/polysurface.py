"""Closed oriented surfaces as polygons with paired edges.

Darts are integers: edge ``e`` owns dart ``2*e`` (traversed positively) and
dart ``2*e + 1`` (traversed backwards), so the pairing involution is
``d ^ 1``.  Every face is a cyclic list of darts read counterclockwise; the
face lies to the left of each of its darts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property


def edge_of(d: int) -> int:
    return d >> 1


def is_positive(d: int) -> bool:
    return not d & 1


def dart(e: int, positive: bool = True) -> int:
    return 2 * e + (0 if positive else 1)


class SurfaceError(ValueError):
    """Raised for malformed surface input."""


@dataclass(frozen=True)
class PolySurface:
    faces: tuple[tuple[int, ...], ...]
    edge_names: tuple[str, ...]

    # -- derived tables -------------------------------------------------

    @cached_property
    def num_edges(self) -> int:
        return len(self.edge_names)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        table = [-1] * (2 * self.num_edges)
        for f, cycle in enumerate(self.faces):
            for d in cycle:
                table[d] = f
        return tuple(table)

    @cached_property
    def pos_of(self) -> tuple[int, ...]:
        table = [-1] * (2 * self.num_edges)
        for cycle in self.faces:
            for k, d in enumerate(cycle):
                table[d] = k
        return tuple(table)

    @cached_property
    def _vertex_data(self) -> tuple[tuple[int, ...], int]:
        # Endpoint ids: 2*e is the tail of edge e, 2*e+1 its head.
        parent = list(range(2 * self.num_edges))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def tail(d: int) -> int:
            return 2 * edge_of(d) + (d & 1)

        def head(d: int) -> int:
            return 2 * edge_of(d) + 1 - (d & 1)

        for cycle in self.faces:
            n = len(cycle)
            for k in range(n):
                a, b = find(head(cycle[k])), find(tail(cycle[(k + 1) % n]))
                if a != b:
                    parent[a] = b
        roots: dict[int, int] = {}
        labels = []
        for x in range(2 * self.num_edges):
            labels.append(roots.setdefault(find(x), len(roots)))
        return tuple(labels), len(roots)

    def tail_vertex(self, d: int) -> int:
        """Vertex at the start of dart ``d``."""
        return self._vertex_data[0][2 * edge_of(d) + (d & 1)]

    @property
    def num_vertices(self) -> int:
        return self._vertex_data[1]

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    def genus(self) -> int:
        twice = 2 - self.euler_characteristic()
        if twice % 2 or twice < 0:
            raise SurfaceError(f"2 - chi = {twice} is not a nonnegative even number")
        return twice // 2

    def edge_index(self, name: str) -> int:
        try:
            return self.edge_names.index(name)
        except ValueError:
            raise SurfaceError(f"unknown edge {name!r}") from None

    def dart_name(self, d: int) -> str:
        name = self.edge_names[edge_of(d)]
        return name if is_positive(d) else "-" + name

    def parse_dart(self, token: str) -> int:
        token = token.strip()
        if token.startswith("-"):
            return dart(self.edge_index(token[1:]), False)
        return dart(self.edge_index(token.lstrip("+")), True)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "edges": list(self.edge_names),
            "faces": [[self.dart_name(d) for d in cycle] for cycle in self.faces],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict, check: bool = True) -> "PolySurface":
        faces = data["faces"]
        names = list(data.get("edges") or [])
        if not names:
            for cycle in faces:
                for token in cycle:
                    base = token.lstrip("+-")
                    if base not in names:
                        names.append(base)
        surface = cls(tuple(), tuple(names))
        parsed = tuple(tuple(surface.parse_dart(t) for t in cycle) for cycle in faces)
        return cls.from_faces(parsed, names, check=check)

    @classmethod
    def from_json(cls, text: str, check: bool = True) -> "PolySurface":
        return cls.from_dict(json.loads(text), check=check)

    @classmethod
    def from_faces(cls, faces, edge_names, check: bool = True) -> "PolySurface":
        surface = cls(tuple(tuple(c) for c in faces), tuple(edge_names))
        if check:
            problems = validate(surface)
            if problems:
                raise SurfaceError("; ".join(problems))
        return surface


def standard_surface(g: int) -> PolySurface:
    """One-vertex model: a single 4g-gon reading a1 b1 -a1 -b1 ... ag bg -ag -bg."""
    if g < 1:
        raise SurfaceError("genus must be at least 1")
    names = []
    for i in range(1, g + 1):
        names += [f"a{i}", f"b{i}"]
    cycle = []
    for i in range(g):
        a, b = 2 * i, 2 * i + 1
        cycle += [dart(a), dart(b), dart(a, False), dart(b, False)]
    return PolySurface((tuple(cycle),), tuple(names))


def validate(s: PolySurface) -> list[str]:
    """Return a list of violated invariants (empty when ``s`` is a valid closed surface)."""
    problems: list[str] = []
    seen: dict[int, int] = {}
    for cycle in s.faces:
        if not cycle:
            problems.append("empty face")
        for d in cycle:
            if not 0 <= d < 2 * s.num_edges:
                problems.append(f"dart {d} out of range")
                continue
            seen[d] = seen.get(d, 0) + 1
    if any(c > 1 for c in seen.values()):
        problems.append("dart appears more than once")
    for e in range(s.num_edges):
        present = [d in seen for d in (dart(e), dart(e, False))]
        if present.count(True) == 1:
            problems.append("pairing not fixed-point-free")
            break
        if not any(present):
            problems.append(f"edge {s.edge_names[e]} unused")
    if problems:
        return problems

    # connectivity through edge gluings
    if s.faces:
        reached = {0}
        stack = [0]
        while stack:
            f = stack.pop()
            for d in s.faces[f]:
                g = s.face_of[d ^ 1]
                if g not in reached:
                    reached.add(g)
                    stack.append(g)
        if len(reached) != len(s.faces):
            problems.append("not connected")
    else:
        problems.append("no faces")
    twice = 2 - s.euler_characteristic()
    if twice % 2 or twice < 0:
        problems.append(f"non-integral genus (chi = {s.euler_characteristic()})")
    return problems


def genus(s: PolySurface) -> int:
    return s.genus()


@dataclass(frozen=True)
class CoverMap:
    """Cell-wise covering map from ``total`` onto ``base``."""

    total: PolySurface
    base: PolySurface
    dart_projection: tuple[int, ...]
    degree: int
    face_projection: tuple[int, ...] = field(default=())

    def check(self) -> list[str]:
        problems = []
        counts: dict[int, int] = {}
        for d in self.dart_projection:
            counts[d] = counts.get(d, 0) + 1
        if any(counts.get(d, 0) != self.degree for d in range(2 * self.base.num_edges)):
            problems.append("fibers are not uniform")
        for f, cycle in enumerate(self.total.faces):
            image = tuple(self.dart_projection[d] for d in cycle)
            target = self.base.faces[self.base.face_of[image[0]]]
            k = target.index(image[0])
            if image != target[k:] + target[:k]:
                problems.append(f"face {f} does not map onto a base face")
        for d, p in enumerate(self.dart_projection):
            if self.dart_projection[d ^ 1] != p ^ 1:
                problems.append("projection does not respect edge pairing")
                break
        if self.total.euler_characteristic() != self.degree * self.base.euler_characteristic():
            problems.append("euler characteristic is not multiplicative")
        return problems
