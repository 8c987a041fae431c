"""Finite covers given by permutation representations, elevations of curves,
and the handlebody-extension questions built on them."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from math import gcd

from .curves import (
    CurveDiagram,
    algebraic_intersection,
    curve,
    geometric_intersection,
    intersection_matrix,
    minimal_arrangement,
    normalize,
    normalize_word,
    reduce_cyclic,
    self_intersection,
)
from .handlebody import (
    HandlebodyStructure,
    _wave_candidates,
    complement_components,
    is_meridian,
)
from .polysurface import CoverMap, PolySurface, edge_of


class CoverError(ValueError):
    """Invalid representation, cover or cover-related input."""


# -- permutations -------------------------------------------------------------------
# A permutation is a tuple p with p[s] the image of sheet s; products act on the right,
# so compose(p, q) means "first p, then q".


def compose(p, q) -> tuple[int, ...]:
    return tuple(q[x] for x in p)


def invert(p) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def identity(d: int) -> tuple[int, ...]:
    return tuple(range(d))


def _cycles(p) -> list[list[int]]:
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        cyc = []
        while not seen[s]:
            seen[s] = True
            cyc.append(s)
            s = p[s]
        out.append(cyc)
    return out


@dataclass(frozen=True)
class FiniteGroupRep:
    """Right action of the generators on ``degree`` sheets, one permutation per edge.

    Crossing an edge along its positive dart moves sheet ``s`` to ``perms[e][s]``;
    crossing it backwards applies the inverse.  Sheet 0 is the basepoint sheet.
    ``modulus`` and ``images`` are filled in for representations that come from
    a homomorphism to a cyclic group (images are residues of each generator).
    """

    degree: int
    perms: tuple[tuple[int, ...], ...]
    modulus: int = 0
    images: tuple[int, ...] = ()

    def dart_perm(self, d: int) -> tuple[int, ...]:
        p = self.perms[edge_of(d)]
        return p if d & 1 == 0 else invert(p)

    def word_perm(self, word) -> tuple[int, ...]:
        p = identity(self.degree)
        for d in word:
            p = compose(p, self.dart_perm(d))
        return p

    def orbit(self, s: int = 0) -> list[int]:
        seen = {s}
        todo = [s]
        while todo:
            x = todo.pop()
            for p in self.perms:
                for y in (p[x], invert(p)[x]):
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
        return sorted(seen)

    def problems(self, surface: PolySurface) -> list[str]:
        out = []
        if self.degree < 1:
            return ["degree must be positive"]
        if len(self.perms) != surface.num_edges:
            return [f"expected {surface.num_edges} permutations, got {len(self.perms)}"]
        for e, p in enumerate(self.perms):
            if sorted(p) != list(range(self.degree)):
                out.append(f"image of {surface.edge_names[e]} is not a permutation of {self.degree} sheets")
        if out:
            return out
        # the relators are the loops around the vertices: the cover is unbranched
        # exactly when every vertex has `degree` preimages
        total = _total_surface(surface, self)
        if total.num_vertices != self.degree * surface.num_vertices:
            out.append("surface relator does not map to the identity")
        if len(self.orbit(0)) != self.degree:
            out.append("disconnected cover (action is not transitive)")
        return out

    def group(self, limit: int | None = None) -> list[tuple[int, ...]]:
        """Elements of the generated permutation group, stopping once ``limit`` is exceeded."""
        start = identity(self.degree)
        seen = {start}
        order = [start]
        for g in order:
            for p in self.perms:
                h = compose(g, p)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    if limit is not None and len(order) > limit:
                        return order
        return order

    def is_regular(self) -> bool:
        return len(self.group(limit=self.degree)) == self.degree

    def to_dict(self, surface: PolySurface) -> dict:
        return {
            "degree": self.degree,
            "perms": {surface.edge_names[e]: list(p) for e, p in enumerate(self.perms)},
        }

    @classmethod
    def from_dict(cls, surface: PolySurface, data: dict) -> "FiniteGroupRep":
        perms = data["perms"]
        try:
            rows = tuple(tuple(int(x) for x in perms[name]) for name in surface.edge_names)
        except KeyError as exc:
            raise CoverError(f"missing permutation for edge {exc.args[0]}") from None
        return cls(int(data["degree"]), rows)


def trivial_rep(surface: PolySurface) -> FiniteGroupRep:
    return FiniteGroupRep(1, tuple((0,) for _ in range(surface.num_edges)))


def cyclic_rep(surface: PolySurface, images, n: int) -> FiniteGroupRep:
    """Action of the image of ``x_e -> images[e] mod n`` on itself by translation."""
    if n < 2:
        raise CoverError("modulus must be at least 2")
    images = tuple(int(x) % n for x in images)
    if len(images) != surface.num_edges:
        raise CoverError(f"expected {surface.num_edges} images, got {len(images)}")
    step = n
    for x in images:
        step = gcd(step, x)
    d = n // step
    perms = tuple(tuple((s + x // step) % d for s in range(d)) for x in images)
    return FiniteGroupRep(d, perms, n, images)


def hom_from_intersection(surface: PolySurface, alpha: CurveDiagram, n: int) -> FiniteGroupRep:
    """Cyclic cover: the generator dual to edge e maps to its algebraic intersection with alpha, mod n.

    The sheets are the image subgroup of Z/n, so the degree is n divided by the
    gcd of n and the images.
    """
    if n < 2:
        raise CoverError("modulus must be at least 2")
    if self_intersection(alpha):
        raise CoverError("alpha must be simple")
    images = []
    for e in range(surface.num_edges):
        if surface.face_of[2 * e] != surface.face_of[2 * e + 1]:
            raise CoverError("intersection covers need every edge to have one face on both sides")
        images.append(algebraic_intersection(curve(surface, [2 * e]), alpha) % n)
    return cyclic_rep(surface, images, n)


# -- covers -----------------------------------------------------------------------


def _total_surface(base: PolySurface, rep: FiniteGroupRep) -> PolySurface:
    d = rep.degree
    inv = [invert(p) for p in rep.perms]
    faces = []
    for cycle in base.faces:
        for s in range(d):
            row = []
            for x in cycle:
                e = edge_of(x)
                if x & 1 == 0:
                    row.append(2 * (e * d + s))
                else:
                    row.append(2 * (e * d + inv[e][s]) + 1)
            faces.append(tuple(row))
    names = tuple(f"{name}_{s}" for name in base.edge_names for s in range(d))
    return PolySurface(tuple(faces), names)


@dataclass(frozen=True)
class FiniteCover:
    base: PolySurface
    rep: FiniteGroupRep
    total: PolySurface
    map: CoverMap
    normal: bool

    @property
    def degree(self) -> int:
        return self.rep.degree

    def total_dart(self, d: int, sheet: int) -> tuple[int, int]:
        """Lift of base dart ``d`` leaving a face on ``sheet``; returns (total dart, next sheet)."""
        e = edge_of(d)
        deg = self.rep.degree
        if d & 1 == 0:
            return 2 * (e * deg + sheet), self.rep.perms[e][sheet]
        prev = invert(self.rep.perms[e])[sheet]
        return 2 * (e * deg + prev) + 1, prev

    def lift_word(self, word, sheet: int = 0) -> tuple[list[int], int]:
        out = []
        for d in word:
            t, sheet = self.total_dart(d, sheet)
            out.append(t)
        return out, sheet

    def to_json(self) -> str:
        data = {"surface": self.base.to_dict(), **self.rep.to_dict(self.base)}
        return json.dumps(data, indent=1, sort_keys=True)


def build_cover(surface: PolySurface, rep: FiniteGroupRep) -> FiniteCover:
    probs = rep.problems(surface)
    if probs:
        raise CoverError("; ".join(probs))
    total = _total_surface(surface, rep)
    d = rep.degree
    proj = tuple(2 * (t // 2 // d) + (t & 1) for t in range(2 * total.num_edges))
    faces = tuple(f for f in range(len(surface.faces)) for _ in range(d))
    cmap = CoverMap(total, surface, proj, d, faces)
    bad = cmap.check()
    if bad:
        raise CoverError("; ".join(bad))
    return FiniteCover(surface, rep, total, cmap, rep.is_regular())


def load_cover(text: str) -> FiniteCover:
    data = json.loads(text)
    base = PolySurface.from_dict(data["surface"])
    return build_cover(base, FiniteGroupRep.from_dict(base, data))


# -- lifting curves ------------------------------------------------------------------


def lift_degree(cover: FiniteCover, c: CurveDiagram) -> int:
    """Length of the orbit of the basepoint sheet under the monodromy of ``c``.

    For a normal cover this is the order of the image of ``c`` and does not
    depend on the sheet; otherwise see :func:`lift_degrees`.
    """
    p = cover.rep.word_perm(c.crossings)
    n, s = 1, p[0]
    while s != 0:
        s = p[s]
        n += 1
    return n


def lift_degrees(cover: FiniteCover, c: CurveDiagram) -> list[int]:
    """Degrees of all elevations of ``c`` (the cycle type of its monodromy), sorted."""
    return sorted(len(cyc) for cyc in _cycles(cover.rep.word_perm(c.crossings)))


@dataclass(frozen=True)
class Elevation:
    curve: CurveDiagram  # on the total surface
    degree: int
    base_curve: CurveDiagram
    sheets: tuple[int, ...]  # sheets where the lift starts a copy of the base word

    def to_dict(self) -> dict:
        return {"degree": self.degree, "sheets": list(self.sheets), "curve": self.curve.to_records()}


def elevate(cover: FiniteCover, c: CurveDiagram) -> list[Elevation]:
    """All components of the preimage of ``c``, ordered by their least sheet."""
    c = normalize(c)
    p = cover.rep.word_perm(c.crossings)
    out = []
    for cyc in _cycles(p):
        word: list[int] = []
        sheet = cyc[0]
        for _ in cyc:
            part, sheet = cover.lift_word(c.crossings, sheet)
            word += part
        out.append(Elevation(normalize_word(cover.total, word), len(cyc), c, tuple(cyc)))
    return out


def preimage(cover: FiniteCover, curves) -> list[CurveDiagram]:
    return [el.curve for c in curves for el in elevate(cover, c)]


# -- deck group ---------------------------------------------------------------------


def _sheet_elements(cover: FiniteCover) -> dict[int, tuple[int, ...]]:
    """For a normal cover: the unique group element moving sheet 0 to each sheet."""
    if not cover.normal:
        raise CoverError("deck transformations need a normal cover")
    return {g[0]: g for g in cover.rep.group()}


def deck_map(cover: FiniteCover, k: int) -> tuple[int, ...]:
    """Sheet permutation of the deck transformation taking sheet 0 to sheet ``k``."""
    elems = _sheet_elements(cover)
    return tuple(elems[s][k] for s in range(cover.degree))


def apply_deck(cover: FiniteCover, k: int, c: CurveDiagram) -> CurveDiagram:
    """Image of a curve on the total surface under the deck transformation for sheet ``k``."""
    h = deck_map(cover, k)
    d = cover.degree
    word = []
    for t in c.crossings:
        e, s = divmod(t // 2, d)
        word.append(2 * (e * d + h[s]) + (t & 1))
    return normalize_word(cover.total, word)


def quotient_cover(cover: FiniteCover, subgroup_sheets) -> FiniteCover:
    """Intermediate cover obtained by dividing out a normal subgroup of the deck group.

    The subgroup is given by the sheets its elements carry sheet 0 to.
    """
    elems = _sheet_elements(cover)
    ks = sorted(set(int(k) for k in subgroup_sheets) | {0})
    if any(k not in elems for k in ks):
        raise CoverError("subgroup sheets out of range")
    sub = {elems[k] for k in ks}
    for a in sub:
        for b in sub:
            if compose(a, b) not in sub:
                raise CoverError("sheets do not form a subgroup")
    for x in cover.rep.perms:
        xi = invert(x)
        for a in sub:
            if compose(compose(xi, a), x) not in sub:
                raise CoverError("subgroup is not normal")
    block_of: dict[int, int] = {}
    for s in range(cover.degree):
        if s in block_of:
            continue
        idx = len(set(block_of.values()))
        for k in ks:
            block_of[elems[s][k]] = idx
    d = len(set(block_of.values()))
    perms = []
    for p in cover.rep.perms:
        row = [0] * d
        for s in range(cover.degree):
            row[block_of[s]] = block_of[p[s]]
        perms.append(tuple(row))
    return build_cover(cover.base, FiniteGroupRep(d, tuple(perms)))


# -- handlebody extension -------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionReport:
    extends: bool
    images: tuple[tuple[int, ...], ...]  # monodromy of each disk, in disk order
    witness: int | None  # index of the first disk that does not lift with degree 1

    def to_dict(self) -> dict:
        return {"extends": self.extends, "images": [list(p) for p in self.images], "witness": self.witness}


def extends_to_handlebody_cover(cover: FiniteCover, H: HandlebodyStructure) -> ExtensionReport:
    """Whether the cover extends over the handlebody, i.e. every disk lifts with degree 1.

    The disks normally generate the kernel of the map to the handlebody group,
    so it is enough that each of them acts trivially on the sheets.
    """
    if H.surface != cover.base:
        raise CoverError("handlebody lives on a different surface")
    images = tuple(cover.rep.word_perm(normalize(dk).crossings) for dk in H.disk_system)
    ident = identity(cover.degree)
    witness = next((i for i, p in enumerate(images) if p != ident), None)
    return ExtensionReport(witness is None, images, witness)


def lifted_handlebody(cover: FiniteCover, H: HandlebodyStructure) -> HandlebodyStructure:
    """Handlebody structure on the total surface whose meridians include every disk elevation."""
    report = extends_to_handlebody_cover(cover, H)
    if not report.extends:
        raise CoverError(f"disk {report.witness} does not lift with degree 1")
    g_total = cover.total.genus()
    chosen: list[CurveDiagram] = []
    for c in preimage(cover, H.disk_system):
        if len(chosen) == g_total:
            break
        if complement_components(chosen + [c]) == 1:
            chosen.append(c)
    if len(chosen) != g_total:
        raise CoverError("could not select a reduced disk system from the preimage")
    return HandlebodyStructure(cover.total, tuple(chosen)).check()


# -- flexibility certificates ---------------------------------------------------------


@dataclass(frozen=True)
class FlexCertificate:
    """Two elevations of meridians meeting an odd number of times.

    Boundaries of embedded disks meet evenly, so these two curves cannot both
    be meridians of one handlebody structure upstairs.
    """

    elevation_x: Elevation
    elevation_y: Elevation
    odd_count: int
    base_x: int  # index of the base meridians in the input list
    base_y: int

    def to_dict(self) -> dict:
        return {
            "odd_count": self.odd_count,
            "base": [self.base_x, self.base_y],
            "elevation_x": self.elevation_x.to_dict(),
            "elevation_y": self.elevation_y.to_dict(),
        }


def certificate_problems(cert: FlexCertificate, H: HandlebodyStructure) -> list[str]:
    out = []
    x, y = cert.elevation_x.curve, cert.elevation_y.curve
    if self_intersection(x) or self_intersection(y):
        out.append("an elevation is not simple")
        return out
    k = geometric_intersection(x, y)
    if k != cert.odd_count or k % 2 == 0:
        out.append(f"recomputed intersection {k} is not the recorded odd count {cert.odd_count}")
    for c in (cert.elevation_x.base_curve, cert.elevation_y.base_curve):
        if not is_meridian(H, c):
            out.append("a base curve is not a meridian")
    return out


def elevation_intersections(cover: FiniteCover, curves):
    """Elevations of each curve and the intersection matrix of all of them."""
    els = [(i, el) for i, c in enumerate(curves) for el in elevate(cover, c)]
    m = intersection_matrix([el.curve for _, el in els])
    return els, m


def flexibility_certificate(cover: FiniteCover, H: HandlebodyStructure, meridians) -> FlexCertificate | None:
    """First pair of elevations of the given meridians with odd intersection; None if there is none."""
    meridians = list(meridians)
    for i, c in enumerate(meridians):
        if not is_meridian(H, c):
            raise CoverError(f"input {i} is not a meridian")
    els, m = elevation_intersections(cover, meridians)
    for a in range(len(els)):
        for b in range(a + 1, len(els)):
            if m[a][b] % 2:
                cert = FlexCertificate(els[a][1], els[b][1], m[a][b], els[a][0], els[b][0])
                bad = certificate_problems(cert, H)
                if bad:
                    raise CoverError("certificate failed to re-validate: " + "; ".join(bad))
                return cert
    return None


# -- waves upstairs -------------------------------------------------------------------


def wave_violation(cover: FiniteCover, delta: CurveDiagram, system) -> bool:
    """True when some elevation of ``delta`` meets the preimage of ``system`` but has no wave.

    A wave here is a pair of consecutive crossings on the same component from
    the same side.
    """
    pre = preimage(cover, list(system))
    for el in elevate(cover, delta):
        arr = minimal_arrangement([el.curve] + pre)
        if not arr.events_along(0, range(1, len(pre) + 1)):
            continue
        if not any(True for _ in _wave_candidates(arr, 1, len(pre))):
            return True
    return False


def crossing_components(cover: FiniteCover, delta: CurveDiagram, system) -> list[list[int]]:
    """For each elevation of ``delta``, the crossings with the preimage of ``system`` in order.

    Each crossing is recorded as (index of the base curve, index of the preimage component).
    """
    system = list(system)
    pre, owner = [], []
    for i, c in enumerate(system):
        for el in elevate(cover, c):
            pre.append(el.curve)
            owner.append(i)
    out = []
    for el in elevate(cover, delta):
        arr = minimal_arrangement([el.curve] + pre)
        out.append([(owner[ev[2] - 1], ev[2] - 1) for ev in arr.events_along(0, range(1, len(pre) + 1))])
    return out


def recur_meridian(
    H: HandlebodyStructure,
    alpha: CurveDiagram,
    beta: CurveDiagram,
    rho: CurveDiagram,
    alpha_prime: CurveDiagram | None = None,
) -> CurveDiagram:
    """The meridian ``beta * rho * beta'^-1 * rho^-1`` with ``beta' = beta * alpha``.

    Loops are read from the start of their crossing words, all based in the
    single face of the surface.  ``alpha_prime`` is the auxiliary meridian
    that ``rho`` must also cross once.
    """
    s = H.surface
    if len(s.faces) != 1:
        raise CoverError("loop products need a one-face surface")
    if H.genus < 3:
        raise CoverError("the construction needs genus at least 3")
    for name, c in (("alpha", alpha), ("beta", beta)):
        if self_intersection(c) or not is_meridian(H, c):
            raise CoverError(f"{name} is not a simple meridian")
    k = geometric_intersection(alpha, beta)
    if k:
        raise CoverError(f"alpha and beta must be disjoint away from the basepoint, got i(alpha, beta) = {k}")
    beta2 = normalize_word(s, list(beta.crossings) + list(alpha.crossings))
    if self_intersection(beta2):
        raise CoverError("beta * alpha is not simple")
    if self_intersection(rho):
        raise CoverError("rho is not simple")
    # rho passes through the basepoint, where alpha, beta and beta' all meet, so
    # each of them meets rho at most once (a tangency there is invisible to i(., .))
    for name, c in (("alpha", alpha), ("beta", beta), ("beta'", beta2)):
        k = geometric_intersection(rho, c)
        if k > 1:
            raise CoverError(f"rho must meet {name} at most once, got {k}")
    if alpha_prime is not None:
        if self_intersection(alpha_prime) or not is_meridian(H, alpha_prime):
            raise CoverError("alpha' is not a simple meridian")
        for name, c in (("alpha", alpha), ("beta", beta)):
            k = geometric_intersection(alpha_prime, c)
            if k:
                raise CoverError(f"alpha' must be disjoint from {name}, got {k}")
        k = geometric_intersection(rho, alpha_prime)
        if k != 1:
            raise CoverError(f"rho must meet alpha' once, got {k}")
    inv = lambda w: [d ^ 1 for d in reversed(w)]  # noqa: E731
    word = list(beta.crossings) + list(rho.crossings) + inv(beta2.crossings) + inv(rho.crossings)
    word = reduce_cyclic(word)
    if not word:
        raise CoverError("the product is null-homotopic")
    delta = normalize_word(s, word)
    if self_intersection(delta):
        raise CoverError("the product is not simple for this choice of rho")
    if not is_meridian(H, delta):
        raise CoverError("the product is not a meridian")
    return delta


# -- degree-one search ------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeOneResult:
    moves: tuple[tuple, ...]  # ("negate", j) or ("exchange", j, i, k), 1-based indices
    residues: tuple[int, ...]  # residues after all moves
    zero_index: int | None  # 1-based coordinate that ends at 0, None when exhausted
    modulus: int

    @property
    def found(self) -> bool:
        return self.zero_index is not None


def apply_move(residues, move, n: int) -> tuple[int, ...]:
    r = list(residues)
    if move[0] == "negate":
        j = move[1] - 1
        r[j] = -r[j] % n
    elif move[0] == "exchange":
        _, j, i, k = move
        if i == j:
            raise ValueError("exchange needs two different coordinates")
        r[j - 1] = (r[j - 1] + k * r[i - 1]) % n
    else:
        raise ValueError(f"unknown move {move[0]!r}")
    return tuple(r)


# breadth-first search is used while the residue space is at most this large
BFS_LIMIT = 200_000


def residue_moves(g: int, n: int) -> list[tuple]:
    """All legal moves, in the fixed order the search tries them."""
    out: list[tuple] = []
    for i in range(1, g + 1):
        for j in range(1, g + 1):
            if j != i:
                out += [("exchange", j, i, k) for k in range(1, n)]
    out += [("negate", j) for j in range(1, g + 1)]
    return out


def _euclid_moves(r: tuple[int, ...], n: int) -> list[tuple]:
    moves: list[tuple] = []
    while r[0] and r[1]:
        j, i = (1, 2) if r[0] >= r[1] else (2, 1)
        q = r[j - 1] // r[i - 1]
        move = ("exchange", j, i, (-q) % n)
        moves.append(move)
        r = apply_move(r, move, n)
    return moves


def degree_one_search(residues, n: int) -> DegreeOneResult:
    """A shortest move sequence driving some residue to 0 mod n.

    Residues stand for the intersection numbers of the disks with the curve
    defining a cyclic cover; a zero means that disk lifts with degree 1.  For
    large residue spaces the Euclidean algorithm on the first two coordinates
    is used instead (not necessarily shortest, but always successful).
    """
    if n < 2:
        raise ValueError("modulus must be at least 2")
    r = tuple(int(x) % n for x in residues)
    if len(r) < 2:
        raise ValueError("the search needs at least two disks")

    def done(state):
        return next((j + 1 for j, x in enumerate(state) if x == 0), None)

    if done(r):
        return DegreeOneResult((), r, done(r), n)
    if n ** len(r) > BFS_LIMIT:
        moves = _euclid_moves(r, n)
    else:
        moves_all = residue_moves(len(r), n)
        prev: dict[tuple, tuple | None] = {r: None}
        queue = deque([r])
        end = None
        while queue and end is None:
            cur = queue.popleft()
            for m in moves_all:
                nxt = apply_move(cur, m, n)
                if nxt in prev:
                    continue
                prev[nxt] = (cur, m)
                if done(nxt):
                    end = nxt
                    break
                queue.append(nxt)
        if end is None:
            return DegreeOneResult((), r, None, n)
        moves = []
        while prev[end] is not None:
            end, m = prev[end]
            moves.append(m)
        moves.reverse()
    final = r
    for m in moves:
        final = apply_move(final, m, n)
    return DegreeOneResult(tuple(moves), final, done(final), n)


__all__ = [
    "CoverError",
    "DegreeOneResult",
    "Elevation",
    "ExtensionReport",
    "FiniteCover",
    "FiniteGroupRep",
    "FlexCertificate",
    "apply_deck",
    "apply_move",
    "build_cover",
    "certificate_problems",
    "crossing_components",
    "cyclic_rep",
    "deck_map",
    "degree_one_search",
    "elevate",
    "elevation_intersections",
    "extends_to_handlebody_cover",
    "flexibility_certificate",
    "hom_from_intersection",
    "lift_degree",
    "lift_degrees",
    "lifted_handlebody",
    "load_cover",
    "preimage",
    "quotient_cover",
    "recur_meridian",
    "residue_moves",
    "trivial_rep",
    "wave_violation",
]
