"""Joint position of several curves on a polygon surface.

A curve is a cyclic sequence of edge crossings.  Inside every face the curve
runs along straight chords between consecutive crossing points, and each
edge carries an ordered list of the crossing points lying on it.  The
overlay of a set of curves cuts the surface into cells; gluing cells across
the 1-skeleton yields the complementary regions, whose Euler characteristic
and boundary pattern drive bigon removal and the annulus (isotopy) test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cmp_to_key

from .polysurface import PolySurface, edge_of

_PHI = (math.sqrt(5) - 1) / 2


class CurveError(ValueError):
    """Raised for invalid curve input (bad face transitions, non-simple, inessential)."""


def check_word(surface: PolySurface, word) -> None:
    if not word:
        raise CurveError("curve has no crossings (it lies inside one face)")
    n = len(word)
    face_of = surface.face_of
    for i in range(n):
        d = word[i]
        if not 0 <= d < 2 * surface.num_edges:
            raise CurveError(f"dart {d} out of range")
        nxt = word[(i + 1) % n]
        if face_of[nxt] != face_of[d ^ 1]:
            raise CurveError(
                f"inconsistent face transition at crossing {i}: "
                f"{surface.dart_name(d)} -> {surface.dart_name(nxt)}"
            )


def has_backtrack(word) -> bool:
    n = len(word)
    return any(word[(i + 1) % n] == word[i] ^ 1 for i in range(n))


def reverse_word(word) -> list[int]:
    return [d ^ 1 for d in reversed(word)]


def _ray_less(surface: PolySurface, s, i: int, t, j: int):
    """Compare two strands entering the same face through the same dart.

    Returns True when strand ``s`` comes first in the counterclockwise order
    of the entered face, False when it comes second, None if the two rays
    never separate.
    """
    ns, nt = len(s), len(t)
    pos_of = surface.pos_of
    for _ in range(ns + nt):
        d = s[i]
        i2, j2 = (i + 1) % ns, (j + 1) % nt
        ds, dt = s[i2], t[j2]
        if ds != dt:
            entry = d ^ 1
            size = len(surface.faces[surface.face_of[entry]])
            base = pos_of[entry]
            return (pos_of[ds] - base) % size > (pos_of[dt] - base) % size
        i, j = i2, j2
    return None


class _Strand:
    __slots__ = ("pid", "seq", "idx", "rseq", "ridx", "key")

    def __init__(self, pid, seq, idx, rseq, ridx, key):
        self.pid, self.seq, self.idx, self.rseq, self.ridx, self.key = pid, seq, idx, rseq, ridx, key


def _strand_cmp(surface):
    def cmp(a: _Strand, b: _Strand) -> int:
        r = _ray_less(surface, a.seq, a.idx, b.seq, b.idx)
        if r is None:
            back = _ray_less(surface, a.rseq, a.ridx, b.rseq, b.ridx)
            if back is None:
                return -1 if a.key < b.key else (1 if a.key > b.key else 0)
            r = not back
        # r: a precedes b walking along the reversed edge, i.e. a has the larger slot
        return 1 if r else -1

    return cmp


@dataclass
class Crossing:
    """Transverse intersection of two chords inside a face."""

    face: int
    u: int  # local chord index in the face
    v: int
    tu: float  # parameter along chord u
    tv: float
    sign: int  # +1 when chord v crosses chord u from its right to its left


@dataclass
class FaceLayout:
    face: int
    items: list  # ('c', vertex, dartpos) or ('p', pid, dartpos)
    xy: list
    chords: list  # (curve, chord index, start item, end item)
    crossings: list = field(default_factory=list)


class Arrangement:
    """Several curves drawn simultaneously, with explicit point orders on edges."""

    def __init__(self, surface: PolySurface):
        self.surface = surface
        self.curves: list[list[int]] = []
        self.dart_of: list[int] = []
        self.curve_of: list[int] = []
        self.edge_points: list[list[int]] = [[] for _ in range(surface.num_edges)]

    # -- construction -------------------------------------------------------

    @classmethod
    def from_words(cls, surface: PolySurface, words) -> "Arrangement":
        """Place reduced words in taut position, ordering strands lexicographically."""
        arr = cls(surface)
        strands: list[list[_Strand]] = [[] for _ in range(surface.num_edges)]
        for cv, word in enumerate(words):
            word = list(word)
            check_word(surface, word)
            if has_backtrack(word):
                raise CurveError("word is not cyclically reduced")
            rword = reverse_word(word)
            n = len(word)
            pids = []
            for i, d in enumerate(word):
                pid = len(arr.dart_of)
                arr.dart_of.append(d)
                arr.curve_of.append(cv)
                pids.append(pid)
                # normalize every strand to cross its edge along the positive dart
                if d & 1 == 0:
                    st = _Strand(pid, word, i, rword, n - 1 - i, (cv, i))
                else:
                    st = _Strand(pid, rword, n - 1 - i, word, i, (cv, i))
                strands[edge_of(d)].append(st)
            arr.curves.append(pids)
        cmp = cmp_to_key(_strand_cmp(surface))
        for e, group in enumerate(strands):
            group.sort(key=cmp)
            arr.edge_points[e] = [st.pid for st in group]
        return arr

    def copy(self) -> "Arrangement":
        other = Arrangement(self.surface)
        other.curves = [list(c) for c in self.curves]
        other.dart_of = list(self.dart_of)
        other.curve_of = list(self.curve_of)
        other.edge_points = [list(p) for p in self.edge_points]
        return other

    def word(self, cv: int) -> list[int]:
        return [self.dart_of[p] for p in self.curves[cv]]

    def slots(self, cv: int) -> list[int]:
        """Slot of each crossing of curve ``cv`` among that curve's own points on the edge."""
        own: dict[int, int] = {}
        for pts in self.edge_points:
            k = 0
            for p in pts:
                if self.curve_of[p] == cv:
                    own[p] = k
                    k += 1
        return [own[p] for p in self.curves[cv]]

    # -- face layouts ---------------------------------------------------------

    def layouts(self, subset) -> list[FaceLayout]:
        subset = set(subset)
        surface = self.surface
        index_in_curve = {}
        for cv in subset:
            for i, p in enumerate(self.curves[cv]):
                index_in_curve[p] = i
        out = []
        for g, cycle in enumerate(surface.faces):
            items = []
            for k, d in enumerate(cycle):
                items.append(("c", surface.tail_vertex(d), k))
                pts = [p for p in self.edge_points[edge_of(d)] if self.curve_of[p] in subset]
                if d & 1:
                    pts.reverse()
                for p in pts:
                    items.append(("p", p, k))
            n_items = len(items)
            xy = []
            for t in range(n_items):
                ang = 2 * math.pi * (t + 0.4 * ((t * _PHI + 0.17 * g) % 1.0)) / n_items
                xy.append((math.cos(ang), math.sin(ang)))
            chords = []
            start_of = {}
            end_of = {}
            for t, it in enumerate(items):
                if it[0] != "p":
                    continue
                p = it[1]
                d = cycle[it[2]]
                if self.dart_of[p] == d:
                    end_of[p] = t
                else:
                    start_of[p] = t
            for p, t0 in start_of.items():
                cv = self.curve_of[p]
                i = index_in_curve[p]
                pts = self.curves[cv]
                q = pts[(i + 1) % len(pts)]
                chords.append((cv, i, t0, end_of[q]))
            chords.sort()
            layout = FaceLayout(g, items, xy, chords)
            layout.crossings = _face_crossings(layout)
            out.append(layout)
        return out

    def crossing_count(self, a: int, b: int) -> int:
        total = 0
        for lay in self.layouts((a, b)):
            for x in lay.crossings:
                ca, cb = lay.chords[x.u][0], lay.chords[x.v][0]
                if {ca, cb} == {a, b}:
                    total += 1
        return total

    def self_crossings(self, cv: int) -> int:
        total = 0
        for lay in self.layouts((cv,)):
            total += len(lay.crossings)
        return total

    def is_simple_fast(self, cv: int) -> bool:
        """Whether curve ``cv`` has no self-crossings (integer test, no layout)."""
        surface = self.surface
        pos_of, face_of = surface.pos_of, surface.face_of
        rank = {}
        big = 0
        for pts in self.edge_points:
            big = max(big, len(pts))
            for r, p in enumerate(pts):
                rank[p] = r
        big += 1

        def key(d, p):
            r = rank[p]
            return pos_of[d] * big + (r if d & 1 == 0 else big - 1 - r)

        pts = self.curves[cv]
        n = len(pts)
        by_face: dict[int, list[tuple[int, int]]] = {}
        for i in range(n):
            p, q = pts[i], pts[(i + 1) % n]
            entry = self.dart_of[p] ^ 1
            a, b = key(entry, p), key(self.dart_of[q], q)
            by_face.setdefault(face_of[entry], []).append((a, b) if a < b else (b, a))
        for chords in by_face.values():
            m = len(chords)
            for u in range(m):
                lo, hi = chords[u]
                for v in range(u + 1, m):
                    s2, e2 = chords[v]
                    if (lo < s2 < hi) != (lo < e2 < hi):
                        return False
        return True

    def events_along(self, cv: int, others) -> list[tuple]:
        """Crossings of curve ``cv`` with curves in ``others``, in order along ``cv``.

        Each event is ``(chord index, parameter, other curve, other chord index,
        sign, other parameter)`` where ``sign`` is +1 when the other curve
        crosses ``cv`` from right to left.
        """
        others = set(others) - {cv}
        events = []
        for lay in self.layouts(others | {cv}):
            for x in lay.crossings:
                cu, iu = lay.chords[x.u][:2]
                cw, iw = lay.chords[x.v][:2]
                if cu == cv and cw in others:
                    events.append((iu, x.tu, cw, iw, x.sign, x.tv))
                elif cw == cv and cu in others:
                    events.append((iw, x.tv, cu, iu, -x.sign, x.tu))
        events.sort(key=lambda ev: (ev[0], ev[1]))
        return events

    # -- bigon removal --------------------------------------------------------

    def remove_bigons(self, pairs=None, max_rounds: int = 100000) -> int:
        """Remove bigons until every listed pair of curves is in minimal position.

        Returns the number of bigons removed.
        """
        n = len(self.curves)
        if pairs is None:
            pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        removed = 0
        for _ in range(max_rounds):
            progress = False
            for a, b in pairs:
                while True:
                    ov = Overlay(self, (a, b))
                    bigon = ov.first_bigon()
                    if bigon is None:
                        break
                    self._push_across(ov, bigon)
                    removed += 1
                    progress = True
            if not progress:
                return removed
        raise RuntimeError("bigon removal did not terminate")

    def _push_across(self, ov: "Overlay", region: int) -> None:
        walk = ov.walks_of_region[region][0]
        runs = walk.runs
        assert len(runs) == 2 and runs[0].curve != runs[1].curve
        run_a, run_b = runs
        # push the arc of the first curve in the walk across the bigon
        a, da, chords_a = run_a.curve, run_a.direction, run_a.chords
        b, db, chords_b = run_b.curve, run_b.direction, run_b.chords
        pts_a = self.curves[a]
        pts_b = self.curves[b]
        na, nb = len(pts_a), len(pts_b)
        if da > 0:
            alpha = chords_a
            beta = list(reversed(chords_b))
        else:
            alpha = list(reversed(chords_a))
            beta = chords_b
        bdir = -da * db
        region_left_of_beta = da < 0
        # points of a strictly inside alpha
        dead = [pts_a[alpha[k + 1] % na] for k in range(len(alpha) - 1)]
        # points of b strictly inside beta, in the order beta meets them
        new_darts = []
        anchors = []
        for k in range(len(beta) - 1):
            if bdir > 0:
                q = pts_b[beta[k + 1] % nb]
                dq = self.dart_of[q]
            else:
                q = pts_b[beta[k] % nb]
                dq = self.dart_of[q] ^ 1
            new_darts.append(dq)
            anchors.append(q)
        # remove dead points
        dead_set = set(dead)
        for p in dead:
            lst = self.edge_points[edge_of(self.dart_of[p])]
            lst.remove(p)
        # insert new points next to the anchors, on the side away from the region
        new_pids = []
        for q, dq in zip(anchors, new_darts):
            pid = len(self.dart_of)
            self.dart_of.append(dq)
            self.curve_of.append(a)
            lst = self.edge_points[edge_of(dq)]
            at = lst.index(q)
            forward = dq & 1 == 0  # walking along dq raises the slot
            # left of beta is the direction of dq
            go_left = not region_left_of_beta
            higher = forward if go_left else not forward
            lst.insert(at + 1 if higher else at, pid)
            new_pids.append(pid)
        last = alpha[-1] % na
        first = alpha[0] % na
        # remaining points: from the end point of the last alpha chord round to the start of the first
        keep = []
        k = (last + 1) % na
        while True:
            p = pts_a[k]
            if p not in dead_set:
                keep.append(p)
            if k == first:
                break
            k = (k + 1) % na
        new_curve = new_pids + keep
        if not new_curve:
            raise CurveError("curve became trivial during bigon removal (inessential curve)")
        self.curves[a] = new_curve


def _face_crossings(layout: FaceLayout) -> list[Crossing]:
    chords = layout.chords
    xy = layout.xy
    out = []
    m = len(chords)
    for u in range(m):
        _, _, s1, e1 = chords[u]
        lo1, hi1 = min(s1, e1), max(s1, e1)
        for v in range(u + 1, m):
            _, _, s2, e2 = chords[v]
            in1 = lo1 < s2 < hi1
            in2 = lo1 < e2 < hi1
            if in1 == in2:
                continue
            ax, ay = xy[s1]
            bx, by = xy[e1]
            cx, cy = xy[s2]
            dx, dy = xy[e2]
            rx, ry = bx - ax, by - ay
            sx, sy = dx - cx, dy - cy
            den = rx * sy - ry * sx
            qx, qy = cx - ax, cy - ay
            tu = (qx * sy - qy * sx) / den
            tv = (qx * ry - qy * rx) / den
            out.append(Crossing(layout.face, u, v, tu, tv, 1 if den > 0 else -1))
    return out


@dataclass
class Run:
    curve: int
    direction: int
    chords: list


@dataclass
class Walk:
    region: int
    runs: list
    corners: int


class Overlay:
    """Cells and complementary regions of a set of curves in an arrangement."""

    def __init__(self, arr: Arrangement, subset):
        self.arr = arr
        self.subset = tuple(subset)
        self.layouts = arr.layouts(self.subset)
        self._build()

    def _build(self) -> None:
        arr, surface = self.arr, self.arr.surface
        subset = set(self.subset)
        # segment ids per edge
        counts = [sum(1 for p in pts if arr.curve_of[p] in subset) for pts in arr.edge_points]
        offset = [0] * (surface.num_edges + 1)
        for e in range(surface.num_edges):
            offset[e + 1] = offset[e] + counts[e] + 1
        n_segments = offset[-1]
        seg_sides: list[list[int]] = [[] for _ in range(n_segments)]
        cell_vertices: list[set] = []
        cell_of_halfedge: dict = {}
        chord_loc: dict = {}
        n_cells = 0
        self._chord_nodes = []
        self._rot = []
        self._node_x = []

        for lay in self.layouts:
            g = lay.face
            cycle = surface.faces[g]
            items = lay.items
            n_items = len(items)
            # segment following each item in counterclockwise order
            seg_after = [0] * n_items
            ccw_index = 0
            for t, it in enumerate(items):
                k = it[2]
                d = cycle[k]
                e = edge_of(d)
                if it[0] == "c":
                    ccw_index = 0
                else:
                    ccw_index += 1
                j = ccw_index if d & 1 == 0 else counts[e] - ccw_index
                seg_after[t] = offset[e] + j
            point_items = [t for t, it in enumerate(items) if it[0] == "p"]
            if not point_items:
                cell = n_cells
                n_cells += 1
                for t in range(n_items):
                    seg_sides[seg_after[t]].append(cell)
                cell_vertices.append({it[1] for it in items if it[0] == "c"})
                self._chord_nodes.append([])
                self._rot.append({})
                self._node_x.append({})
                continue

            next_point = {}
            for a_i, t in enumerate(point_items):
                next_point[t] = point_items[(a_i + 1) % len(point_items)]
            chord_at_item = {}
            for ci, (cv, i, s, e_) in enumerate(lay.chords):
                chord_at_item[s] = (ci, 0)
                chord_at_item[e_] = (ci, 1)
                chord_loc[(cv, i)] = (g, ci)
            # nodes along each chord
            along: list[list] = [[] for _ in lay.chords]
            for xi, x in enumerate(lay.crossings):
                along[x.u].append((x.tu, xi))
                along[x.v].append((x.tv, xi))
            nodes = []
            pos_on = {}
            for ci, lst in enumerate(along):
                lst.sort()
                nodes.append(len(lst) + 2)
                for k, (_, xi) in enumerate(lst):
                    pos_on[(xi, ci)] = k + 1
            self._chord_nodes.append(nodes)
            rot = {}
            for xi, x in enumerate(lay.crossings):
                pu, pv = pos_on[(xi, x.u)], pos_on[(xi, x.v)]
                up, um = ("s", x.u, pu, 1), ("s", x.u, pu - 1, -1)
                vp, vm = ("s", x.v, pv, 1), ("s", x.v, pv - 1, -1)
                rot[xi] = [up, vp, um, vm] if x.sign > 0 else [up, vm, um, vp]
            node_x = {}
            for (xi, ci), k in pos_on.items():
                node_x[(ci, k)] = xi
            self._rot.append(rot)
            self._node_x.append(node_x)

            def step(h):
                if h[0] == "a":
                    t2 = next_point[h[1]]
                    ci, end = chord_at_item[t2]
                    if end == 0:
                        return ("s", ci, 0, 1)
                    return ("s", ci, nodes[ci] - 2, -1)
                _, ci, j, dr = h
                k = j + 1 if dr > 0 else j
                if k == 0 or k == nodes[ci] - 1:
                    t2 = lay.chords[ci][2] if k == 0 else lay.chords[ci][3]
                    return ("a", t2)
                xi = node_x[(ci, k)]
                twin = ("s", ci, j, -dr)
                r = rot[xi]
                return r[(r.index(twin) - 1) % 4]

            starts = [("a", t) for t in point_items]
            for ci in range(len(lay.chords)):
                for j in range(nodes[ci] - 1):
                    starts.append(("s", ci, j, 1))
                    starts.append(("s", ci, j, -1))
            for h0 in starts:
                if (g, h0) in cell_of_halfedge:
                    continue
                cell = n_cells
                n_cells += 1
                verts = set()
                h = h0
                while True:
                    cell_of_halfedge[(g, h)] = cell
                    if h[0] == "a":
                        t = h[1]
                        t2 = next_point[t]
                        u = t
                        while True:
                            seg_sides[seg_after[u]].append(cell)
                            u = (u + 1) % n_items
                            if u == t2:
                                break
                            if items[u][0] == "c":
                                verts.add(items[u][1])
                    h = step(h)
                    if h == h0:
                        break
                cell_vertices.append(verts)

        # regions: glue cells across skeleton segments
        parent = list(range(n_cells))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for sides in seg_sides:
            if len(sides) != 2:
                raise RuntimeError("skeleton segment without two sides")
            ra, rb = find(sides[0]), find(sides[1])
            if ra != rb:
                parent[ra] = rb
        region_ids: dict[int, int] = {}
        cell_region = []
        for c in range(n_cells):
            cell_region.append(region_ids.setdefault(find(c), len(region_ids)))
        n_regions = len(region_ids)
        chi = [0] * n_regions
        verts_of: list[set] = [set() for _ in range(n_regions)]
        for c in range(n_cells):
            chi[cell_region[c]] += 1
            verts_of[cell_region[c]] |= cell_vertices[c]
        for sides in seg_sides:
            chi[cell_region[sides[0]]] -= 1
        for r in range(n_regions):
            chi[r] += len(verts_of[r])
        self.n_regions = n_regions
        self.chi = chi
        self.cell_region = cell_region
        self._cell_of_halfedge = cell_of_halfedge
        self._chord_loc = chord_loc
        self._trace_walks()

    def _trace_walks(self) -> None:
        arr = self.arr
        walks: list[Walk] = []
        seen = set()
        layouts = self.layouts
        for lay in layouts:
            g = lay.face
            nodes = self._chord_nodes[g]
            for ci in range(len(lay.chords)):
                for j in range(nodes[ci] - 1):
                    for dr in (1, -1):
                        key = (g, ("s", ci, j, dr))
                        if key in seen:
                            continue
                        walks.append(self._walk_from(key, seen))
        self.walks = walks
        by_region: dict[int, list[Walk]] = {}
        for w in walks:
            by_region.setdefault(w.region, []).append(w)
        self.walks_of_region = by_region

    def _walk_from(self, start, seen) -> Walk:
        arr = self.arr
        region = self.cell_region[self._cell_of_halfedge[start]]
        runs: list[Run] = []
        corners = 0
        h = start
        cur: Run | None = None
        while True:
            seen.add(h)
            g, (_, ci, j, dr) = h
            cv, idx = self.layouts[g].chords[ci][:2]
            if cur is None:
                cur = Run(cv, dr, [idx])
                runs.append(cur)
            elif cur.chords[-1] != idx:
                cur.chords.append(idx)
            nodes = self._chord_nodes[g]
            k = j + 1 if dr > 0 else j
            if k == 0 or k == nodes[ci] - 1:
                nxt = (idx + dr) % len(arr.curves[cv])
                g2, ci2 = self._chord_loc[(cv, nxt)]
                last = self._chord_nodes[g2][ci2] - 2
                h = (g2, ("s", ci2, 0 if dr > 0 else last, dr))
            else:
                xi = self._node_x[g][(ci, k)]
                r = self._rot[g][xi]
                h = (g, r[(r.index(("s", ci, j, -dr)) - 1) % 4])
                corners += 1
                cur = None
            if h == start:
                break
        if corners and len(runs) > 1 and not self._starts_after_corner(start):
            # the walk began in the middle of a run: splice its two halves together
            first, tail = runs[0], runs[-1]
            runs = [Run(first.curve, first.direction, tail.chords + first.chords)] + runs[1:-1]
        return Walk(region, runs, corners)

    def _starts_after_corner(self, h) -> bool:
        g, (_, ci, j, dr) = h
        k = j if dr > 0 else j + 1
        return 0 < k < self._chord_nodes[g][ci] - 1

    # -- queries ----------------------------------------------------------------

    def bigons(self) -> list[int]:
        out = []
        for r, walks in self.walks_of_region.items():
            if self.chi[r] != 1 or len(walks) != 1:
                continue
            w = walks[0]
            if w.corners == 2 and len(w.runs) == 2 and w.runs[0].curve != w.runs[1].curve:
                out.append(r)
        return out

    def first_bigon(self):
        found = self.bigons()
        if not found:
            return None
        # deterministic choice: region containing the lowest (face, chord) half-edge
        best = None
        for (g, h), cell in self._cell_of_halfedge.items():
            r = self.cell_region[cell]
            if r in found:
                key = (g, h[0], h[1])
                if best is None or key < best[0]:
                    best = (key, r)
        return best[1]

    def disk_regions(self) -> list[int]:
        return [r for r in range(self.n_regions) if self.chi[r] == 1]

    def annulus_between(self, a: int, b: int):
        """Boundary walks of an annulus region cobounded by curves ``a`` and ``b``, or None."""
        for r, walks in self.walks_of_region.items():
            if self.chi[r] != 0 or len(walks) != 2:
                continue
            if any(w.corners for w in walks):
                continue
            curves = sorted(w.runs[0].curve for w in walks)
            if curves == sorted((a, b)):
                return walks
        return None

    def boundary_count(self, r: int) -> int:
        return len(self.walks_of_region.get(r, []))
