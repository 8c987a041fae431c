"""Geometric intersection numbers from hyperbolic geodesics.

Independent of the combinatorial engine: the standard surface is realized as
the quotient of the Poincare disk by the group generated by the side
pairings of a regular 4g-gon with angles 2pi/4g.  Each curve word becomes a
deck transformation; i(a, b) is the number of points on one period of the
axis of a where translates of the axis of b cross it.
"""

from __future__ import annotations

import math

import numpy as np


def _mob(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def _translate(c):
    s = 1 / math.sqrt(1 - abs(c) ** 2)
    return np.array([[1, c], [np.conj(c), 1]], dtype=complex) * s


def _rot(phi):
    return np.array([[np.exp(0.5j * phi), 0], [0, np.exp(-0.5j * phi)]], dtype=complex)


def _inv(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)


class HyperbolicModel:
    def __init__(self, surface, step: float = 0.01):
        cycle = surface.faces[0]
        if len(surface.faces) != 1:
            raise ValueError("oracle needs a one-face surface")
        n = len(cycle)
        self.surface = surface
        self.n = n
        self.step = step
        cosh_r = 1 / math.tan(math.pi / n) ** 2
        self.circumradius = math.acosh(cosh_r)
        r_poinc = math.tanh(self.circumradius / 2)
        self.vertices = [r_poinc * np.exp(2j * math.pi * k / n) for k in range(n)]
        rho = math.acosh(1 / math.tan(math.pi / n))
        mid_r = math.tanh(rho / 2)
        theta = [2 * math.pi * (k + 0.5) / n for k in range(n)]
        self.normals = [np.exp(1j * t) for t in theta]
        # Klein distance from the centre to each side
        self.side_h = 2 * mid_r / (1 + mid_r**2)
        half = np.array([[1j, 0], [0, -1j]], dtype=complex)
        gens = []
        for k, d in enumerate(cycle):
            kp = surface.pos_of[d ^ 1]
            mid = mid_r * np.exp(1j * theta[k])
            tm = _translate(mid)
            g = tm @ half @ _inv(tm) @ _rot(theta[k] - theta[kp])
            gens.append(g)
        self.gens = gens
        self.gens_inv = [_inv(g) for g in gens]
        self.ring = self._vertex_ring()

    # -- tiles ------------------------------------------------------------------

    def _beyond(self, z):
        kz = 2 * z / (1 + abs(z) ** 2)
        best, arg = self.side_h + 1e-12, None
        for k, nv in enumerate(self.normals):
            v = (kz * np.conj(nv)).real
            if v > best:
                best, arg = v, k
        return arg

    def locate(self, z, m=None):
        """Tile element M with z in M(P), searching from ``m``."""
        m = np.eye(2, dtype=complex) if m is None else m
        w = _mob(_inv(m), z)
        for _ in range(10000):
            k = self._beyond(w)
            if k is None:
                return m
            m = m @ self.gens[k]
            w = _mob(self.gens_inv[k], w)
        raise RuntimeError("tile location did not converge")

    def _vertex_ring(self):
        verts = self.vertices
        seen = {self._tile_key(np.eye(2, dtype=complex)): np.eye(2, dtype=complex)}
        frontier = [np.eye(2, dtype=complex)]
        for _ in range(self.n // 2 + 1):
            nxt = []
            for m in frontier:
                for g in self.gens:
                    w = m @ g
                    key = self._tile_key(w)
                    if key in seen:
                        continue
                    images = [_mob(w, v) for v in verts]
                    if any(abs(a - b) < 1e-9 for a in images for b in verts):
                        seen[key] = w
                        nxt.append(w)
            frontier = nxt
        return list(seen.values())

    @staticmethod
    def _tile_key(m):
        c = _mob(m, 0)
        return (round(c.real, 7), round(c.imag, 7))

    # -- curves -------------------------------------------------------------------

    def element(self, word):
        m = np.eye(2, dtype=complex)
        for d in word:
            m = m @ self.gens[self.surface.pos_of[d]]
        return m

    def axis(self, m):
        """(repelling, attracting) fixed points and translation length."""
        a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        tr = (a + d).real
        if abs(tr) <= 2 + 1e-12:
            raise ValueError("element is not hyperbolic")
        disc = np.sqrt((a - d) ** 2 + 4 * b * c)
        z1, z2 = (a - d + disc) / (2 * c), (a - d - disc) / (2 * c)
        # attracting point: derivative of the map there has modulus < 1
        der1 = abs(1 / (c * z1 + d) ** 2)
        if der1 < 1:
            att, rep = z1, z2
        else:
            att, rep = z2, z1
        length = 2 * math.acosh(abs(tr) / 2)
        return rep / abs(rep), att / abs(att), length

    def frame(self, rep, att):
        """Isometry sending -1 to ``rep`` and +1 to ``att``."""
        alpha, beta = np.angle(rep), np.angle(att)
        mid = (alpha + beta) / 2
        psi = abs((beta - alpha + math.pi) % (2 * math.pi) - math.pi) / 2
        bis = np.exp(1j * mid)
        if abs(np.exp(1j * mid) - rep) + abs(np.exp(1j * mid) - att) > abs(-bis - rep) + abs(-bis - att):
            bis = -bis
        r0 = (1 - math.sin(psi)) / math.cos(psi) if psi < math.pi / 2 - 1e-12 else 0.0
        x0 = r0 * bis
        for phi in (np.angle(bis) + math.pi / 2, np.angle(bis) - math.pi / 2):
            f = _translate(x0) @ _rot(phi)
            if abs(_mob(f, 1) - att) < 1e-6 and abs(_mob(f, -1) - rep) < 1e-6:
                return f
        raise RuntimeError("could not frame geodesic")

    def tiles_along(self, word):
        m = self.element(word)
        rep, att, length = self.axis(m)
        f = self.frame(rep, att)
        tiles = {}
        cur = None
        steps = int(length / self.step) + 2
        for i in range(steps):
            s = i * self.step
            z = _mob(f, math.tanh(s / 2))
            cur = self.locate(z, cur)
            tiles.setdefault(self._tile_key(cur), cur)
        return list(tiles.values()), (rep, att, length, f)


class IntersectionOracle:
    def __init__(self, surface, step: float = 0.01):
        self.model = HyperbolicModel(surface, step)
        self._cache = {}

    def _data(self, word):
        word = tuple(word)
        if word not in self._cache:
            tiles, geo = self.model.tiles_along(word)
            ring = self.model.ring
            wide = {}
            for t in tiles:
                for r in ring:
                    m = t @ r
                    wide.setdefault(HyperbolicModel._tile_key(m), m)
            self._cache[word] = (tiles, list(wide.values()), geo)
        return self._cache[word]

    def intersection(self, wa, wb) -> int:
        _, wide_a, (_, _, len_a, fa) = self._data(wa)
        tiles_b, _, (rep_b, att_b, _, _) = self._data(wb)
        t = np.array(wide_a)  # K x 2 x 2
        # endpoints of U^-1 axis(b) for every tile U along b
        pts = []
        for u in tiles_b:
            ui = _inv(u)
            pts.append((_mob(ui, rep_b), _mob(ui, att_b)))
        p1 = np.array([p for p, _ in pts])
        p2 = np.array([q for _, q in pts])
        # frame centred on the middle of the period keeps endpoints away from +-1
        half = len_a / 2
        shift = np.array([[math.cosh(half / 2), math.sinh(half / 2)], [math.sinh(half / 2), math.cosh(half / 2)]])
        fi = _inv(fa @ shift)
        # compose fa^-1 with each T, then apply to all points
        comp = np.einsum("ij,kjl->kil", fi, t)
        a, b, c, d = comp[:, 0, 0, None], comp[:, 0, 1, None], comp[:, 1, 0, None], comp[:, 1, 1, None]
        w1 = (a * p1 + b) / (c * p1 + d)
        w2 = (a * p2 + b) / (c * p2 + d)
        w1 = w1 / np.abs(w1)
        w2 = w2 / np.abs(w2)
        cross = ((w1.imag * w2.imag) < 0) & (np.minimum(np.abs(w1.imag), np.abs(w2.imag)) > 1e-9)
        if not cross.any():
            return 0
        u1, u2 = w1[cross], w2[cross]
        ssum = u1 + u2
        with np.errstate(divide="ignore", invalid="ignore"):
            cen = 2 * u1 * u2 / ssum
            rc = cen.real
            x = np.where(np.abs(ssum) < 1e-12, 0.0, rc - np.sign(rc) * np.sqrt(np.maximum(rc * rc - 1, 0.0)))
        s = 2 * np.arctanh(np.clip(x, -1 + 1e-15, 1 - 1e-15)) + half
        # every crossing on the sampled period is seen from a tile adjacent to
        # a sampled one, so hits outside the period are redundant (and less precise)
        eps = 1e-6
        s = s[(s > -eps) & (s < len_a + eps)]
        s = np.mod(s, len_a)
        vals = sorted(float(v) for v in s)
        tol = 1e-4
        groups = []
        for v in vals:
            if groups and v - groups[-1] < tol:
                groups[-1] = v
                continue
            groups.append(v)
        if len(groups) > 1 and groups[0] + len_a - groups[-1] < tol:
            groups.pop()
        return len(groups)

    def translation_length(self, word) -> float:
        return self._data(word)[2][2]

    def same_geodesic(self, wa, wb) -> bool:
        """True when the closed geodesics of ``wa`` and ``wb`` coincide as unoriented curves."""
        if abs(self.translation_length(wa) - self.translation_length(wb)) > 1e-7:
            return False
        _, wide_a, (rep_a, att_a, _, _) = self._data(wa)
        tiles_b, _, (rep_b, att_b, _, _) = self._data(wb)
        for t in wide_a:
            for u in tiles_b:
                h = t @ _inv(u)
                e1, e2 = _mob(h, rep_b), _mob(h, att_b)
                if (abs(e1 - rep_a) < 1e-7 and abs(e2 - att_a) < 1e-7) or (
                    abs(e1 - att_a) < 1e-7 and abs(e2 - rep_a) < 1e-7
                ):
                    return True
        return False
