"""Exact arrangements of straight chords in the unit disk.

Points sit on the circle at rational tangent-half-angle parameters, so every
orientation test is exact. Positions are integer ticks on a clock of ``K``
ticks, increasing clockwise.
"""
from fractions import Fraction
import math


class Degenerate(Exception):
    """Three chords meet in one point; the caller should move endpoints."""


def circle_point(tick, K):
    theta = math.pi - 2 * math.pi * (tick + 0.5) / K
    t = Fraction(math.tan(theta / 2)).limit_denominator(10**7)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _sgn(x):
    return (x > 0) - (x < 0)


class ChordArrangement:
    """Chords given as pairs of clock ticks; crossings where endpoints interleave."""

    def __init__(self, chords, K):
        self.K = K
        self.ticks = [tuple(c) for c in chords]
        self.ends = [(circle_point(a, K), circle_point(b, K)) for a, b in self.ticks]
        self.crossings = {}
        m = len(self.ticks)
        for i in range(m):
            for j in range(i + 1, m):
                if self._interleave(self.ticks[i], self.ticks[j]):
                    self.crossings[(i, j)] = self._meet(i, j)
        self._on_chord = {c: [] for c in range(m)}
        for (i, j), x in self.crossings.items():
            for c in range(m):
                if c in (i, j):
                    continue
                if self.side(c, x) == 0:
                    raise Degenerate((i, j, c))
            self._on_chord[i].append(x)
            self._on_chord[j].append(x)

    @staticmethod
    def _interleave(c1, c2):
        a, b = sorted(c1)
        c, d = sorted(c2)
        return (a < c < b) != (a < d < b)

    def _meet(self, i, j):
        (p1, p2), (p3, p4) = self.ends[i], self.ends[j]
        d1 = _orient(p3, p4, p1)
        d2 = _orient(p3, p4, p2)
        s = d1 / (d1 - d2)
        return (p1[0] + s * (p2[0] - p1[0]), p1[1] + s * (p2[1] - p1[1]))

    def side(self, c, pt):
        a, b = self.ends[c]
        return _sgn(_orient(a, b, pt))

    def vector(self, pt, fixed=None):
        """Sign of ``pt`` against every chord; ``fixed`` overrides chosen chords."""
        fixed = fixed or {}
        return tuple(fixed[c] if c in fixed else self.side(c, pt) for c in range(len(self.ticks)))

    def boundary_vector(self, tick):
        return self.vector(circle_point(tick, self.K))

    def segments(self, c):
        """Midpoints of the pieces of chord ``c`` between consecutive crossings."""
        a, b = self.ends[c]
        dx, dy = b[0] - a[0], b[1] - a[1]
        key = lambda p: (p[0] - a[0]) * dx + (p[1] - a[1]) * dy
        pts = [a] + sorted(self._on_chord[c], key=key) + [b]
        return [((p[0] + q[0]) / 2, (p[1] + q[1]) / 2) for p, q in zip(pts, pts[1:])]

    def quadrants(self, i, j):
        """The four regions around crossing (i, j), keyed by their signs on i and j."""
        x = self.crossings[(i, j)]
        base = self.vector(x, {i: 0, j: 0})
        out = {}
        for si in (1, -1):
            for sj in (1, -1):
                v = list(base)
                v[i], v[j] = si, sj
                out[(si, sj)] = tuple(v)
        return x, out

    def region_graph(self):
        """Regions (sign vectors) with chord-labelled adjacencies and sample points."""
        regions = {}
        edges = set()

        def add(vec, pt):
            regions.setdefault(vec, []).append(pt)

        for c in range(len(self.ticks)):
            for mid in self.segments(c):
                base = list(self.vector(mid, {c: 0}))
                plus = tuple(base[:c] + [1] + base[c + 1:])
                minus = tuple(base[:c] + [-1] + base[c + 1:])
                add(plus, mid)
                add(minus, mid)
                edges.add((min(plus, minus), max(plus, minus), c))
        return regions, edges


def as_float(pt):
    return (float(pt[0]), float(pt[1]))


def clockwise_sort(center, items, ref_angle=None):
    """Sort ``(item, point)`` pairs clockwise around ``center`` starting after ``ref_angle``."""
    cx, cy = center
    ref = math.pi / 2 if ref_angle is None else ref_angle

    def key(entry):
        px, py = as_float(entry[1])
        a = math.atan2(py - cy, px - cx)
        return (ref - a) % (2 * math.pi)

    return [it for it, _ in sorted(items, key=key)]
