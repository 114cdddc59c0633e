"""Network model, forward simulation, connections and medial strands."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import math
import random

import numpy as np

from .circular import CircularOrder, enumerate_circular_pairs
from .errors import DisconnectedError, EmbeddingError, ParseError, SizeGuardError
from .matkernel import SquareMatrix, laplacian_pseudoinverse, schur_complement, to_fraction
from .response import _resistance_from_pinv

UNKNOWN = None  # conductance marker for edges whose weight is not recovered


class Network:
    """Undirected network with a circularly ordered boundary.

    ``edges`` maps a sorted node pair to its conductance (``UNKNOWN`` allowed).
    ``rotation`` gives, per node, its neighbours in clockwise order; boundary
    lists are linear, running clockwise from the arc towards the next terminal
    to the arc towards the previous one.
    """

    def __init__(self, boundary, interior=(), edges=(), rotation=None):
        self.boundary = tuple(boundary)
        self.interior = tuple(interior)
        nodes = self.boundary + self.interior
        if len(set(nodes)) != len(nodes):
            raise ValueError("node identifiers must be distinct across boundary and interior")
        self._rank = {v: i for i, v in enumerate(nodes)}
        merged = {}
        for e in edges:
            u, v, c = e if len(e) == 3 else (e[0], e[1], Fraction(1))
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            for x in (u, v):
                if x not in self._rank:
                    raise ValueError(f"edge endpoint {x} is not a node")
            key = self._key(u, v)
            if c is not UNKNOWN:
                c = to_fraction(c) if not isinstance(c, float) else c
                if c <= 0:
                    raise ValueError(f"conductance on {key} must be positive")
            if key in merged:
                old = merged[key]
                merged[key] = UNKNOWN if old is UNKNOWN or c is UNKNOWN else old + c
            else:
                merged[key] = c
        self.edges = dict(sorted(merged.items(), key=lambda kv: (self._rank[kv[0][0]], self._rank[kv[0][1]])))
        self._adj = {v: [] for v in nodes}
        for u, v in self.edges:
            self._adj[u].append(v)
            self._adj[v].append(u)
        self.rotation = None
        if rotation is not None:
            self.rotation = {v: tuple(rotation.get(v, ())) for v in nodes}
            self._check_rotation()

    def _key(self, u, v):
        return (u, v) if self._rank[u] < self._rank[v] else (v, u)

    # -- structure --------------------------------------------------------
    @property
    def nodes(self):
        return self.boundary + self.interior

    @property
    def n(self):
        return len(self.boundary)

    @property
    def order(self):
        return CircularOrder(self.boundary)

    def neighbors(self, v):
        return tuple(self._adj[v])

    def degree(self, v):
        return len(self._adj[v])

    def conductance(self, u, v):
        return self.edges.get(self._key(u, v), 0)

    def has_edge(self, u, v):
        return self._key(u, v) in self.edges

    @property
    def weighted(self):
        return all(c is not UNKNOWN for c in self.edges.values())

    def is_connected(self):
        nodes = self.nodes
        if not nodes:
            return True
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(nodes)

    def with_conductances(self, conductances):
        """Copy with conductances replaced from a mapping keyed like ``edges``."""
        edges = [(u, v, conductances.get((u, v), c)) for (u, v), c in self.edges.items()]
        return Network(self.boundary, self.interior, edges, self.rotation)

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.boundary == other.boundary
            and set(self.interior) == set(other.interior)
            and self.edges == other.edges
            and self.rotation == other.rotation
        )

    __hash__ = None

    def __repr__(self):
        return f"Network(n={self.n}, interior={len(self.interior)}, edges={len(self.edges)})"

    # -- embedding checks -------------------------------------------------
    def _check_rotation(self):
        for v in self.nodes:
            rot = self.rotation[v]
            if sorted(rot, key=self._rank.get) != sorted(self._adj[v], key=self._rank.get):
                raise EmbeddingError(f"rotation at {v} does not list exactly its neighbours")
        if self.is_connected() and len(self.edges) and self.n >= 1:
            faces, outer_ok = _trace_faces(self)
            v_count = len(self.nodes)
            e_count = len(self.edges) + (self.n if self.n >= 2 else 0)
            if v_count - e_count + faces != 2 or not outer_ok:
                raise EmbeddingError("rotation system is not a disk embedding with the given boundary")


_NEXT = "<next>"
_PREV = "<prev>"


def _corner_lists(net):
    """Clockwise corner lists; boundary nodes get the two arc sentinels."""
    lists = {}
    bset = set(net.boundary)
    for v in net.nodes:
        rot = list(net.rotation[v])
        lists[v] = [_NEXT] + rot + [_PREV] if v in bset else rot
    return lists


def _trace_faces(net):
    """Count faces of the rotation system augmented by the boundary cycle."""
    n = net.n
    rot = {}
    bidx = {b: i for i, b in enumerate(net.boundary)}
    for v in net.nodes:
        base = [("e", w) for w in net.rotation[v]]
        if v in bidx and n >= 2:
            i = bidx[v]
            base = [("arc", i)] + base + [("arc", (i - 1) % n)]
        rot[v] = base

    def other(v, h):
        kind, x = h
        if kind == "e":
            return x, ("e", v)
        i = x
        a, b = net.boundary[i], net.boundary[(i + 1) % n]
        return (b if v == a else a), h

    darts = [(v, h) for v in net.nodes for h in rot[v]]
    seen = set()
    faces = 0
    outer_ok = n < 2
    for d in darts:
        if d in seen:
            continue
        faces += 1
        cur = d
        arcs_in_face = 0
        length = 0
        while cur not in seen:
            seen.add(cur)
            length += 1
            v, h = cur
            w, back = other(v, h)
            if h[0] == "arc":
                arcs_in_face += 1
            lst = rot[w]
            j = lst.index(back)
            cur = (w, lst[(j - 1) % len(lst)])
        if arcs_in_face == n and length == n and n >= 2:
            outer_ok = True
    return faces, outer_ok


# -- forward simulation ---------------------------------------------------
def laplacian(net, exact=True):
    """Weighted Laplacian with non-negative off-diagonals and zero row sums."""
    if not net.weighted:
        raise ValueError("network has edges of unknown conductance")
    nodes = net.nodes
    m = len(nodes)
    if m == 0:
        raise ValueError("empty network")
    idx = {v: i for i, v in enumerate(nodes)}
    if exact:
        data = np.full((m, m), Fraction(0), dtype=object)
    else:
        data = np.zeros((m, m))
    for (u, v), c in net.edges.items():
        c = c if exact else float(c)
        i, j = idx[u], idx[v]
        data[i, j] += c
        data[j, i] += c
        data[i, i] -= c
        data[j, j] -= c
    return SquareMatrix(data, nodes, exact=exact)


def response_matrix(net, exact=True):
    """Kron reduction of the Laplacian onto the boundary, in circular order."""
    if not net.is_connected():
        raise DisconnectedError("network is disconnected")
    return schur_complement(laplacian(net, exact), net.boundary)


def resistance_matrix(net, exact=True):
    """Effective resistance between every pair of nodes."""
    if not net.is_connected():
        raise DisconnectedError("network is disconnected")
    lap = laplacian(net, exact)
    neg = SquareMatrix(-lap.data, lap.labels, exact=exact)
    return _resistance_from_pinv(laplacian_pseudoinverse(neg))


# -- connections ----------------------------------------------------------
def _disjoint_paths(adj, interior, pairs, used):
    if not pairs:
        return True
    (s, t), rest = pairs[0], pairs[1:]
    # reachability prune for the remaining pairs
    for a, b in pairs:
        if not _reachable(adj, interior, a, b, used):
            return False

    def walk(v, path):
        for w in adj[v]:
            if w == t:
                if _disjoint_paths(adj, interior, rest, used | path):
                    return True
            elif w in interior and w not in used and w not in path:
                if walk(w, path | {w}):
                    return True
        return False

    return walk(s, frozenset())


def _reachable(adj, interior, s, t, used):
    seen = {s}
    stack = [s]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w == t:
                return True
            if w in interior and w not in used and w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def has_connection(net, pair):
    """True when vertex-disjoint interior paths join p_i to q_i for every i."""
    adj = {v: net.neighbors(v) for v in net.nodes}
    interior = frozenset(net.interior)
    return _disjoint_paths(adj, interior, list(zip(pair.p, pair.q)), frozenset())


def enumerate_connections(net, max_k=None, max_nodes=16):
    """Every circular pair (ordered, all orientations) realised by disjoint interior paths."""
    if len(net.nodes) > max_nodes:
        raise SizeGuardError(
            f"{len(net.nodes)} nodes exceeds the exhaustive bound {max_nodes}; "
            "use circular minors of the response matrix instead"
        )
    adj = {v: net.neighbors(v) for v in net.nodes}
    interior = frozenset(net.interior)
    found = set()
    for pr in enumerate_circular_pairs(net.order, max_k):
        tr = pr.transpose()
        if tr in found:
            found.add(pr)
            continue
        if _disjoint_paths(adj, interior, list(zip(pr.p, pr.q)), frozenset()):
            found.add(pr)
    return frozenset(found)


# -- strand matchings -----------------------------------------------------
@dataclass(frozen=True)
class StrandMatching:
    """Perfect matching on the stubs 1..2n, stored as sorted pairs."""

    n: int
    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        flat = [s for p in pairs for s in p]
        if sorted(flat) != list(range(1, 2 * self.n + 1)):
            raise ValueError("not a perfect matching on stubs 1..2n")

    @classmethod
    def from_pairs(cls, n, pairs):
        return cls(n, tuple(pairs))

    def partner(self, stub):
        for a, b in self.pairs:
            if a == stub:
                return b
            if b == stub:
                return a
        raise KeyError(stub)

    def as_sets(self):
        return {frozenset(p) for p in self.pairs}

    @staticmethod
    def interleave(p1, p2):
        a, b = sorted(p1)
        c, d = sorted(p2)
        return (a < c < b) != (a < d < b)

    def crossings(self):
        return [(p, q) for p, q in combinations(self.pairs, 2) if self.interleave(p, q)]

    def __str__(self):
        return "{" + ",".join("{%d,%d}" % p for p in self.pairs) + "}"


def medial_strand_matching(net):
    """Trace medial strands from the 2n stubs.

    Stub 2i-1 sits just counterclockwise of terminal i and stub 2i just
    clockwise. Returns ``(matching, lens)`` where ``lens`` is raised when a
    strand meets itself, two strands cross twice, or a closed strand exists.
    """
    if net.rotation is None:
        raise EmbeddingError("medial strands need a rotation system")
    lists = _corner_lists(net)
    bset = set(net.boundary)
    bidx = {b: i + 1 for i, b in enumerate(net.boundary)}

    def succ(v, e):
        lst = lists[v]
        j = lst.index(e)
        return lst[(j + 1) % len(lst)] if v not in bset else lst[j + 1]

    def pred(v, e):
        lst = lists[v]
        j = lst.index(e)
        return lst[(j - 1) % len(lst)] if v not in bset else lst[j - 1]

    visits = {key: [] for key in net.edges}
    matched = {}
    for start in range(1, 2 * net.n + 1):
        if start in matched:
            continue
        i = (start + 1) // 2
        v = net.boundary[i - 1]
        if start % 2 == 0:
            e = succ(v, _NEXT)
            state = None if e == _PREV else (v, e, "second")
            end = 2 * i - 1
        else:
            e = pred(v, _PREV)
            state = None if e == _NEXT else (v, e, "first")
            end = 2 * i
        while state is not None:
            u, w, tau = state
            visits[net._key(u, w)].append(start)
            if tau == "second":
                g = pred(w, u)
                if g == _NEXT:
                    end, state = 2 * bidx[w], None
                else:
                    state = (w, g, "first")
            else:
                g = succ(w, u)
                if g == _PREV:
                    end, state = 2 * bidx[w] - 1, None
                else:
                    state = (w, g, "second")
        matched[start] = end
        matched[end] = start
    pairs = {tuple(sorted(p)) for p in matched.items()}
    lens = False
    meetings = {}
    for key, who in visits.items():
        if len(who) < 2:
            lens = True  # a closed strand passes here
        elif who[0] == who[1]:
            lens = True
        else:
            pair = frozenset(who)
            meetings[pair] = meetings.get(pair, 0) + 1
    if any(c > 1 for c in meetings.values()):
        lens = True
    return StrandMatching(net.n, tuple(pairs)), lens


# -- text format ------------------------------------------------------------
def _node_id(tok):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"node identifiers must be integers, got {tok!r}") from None


def parse_network(text):
    """Parse ``node``/``edge``/``rot`` lines; ``#`` starts a comment."""
    boundary, interior, edges, rot = [], [], [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0].lower()
        try:
            if kind == "node" and len(toks) == 3:
                role = toks[2].lower()
                if role not in ("boundary", "interior"):
                    raise ParseError(f"unknown role {toks[2]!r}")
                (boundary if role == "boundary" else interior).append(_node_id(toks[1]))
            elif kind == "edge" and len(toks) == 4:
                c = UNKNOWN if toks[3] in ("?", "unknown") else to_fraction(toks[3])
                edges.append((_node_id(toks[1]), _node_id(toks[2]), c))
            elif kind == "rot" and len(toks) >= 2:
                rot[_node_id(toks[1])] = tuple(_node_id(t) for t in toks[2:])
            else:
                raise ParseError(f"cannot parse {line!r}")
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    try:
        return Network(boundary, interior, edges, rot or None)
    except (ValueError, EmbeddingError) as exc:
        raise ParseError(str(exc)) from None


def format_network(net):
    out = [f"node {b} boundary" for b in net.boundary]
    out += [f"node {v} interior" for v in net.interior]
    for (u, v), c in net.edges.items():
        out.append(f"edge {u} {v} {'?' if c is UNKNOWN else c}")
    if net.rotation is not None:
        for v in net.nodes:
            out.append("rot " + " ".join(map(str, (v,) + net.rotation[v])))
    return "\n".join(out) + "\n"


def read_network(path):
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


# -- random generation ------------------------------------------------------
def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segments_cross(p1, p2, p3, p4):
    if {p1, p2} & {p3, p4}:
        return False
    d1, d2 = _orient(p3, p4, p1), _orient(p3, p4, p2)
    d3, d4 = _orient(p1, p2, p3), _orient(p1, p2, p4)
    return d1 * d2 < 0 and d3 * d4 < 0


def _near_segment(p, a, b, eps):
    ax, ay = b[0] - a[0], b[1] - a[1]
    t = ((p[0] - a[0]) * ax + (p[1] - a[1]) * ay) / (ax * ax + ay * ay)
    if t <= 0 or t >= 1:
        return False
    qx, qy = a[0] + t * ax, a[1] + t * ay
    return math.hypot(p[0] - qx, p[1] - qy) < eps


def geometric_rotation(coords, boundary, adj):
    """Clockwise rotations from planar coordinates (boundary on the unit circle)."""
    rot = {}
    bset = set(boundary)
    for v, nbrs in adj.items():
        x0, y0 = coords[v]

        def cw_angle(w, ref):
            a = math.atan2(coords[w][1] - y0, coords[w][0] - x0)
            return (ref - a) % (2 * math.pi)

        if v in bset:
            # start just after the clockwise tangent direction at the circle
            ref = math.atan2(y0, x0) - math.pi / 2
            rot[v] = tuple(sorted(nbrs, key=lambda w: cw_angle(w, ref)))
        else:
            rot[v] = tuple(sorted(nbrs, key=lambda w: cw_angle(w, 0.0)))
    return rot


def _rational_conductance(rng, lo=1, hi=5, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_circular_planar(n, interior=0, seed=0, density=0.5, boundary_chords=True,
                           conductance=None):
    """Random connected circular planar network with embedding.

    Terminals 1..n sit clockwise on the unit circle; interior nodes are random
    points inside. A random planar triangulation of the points is thinned to a
    random spanning tree plus each remaining edge with probability ``density``.
    """
    if n < 2:
        raise ValueError("need at least two terminals")
    rng = random.Random(seed)
    coords = {}
    for i in range(1, n + 1):
        ang = math.pi / 2 - 2 * math.pi * (i - 1) / n
        coords[i] = (math.cos(ang), math.sin(ang))
    inner = list(range(n + 1, n + interior + 1))
    for v in inner:
        while True:
            r = 0.8 * math.sqrt(rng.random())
            t = 2 * math.pi * rng.random()
            p = (r * math.cos(t), r * math.sin(t))
            if all(math.dist(p, q) > 0.15 for q in coords.values()):
                coords[v] = p
                break
    nodes = list(coords)
    cand = [(u, v) for u, v in combinations(nodes, 2)]
    rng.shuffle(cand)
    tri = []
    for u, v in cand:
        if not boundary_chords and u <= n and v <= n and (v - u) % n not in (1, n - 1):
            continue
        a, b = coords[u], coords[v]
        if any(_segments_cross(a, b, coords[x], coords[y]) for x, y in tri):
            continue
        if any(_near_segment(coords[w], a, b, 0.02) for w in nodes if w not in (u, v)):
            continue
        tri.append((u, v))
    # random spanning tree (Kruskal on a shuffled order) plus extra edges
    parent = {v: v for v in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order = tri[:]
    rng.shuffle(order)
    keep = []
    rest = []
    for u, v in order:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            keep.append((u, v))
        else:
            rest.append((u, v))
    keep += [e for e in rest if rng.random() < density]
    adj = {v: [] for v in nodes}
    for u, v in keep:
        adj[u].append(v)
        adj[v].append(u)
    rot = geometric_rotation(coords, list(range(1, n + 1)), adj)
    gen = conductance or _rational_conductance
    edges = [(u, v, gen(rng)) for u, v in sorted(tuple(sorted(e)) for e in keep)]
    return Network(range(1, n + 1), inner, edges, rot)


def random_one_nested(blocks=4, seed=0, terminal_rate=0.5, conductance=None):
    """Random 1-nested network: a cactus where every edge lies on at most one cycle.

    Blocks (pendant edges or cycles of length 3 to 5) are glued at existing
    nodes. Every node of an outerplanar cactus lies on the outer face, so
    leaves plus a random share of the other nodes become terminals, numbered
    1..n in the order the outer boundary walk meets them.
    """
    rng = random.Random(seed)
    gen = conductance or (lambda r: Fraction(r.randint(1, 9), r.randint(1, 9)))
    children = {0: []}  # node -> blocks hung below it, each a list of new nodes
    edges = []
    nxt = 1
    for _ in range(blocks):
        v = rng.choice(sorted(children))
        size = 1 if rng.random() < 0.4 else rng.randint(2, 4)
        new = list(range(nxt, nxt + size))
        nxt += size
        path = [v] + new + ([v] if size > 1 else [])
        edges += [(a, b) for a, b in zip(path, path[1:])]
        # a random slot keeps the walk order independent of insertion order
        children[v].insert(rng.randint(0, len(children[v])), new)
        for u in new:
            children[u] = []
    walk = []

    def visit(v):
        walk.append(v)
        for block in children[v]:
            for u in block:
                visit(u)

    visit(0)
    deg = {v: 0 for v in children}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    terms = [v for v in walk if deg[v] == 1 or rng.random() < terminal_rate]
    if len(terms) < 2:
        terms = walk[:2]
    inner = [v for v in walk if v not in terms]
    label = {v: i + 1 for i, v in enumerate(terms + inner)}
    return Network(
        range(1, len(terms) + 1),
        range(len(terms) + 1, len(walk) + 1),
        [(label[a], label[b], gen(rng)) for a, b in edges],
    )
