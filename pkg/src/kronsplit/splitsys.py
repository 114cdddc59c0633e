"""Crossing structure of circular split systems: blobs, bridges, obstruction, DOT."""
from dataclasses import dataclass, field
from fractions import Fraction

from ._arrangement import ChordArrangement, Degenerate, as_float
from .kalmanson import WeightedSplitSystem
from .matkernel import EXACT


def splits_cross(s1, s2, order=None):
    """True iff all four pairwise intersections of the parts are nonempty."""
    a, b = s1.parts
    c, d = s2.parts
    return bool(a & c and a & d and b & c and b & d)


@dataclass(frozen=True)
class Blob:
    """A connected class of crossing splits, placed at one node of the split tree.

    ``branches`` are the terminal groups around the blob in circular order;
    ``links`` gives, per branch, the compatible split joining it to the blob
    (None when the terminal attaches to the blob node directly).
    """

    index: int
    node: int
    splits: tuple
    branches: tuple
    links: tuple

    def representatives(self):
        """One terminal per branch: the smallest label on the far side."""
        return tuple(min(b) for b in self.branches)


@dataclass
class BlobDecomposition:
    system: WeightedSplitSystem
    bridge_candidates: list
    trivial: list
    blobs: list
    tree_nodes: dict  # node id -> taxa placed directly there
    tree_edges: list  # (child, parent, split)
    clusters: dict  # node id -> taxa below the node (root holds all)
    incidence: dict = field(default_factory=dict)  # split key -> blob indices

    def blob_at(self, node):
        for b in self.blobs:
            if b.node == node:
                return b
        return None

    def edge_blobs(self, split):
        return self.incidence.get(split.key, ())

    def blob_candidates(self):
        """Nontrivial compatible splits with at least one blob end."""
        return [s for s in self.bridge_candidates if self.incidence.get(s.key)]


def _crossing_components(splits):
    comp = {}
    for i, s in enumerate(splits):
        comp[i] = {i}
    parent = list(range(len(splits)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(splits)):
        for j in range(i + 1, len(splits)):
            if splits_cross(splits[i], splits[j]):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(splits)):
        groups.setdefault(find(i), []).append(splits[i])
    return list(groups.values())


def _arc_sort(branches, order):
    """Sort arcs by the position of their first element in clockwise order."""
    def start(b):
        pos = sorted(order.position(x) for x in b)
        n = order.n
        for p in pos:
            if (p - 1) % n not in pos:
                return p
        return pos[0]

    return tuple(sorted(branches, key=start))


def decompose(system):
    """Bridge candidates (non-crossing nontrivial splits) and blobs (crossing classes)."""
    taxa = system.taxa
    order = system.order
    nontrivial = system.nontrivial()
    groups = _crossing_components(nontrivial)
    blob_groups = [g for g in groups if len(g) > 1]
    candidates = [g[0] for g in groups if len(g) == 1]
    compatible = system.trivial() + candidates

    # rooted X-tree of the compatible splits; clusters avoid the root taxon
    clusters = {0: taxa}
    items = sorted(compatible, key=lambda s: -len(s.side))
    for k, s in enumerate(items, 1):
        clusters[k] = s.side
    parent = {}
    for k, s in enumerate(items, 1):
        best = 0
        for j in range(1, len(items) + 1):
            if j != k and s.side < clusters[j] and (best == 0 or len(clusters[j]) < len(clusters[best])):
                best = j
        parent[k] = best
    placed = {k: set() for k in clusters}
    for x in taxa:
        best = 0
        for k in range(1, len(items) + 1):
            if x in clusters[k] and (best == 0 or len(clusters[k]) < len(clusters[best])):
                best = k
        placed[best].add(x)
    tree_edges = [(k, parent[k], items[k - 1]) for k in range(1, len(items) + 1)]
    children = {k: [c for c in parent if parent[c] == k] for k in clusters}

    def branches_at(v):
        out = [(clusters[c], items[c - 1]) for c in children[v]]
        out += [(frozenset([x]), None) for x in placed[v]]
        if v != 0:
            out.append((taxa - clusters[v], items[v - 1]))
        return out

    blobs = []
    incidence = {}
    for idx, g in enumerate(blob_groups):
        home = None
        for v in clusters:
            br = branches_at(v)
            ok = True
            for s in g:
                for part, _ in br:
                    if part & s.side and not part <= s.side:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                home = v
                break
        if home is None:
            raise ValueError("crossing splits do not fit at a single tree node")
        br = branches_at(home)
        ordered = _arc_sort([frozenset(p) for p, _ in br], order)
        link_of = {frozenset(p): s for p, s in br}
        blob = Blob(
            idx,
            home,
            tuple(sorted(g, key=system._sort_key)),
            ordered,
            tuple(link_of[b] for b in ordered),
        )
        blobs.append(blob)
        for s in blob.links:
            if s is not None:
                incidence.setdefault(s.key, []).append(idx)
    incidence = {k: tuple(v) for k, v in incidence.items()}
    return BlobDecomposition(
        system,
        candidates,
        system.trivial(),
        blobs,
        {k: frozenset(v) for k, v in placed.items()},
        tree_edges,
        clusters,
        incidence,
    )


# -- obstruction -------------------------------------------------------------
@dataclass(frozen=True)
class ObstructionWitness:
    blocks: tuple  # (A, B, C, D)
    crossing: tuple  # splits (A∪B)|(C∪D) and (A∪D)|(B∪C)
    flanking: tuple  # splits with parts D and B
    a: object
    b: object

    def __str__(self):
        names = "ABCD"
        blocks = ", ".join(f"{names[i]}={sorted(x)}" for i, x in enumerate(self.blocks))
        return f"obstruction {blocks}; crossing weight {self.a}, flanking weight {self.b}"


def _equal(x, y, arith):
    if arith.exact:
        return x == y
    return arith.is_zero(x - y, max(abs(float(x)), abs(float(y)), 1.0))


def one_nested_obstruction(system, arith=EXACT):
    """Search for the equal-weight crossing/flanking pattern with a != b.

    ``None`` means no obstruction of this form was found; it does not
    certify that a 1-nested realisation exists.
    """
    nt = system.nontrivial()
    for i, s1 in enumerate(nt):
        for s2 in nt[i + 1:]:
            if not splits_cross(s1, s2) or not _equal(s1.weight, s2.weight, arith):
                continue
            x1, y1 = s1.parts
            x2, y2 = s2.parts
            q = (x1 & x2, x1 & y2, y1 & y2, y1 & x2)
            # either opposite pair of blocks can play the flanking role
            for blocks in (q, (q[1], q[2], q[3], q[0])):
                A, B, C, D = blocks
                sd = system.get(D)
                sb = system.get(B)
                if sd is None or sb is None or sd.is_trivial or sb.is_trivial:
                    continue
                if not _equal(sd.weight, sb.weight, arith):
                    continue
                if _equal(s1.weight, sd.weight, arith):
                    continue
                return ObstructionWitness(blocks, (s1, s2), (sd, sb), s1.weight, sd.weight)
    return None


# -- rendering ---------------------------------------------------------------
def _fmt_w(w):
    return str(w) if isinstance(w, (Fraction, int)) else f"{float(w):.6g}"


def _quote(s):
    return '"' + str(s).replace('"', r"\"") + '"'


def _split_chords(system, jitter=0):
    """Chord ticks for each split: endpoints in the gaps bounding its arc."""
    order = system.order
    n = order.n
    G = 8 * n
    K = n * G
    ends = {}
    for idx, s in enumerate(system):
        pos = sorted(order.position(x) for x in s.side)
        start = next(p for p in pos if (p - 1) % n not in pos)
        stop = (start + len(pos) - 1) % n
        # gap g sits between positions g and g+1
        ends[idx] = ((start - 1) % n, stop)
    per_gap = {}
    for idx, (g1, g2) in ends.items():
        per_gap.setdefault(g1, []).append((idx, g2))
        per_gap.setdefault(g2, []).append((idx, g1))
    tick = {i: [] for i in ends}
    for g, lst in per_gap.items():
        # farther clockwise partner first keeps chords from one gap disjoint
        lst.sort(key=lambda e: -((e[1] - g) % n))
        span = len(lst)
        for r, (idx, _) in enumerate(lst):
            wiggle = ((idx * 7 + r * 3 + jitter * 5) % 3 - 1) if jitter else 0
            tick[idx].append(((g + 1) * G + 4 * r - 2 * (span - 1) + wiggle) % K)
    chords = [tuple(tick[i]) for i in range(len(system))]
    term_ticks = {order[p]: p * G + G // 2 for p in range(n)}
    return chords, term_ticks, K


def split_network(system):
    """Planar split network: regions of the split-chord arrangement and their adjacencies.

    Returns ``(nodes, edges, terminals)`` where nodes map an id to a float
    position, edges are ``(u, v, split)`` and terminals map labels to node ids.
    """
    for jitter in range(0, 8):
        chords, term_ticks, K = _split_chords(system, jitter)
        try:
            arr = ChordArrangement(chords, K)
            break
        except Degenerate:
            continue
    else:
        raise RuntimeError("could not place split chords in general position")
    regions, edges = arr.region_graph()
    splits = list(system)
    term_region = {lab: arr.boundary_vector(t) for lab, t in term_ticks.items()}
    for lab, vec in term_region.items():
        regions.setdefault(vec, [])
    ids = {}
    # terminal regions first, in circular order, then the rest
    for lab in system.order:
        ids.setdefault(term_region[lab], len(ids))
    for vec in sorted(regions):
        ids.setdefault(vec, len(ids))
    pos = {}
    for vec, pts in regions.items():
        if pts:
            xs = [as_float(p) for p in pts]
            pos[ids[vec]] = (sum(p[0] for p in xs) / len(xs), sum(p[1] for p in xs) / len(xs))
        else:
            pos[ids[vec]] = (0.0, 0.0)
    out_edges = sorted((ids[u], ids[v], splits[c]) for u, v, c in edges)
    out_edges = sorted(
        ((min(u, v), max(u, v), s) for u, v, s in out_edges), key=lambda e: (e[0], e[1])
    )
    terms = {lab: ids[vec] for lab, vec in term_region.items()}
    return pos, out_edges, terms


def render_dot(system, style="network"):
    """DOT text for the split system.

    ``network`` draws the planar split network with one edge class per split;
    ``polygon`` draws the labelled n-gon with each nontrivial split as a
    diagonal and appends a plain-text split table as comments.
    """
    if style == "network":
        return _render_network(system)
    if style == "polygon":
        return _render_polygon(system)
    raise ValueError(f"unknown style {style!r}")


def _render_network(system):
    if len(system) == 0:
        lines = ["graph splits {"]
        lines += [f"  t{lab} [label={_quote(lab)}, shape=box];" for lab in system.order]
        return "\n".join(lines + ["}"]) + "\n"
    pos, edges, terms = split_network(system)
    names = {}
    for lab, nid in terms.items():
        names.setdefault(nid, []).append(lab)
    class_of = {s.key: i + 1 for i, s in enumerate(system)}
    lines = ["graph splits {", "  graph [layout=neato];", "  node [shape=point];"]
    for nid in sorted(pos):
        x, y = pos[nid]
        attrs = [f'pos="{x * 4:.3f},{y * 4:.3f}!"']
        if nid in names:
            attrs.append("shape=box")
            attrs.append(f"label={_quote(','.join(map(str, sorted(names[nid]))))}")
        lines.append(f"  n{nid} [{', '.join(attrs)}];")
    for u, v, s in edges:
        lines.append(
            f"  n{u} -- n{v} [label={_quote(_fmt_w(s.weight))}, class={_quote('split' + str(class_of[s.key]))}, "
            f"tooltip={_quote(s.label(system.order))}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def split_table(system):
    rows = [f"{'#':>3}  {'weight':>14}  split"]
    for i, s in enumerate(system, 1):
        rows.append(f"{i:>3}  {_fmt_w(s.weight):>14}  {s.label(system.order)}")
    return "\n".join(rows) + "\n"


def _render_polygon(system):
    order = system.order
    n = order.n
    lines = ["graph polygon {", "  graph [layout=circo];", "  node [shape=point];"]
    for table_line in split_table(system).splitlines():
        lines.append("  // " + table_line)
    # corner c sits between positions c-1 and c; side p joins corners p and p+1
    for c in range(n):
        lines.append(f"  c{c};")
    for p in range(n):
        lab = order[p]
        s = system.get([lab])
        w = f" w={_fmt_w(s.weight)}" if s is not None else ""
        lines.append(f"  c{p} -- c{(p + 1) % n} [label={_quote(str(lab) + w)}, style=bold];")
    for s in system.nontrivial():
        pos = sorted(order.position(x) for x in s.side)
        start = next(p for p in pos if (p - 1) % n not in pos)
        stop = (start + len(pos)) % n
        lines.append(
            f"  c{start} -- c{stop} [label={_quote(_fmt_w(s.weight))}, style=dashed, "
            f"tooltip={_quote(s.label(order))}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
