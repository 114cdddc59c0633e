"""Inverse pipeline: bridges, blob isolation, strand reconstruction, reassembly."""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional
import math
import warnings

import numpy as np

from ._arrangement import ChordArrangement, Degenerate, as_float, circle_point, clockwise_sort
from .circular import (
    CircularOrder,
    CircularPair,
    as_order,
    enumerate_circular_pairs,
    is_circular_planar,
    minor_table,
)
from .errors import (
    AttachmentError,
    InconsistentMatchingError,
    KronSplitError,
    NotKalmansonError,
    PipelineError,
)
from .kalmanson import (
    consistent_orders,
    find_circular_order,
    is_kalmanson,
    split_decomposition,
)
from .matkernel import EXACT, Arith, SquareMatrix, arith_for, schur_complement
from .network import UNKNOWN, Network, StrandMatching
from .response import m_from_w, validate_response, w_from_m
from .splitsys import decompose


# -- cut frame ----------------------------------------------------------------
@dataclass(frozen=True)
class CutFrame:
    """Stubs t_1..t_2n and cuts x_1..x_2n around n terminals.

    Cut x_{2m} lies on terminal m and x_{2m-1} on the midpoint before it;
    stub t_i sits between x_i and x_{i+1}.
    """

    n: int

    def stub_terminal(self, stub):
        return (stub + 1) // 2

    def inside(self, i, j):
        """Terminals strictly between cuts x_i and x_j (i < j), clockwise."""
        return [m for m in range(1, self.n + 1) if i < 2 * m < j]

    def outside(self, i, j):
        """Terminals strictly outside, listed counterclockwise from x_i."""
        before = [m for m in range(self.n, 0, -1) if 2 * m < i]
        after = [m for m in range(self.n, 0, -1) if 2 * m > j]
        return before + after


def num_terminals(n, quoted_shift=False):
    """Terminals strictly between cuts, as a 2n x 2n matrix (1-based cuts).

    Row 1 reads 0,0,1,1,...,n-1,n-1. With ``quoted_shift`` each later row
    is row 1 shifted right by floor(i/2)+1 places instead, a rule that only
    agrees with the count for rows 2 and 3.
    """
    size = 2 * n
    out = np.zeros((size, size), dtype=np.int64)
    frame = CutFrame(n)
    for i in range(1, size + 1):
        for j in range(i + 1, size + 1):
            out[i - 1, j - 1] = len(frame.inside(i, j))
    if quoted_shift:
        row1 = out[0].copy()
        for i in range(2, size + 1):
            s = i // 2 + 1
            out[i - 1] = 0
            out[i - 1, s:] = row1[: size - s]
    return out


def _ordered(m, order):
    order = as_order(order, m.labels)
    return m.restrict(order.seq), order


def max_respected(m, order=None, arith=None):
    """MR(i, j): largest k with a positive circular minor respecting the cut x_i x_j."""
    arith = arith or arith_for(m)
    m, order = _ordered(m.in_mode(arith), order)
    n = order.n
    lab = order.seq
    table = minor_table(m, enumerate_circular_pairs(order), arith)
    positive = {pr for pr, (sgn, _) in table.items() if sgn > 0}
    frame = CutFrame(n)
    size = 2 * n
    mr = np.zeros((size, size), dtype=np.int64)
    for i in range(1, size + 1):
        for j in range(i + 1, size + 1):
            ins = frame.inside(i, j)
            out = frame.outside(i, j)
            best = 0
            for k in range(min(len(ins), len(out)), 0, -1):
                hit = False
                for ps in combinations(ins, k):
                    p = tuple(lab[x - 1] for x in ps)
                    for qs in combinations(out, k):
                        if CircularPair(p, tuple(lab[x - 1] for x in qs)) in positive:
                            hit = True
                            break
                    if hit:
                        break
                if hit:
                    best = k
                    break
            mr[i - 1, j - 1] = mr[j - 1, i - 1] = best
    return mr


def reentrants(m, order=None, arith=None):
    """RE = NumTerminals - MaxRespected on the upper triangle."""
    mr = max_respected(m, order, arith)
    n = mr.shape[0] // 2
    return np.triu(num_terminals(n) - mr, 1)


def reentrants_of(matching):
    """RE implied by a matching: strands with both ends among t_i..t_{j-1}."""
    size = 2 * matching.n
    out = np.zeros((size, size), dtype=np.int64)
    for i in range(1, size + 1):
        for j in range(i + 1, size + 1):
            out[i - 1, j - 1] = sum(1 for a, b in matching.pairs if i <= a and b <= j - 1)
    return out


def strands_from_reentrants(re):
    """Perfect matching read off RE by the first-differing-column rule."""
    size = re.shape[0]
    n = size // 2
    partner = {}
    for i in range(1, size):
        r0, r1 = re[i - 1], re[i]
        diff = [int(r0[c] - r1[c]) for c in range(i + 1, size)]
        first = next((t for t, d in enumerate(diff) if d != 0), None)
        if first is None:
            continue
        if any(d != 1 for d in diff[first:]) or any(d != 0 for d in diff[:first]):
            raise InconsistentMatchingError(f"inconsistent re-entrant matrix at row {i}")
        j = first + i + 1  # 0-based column; strand ends at stub j (1-based column j+1 -> t_j)
        if i in partner or j in partner:
            raise InconsistentMatchingError(f"inconsistent re-entrant matrix: stub reused at rows {i}, {j}")
        partner[i] = j
        partner[j] = i
    free = [s for s in range(1, size + 1) if s not in partner]
    if len(free) == 2:
        partner[free[0]] = free[1]
        partner[free[1]] = free[0]
    elif free:
        raise InconsistentMatchingError(f"inconsistent re-entrant matrix: stubs {free} unmatched")
    pairs = {tuple(sorted(p)) for p in partner.items()}
    matching = StrandMatching(n, tuple(pairs))
    if not np.array_equal(np.triu(reentrants_of(matching), 1), np.triu(re, 1)):
        raise InconsistentMatchingError("inconsistent re-entrant matrix: matching does not reproduce it")
    return matching


def strand_matching_from_response(m, order=None, arith=None):
    """Curtis-Morrow strand matching of a planar blob response matrix."""
    return strands_from_reentrants(reentrants(m, order, arith))


# -- matching to graph ----------------------------------------------------------
def _stub_ticks(n, jitter, G, spikes):
    ticks = {}
    base = G // 8
    for i in range(1, n + 1):
        centre = (i - 1) * G + G // 2
        if i in spikes:
            a = b = 1
        else:
            a = base + (jitter * (2 * i + 1)) % 4
            b = base + (jitter * (3 * i + 2)) % 4
        ticks[2 * i - 1] = centre - a
        ticks[2 * i] = centre + b
    return ticks, n * G, {i: (i - 1) * G + G // 2 for i in range(1, n + 1)}


def _arrangement_for(matching, G, spikes):
    for jitter in range(12):
        ticks, K, term_ticks = _stub_ticks(matching.n, jitter, G, spikes)
        chords = [(ticks[a], ticks[b]) for a, b in matching.pairs]
        try:
            return ChordArrangement(chords, K), K, term_ticks
        except Degenerate:
            continue
    raise InconsistentMatchingError("could not draw the matching in general position")


def matching_to_graph(matching, conductance=UNKNOWN, spikes=()):
    """Critical graph of a strand matching, with a disk embedding.

    Strands are drawn as straight chords (pairwise crossing at most once),
    the faces are 2-coloured with terminal faces shaded, and shaded faces
    meeting at a crossing are joined by an edge. Terminals in ``spikes``
    get their two stubs squeezed together, so when their strands cross the
    terminal ends up on a pendant edge.
    """
    spikes = frozenset(spikes)
    want = {i for i in spikes
            if StrandMatching.interleave((2 * i - 1, matching.partner(2 * i - 1)),
                                         (2 * i, matching.partner(2 * i)))}
    G = 16
    while True:
        net = _graph_from(matching, conductance, *_arrangement_for(matching, G, spikes))
        if all(net.degree(i) == 1 for i in want) or G >= 4096:
            return net
        G *= 4


def _graph_from(matching, conductance, arr, K, term_ticks):
    n = matching.n
    parity = lambda v: sum(1 for s in v if s > 0) % 2
    term_vec = {i: arr.boundary_vector(t) for i, t in term_ticks.items()}
    shade = parity(term_vec[1])
    seen = {}
    for i, v in term_vec.items():
        if v in seen:
            raise InconsistentMatchingError(
                f"matching identifies terminals {seen[v]} and {i} (shorted boundary)"
            )
        if parity(v) != shade:
            raise InconsistentMatchingError("terminal faces do not share a colour")
        seen[v] = i
    node_of = dict((v, i) for i, v in term_vec.items())
    points = {v: [circle_point(term_ticks[i], K)] for i, v in term_vec.items()}
    incid = {}
    raw_edges = []
    for (i, j) in sorted(arr.crossings):
        x, quad = arr.quadrants(i, j)
        shaded = [v for v in quad.values() if parity(v) == shade]
        u, w = shaded
        raw_edges.append((u, w, x))
        for v in (u, w):
            points.setdefault(v, []).append(x)
    interior = sorted(v for v in points if v not in node_of)
    for k, v in enumerate(interior):
        node_of[v] = n + 1 + k
    edges = []
    seen_pairs = set()
    for u, w, x in raw_edges:
        a, b = node_of[u], node_of[w]
        key = (min(a, b), max(a, b))
        if key in seen_pairs:
            raise InconsistentMatchingError("two faces meet at two crossings (non-critical matching)")
        seen_pairs.add(key)
        edges.append((a, b, conductance))
        incid.setdefault(u, []).append((b, x))
        incid.setdefault(w, []).append((a, x))
    rotation = {}
    for v, pts in points.items():
        fl = [as_float(p) for p in pts]
        centre = (sum(p[0] for p in fl) / len(fl), sum(p[1] for p in fl) / len(fl))
        ref = None
        if node_of[v] <= n:
            tp = fl[0]
            ref = math.atan2(tp[1] - centre[1], tp[0] - centre[0])
        rotation[node_of[v]] = tuple(clockwise_sort(centre, incid.get(v, []), ref))
    return Network(range(1, n + 1), range(n + 1, n + 1 + len(interior)), edges, rotation)


# -- bridge verification ----------------------------------------------------------
@dataclass(frozen=True)
class BridgeCheck:
    verified: bool
    checked: int = 0
    blocked: Optional[CircularPair] = None


def verify_bridge(m, order, candidate, decomposition=None, arith=None):
    """Check that collapsing the candidate to a cut vertex would block no connection.

    For every circular pair whose paths each stay within one side of the
    split and which has paths on both sides, positive side minors must come
    with a positive combined minor. The decomposition is accepted for API
    symmetry; the family depends only on the split.
    """
    arith = arith or arith_for(m)
    order = as_order(order, m.labels)
    m = m.in_mode(arith)
    side = candidate.side
    family = []
    parts = []
    for pr in enumerate_circular_pairs(order):
        if pr.k < 2:
            continue
        same = [(p in side) == (q in side) for p, q in zip(pr.p, pr.q)]
        if not all(same):
            continue
        ins = [(p in side) for p in pr.p]
        if all(ins) or not any(ins):
            continue
        pa = CircularPair(*map(tuple, zip(*[(p, q) for p, q, s in zip(pr.p, pr.q, ins) if s])))
        pb = CircularPair(*map(tuple, zip(*[(p, q) for p, q, s in zip(pr.p, pr.q, ins) if not s])))
        family.append(pr)
        parts.append((pa, pb))
    table = minor_table(m, family + [x for ab in parts for x in ab], arith)
    for pr, (pa, pb) in zip(family, parts):
        if table[pa][0] > 0 and table[pb][0] > 0 and table[pr][0] <= 0:
            return BridgeCheck(False, len(family), pr)
    return BridgeCheck(True, len(family), None)


# -- pieces and plan ---------------------------------------------------------------
def blob_terminals(blob, order):
    """Own terminals plus one representative per branch, in circular order."""
    reps = blob.representatives()
    return tuple(sorted(reps, key=order.position))


def blob_submatrix(w, blob, order=None):
    """Restriction of W to the blob's terminals, relabelled 1..k; returns (matrix, mapping)."""
    order = as_order(order, w.labels)
    terms = blob_terminals(blob, order)
    sub = w.restrict(terms)
    return sub.relabel(range(1, len(terms) + 1)), dict(enumerate(terms, 1))


@dataclass
class Piece:
    """A bridge-free part reconstructed in one Curtis-Morrow pass."""

    index: int
    nodes: tuple  # split-tree nodes covered
    blobs: tuple  # blob indices inside
    terminals: tuple  # original labels in circular order
    representatives: dict  # rep label -> tree edge index it stands for
    anchored: frozenset = frozenset()  # reps placed at the far end of their edge
    matrix: Optional[SquareMatrix] = None  # response matrix on 1..k
    matching: Optional[StrandMatching] = None
    graph: Optional[Network] = None


@dataclass
class ReconstructionPlan:
    order: CircularOrder
    system: object
    decomposition: object
    bridge_checks: dict = field(default_factory=dict)  # split key -> BridgeCheck
    pieces: list = field(default_factory=list)
    tree_edges: list = field(default_factory=list)  # (u, v, split, conductance or UNKNOWN)
    network: Optional[Network] = None
    notes: list = field(default_factory=list)

    @property
    def verified_bridges(self):
        return [s for s in self.decomposition.bridge_candidates
                if self.bridge_checks.get(s.key, BridgeCheck(False)).verified]


@dataclass(frozen=True)
class PipelineConfig:
    arith: Arith = EXACT
    order: Optional[tuple] = None
    max_n: int = 10
    planarity_max_n: int = 12
    max_orders: int = 50
    use_resistance_for_blobs: bool = True


def _pieces(decomp, checks):
    """Group split-tree nodes into pieces joined by non-bridge edges touching blobs."""
    blob_nodes = {b.node for b in decomp.blobs}
    parent = {v: v for v in decomp.clusters}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cut = []
    for idx, (c, p, s) in enumerate(decomp.tree_edges):
        touches = c in blob_nodes or p in blob_nodes
        if not touches:
            cut.append(idx)
            continue
        ok = (not s.is_trivial) and checks.get(s.key, BridgeCheck(False)).verified
        if ok:
            cut.append(idx)
        else:
            parent[find(c)] = find(p)
    groups = {}
    for v in decomp.clusters:
        groups.setdefault(find(v), set()).add(v)
    pieces = [tuple(sorted(g)) for g in groups.values() if g & blob_nodes]
    return sorted(pieces), cut


def _far_side(decomp, edge_idx, piece_nodes):
    c, p, s = decomp.tree_edges[edge_idx]
    below = decomp.clusters[c]
    return decomp.system.taxa - below if c in piece_nodes else below


def plan_pieces(decomp, checks, order):
    pieces, cut = _pieces(decomp, checks)
    out = []
    blob_of_node = {b.node: b.index for b in decomp.blobs}
    for k, nodes in enumerate(pieces):
        nodes_set = set(nodes)
        own = set()
        for v in nodes:
            own |= decomp.tree_nodes[v]
        reps = {}
        anchored = set()
        for idx in cut:
            c, p, s = decomp.tree_edges[idx]
            if (c in nodes_set) != (p in nodes_set):
                near = decomp.tree_nodes[p if c in nodes_set else c]
                rep = min(near) if near else min(_far_side(decomp, idx, nodes_set))
                reps[rep] = idx
                if near:
                    anchored.add(rep)
        terms = tuple(sorted(own | set(reps), key=order.position))
        out.append(Piece(k, nodes, tuple(blob_of_node[v] for v in nodes if v in blob_of_node), terms, reps,
                         frozenset(anchored)))
    return out, cut


def reconstruct_piece(piece, m=None, w=None, arith=EXACT):
    """Kron-reduce onto the piece terminals and run the strand reconstruction."""
    k = len(piece.terminals)
    if w is not None:
        sub = w.in_mode(arith).restrict(piece.terminals).relabel(range(1, k + 1))
        resp = m_from_w(sub, arith, check=False)
    else:
        resp = schur_complement(m.in_mode(arith), piece.terminals).relabel(range(1, k + 1))
    piece.matrix = resp
    piece.matching = strand_matching_from_response(resp, None, arith)
    piece.graph = _piece_graph(piece)
    return piece


def _piece_graph(piece):
    """Graph with as many representatives on pendant edges as the matching allows.

    Unanchored representatives must end up pendant; anchored ones may instead
    stay put, in which case their bridge contracts onto them.
    """
    local = {lab: i for i, lab in enumerate(piece.terminals, 1)}
    must = [local[r] for r in piece.representatives if r not in piece.anchored]
    optional = [local[r] for r in piece.representatives if r in piece.anchored]
    g = None
    for size in range(len(optional), -1, -1):
        for extra in combinations(optional, size):
            spikes = must + list(extra)
            g = matching_to_graph(piece.matching, spikes=spikes)
            if all(g.degree(i) == 1 for i in spikes):
                return g
    return g


def reassemble(plan):
    """Glue piece graphs and tree edges into one network (blob edges unweighted).

    A representative on a pendant edge marks where its bridge attaches. An
    anchored representative left off a pendant edge is the attachment point
    itself; the bridge then contracts onto it.
    """
    decomp = plan.decomposition
    order = plan.order
    taxa = decomp.system.taxa
    in_piece = {}
    for pc in plan.pieces:
        for v in pc.nodes:
            in_piece[v] = pc
    next_id = [max(taxa) + 1]

    def fresh():
        nid = next_id[0]
        next_id[0] += 1
        return nid

    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return
        if rx in taxa and ry in taxa:
            raise AttachmentError(f"terminals {rx} and {ry} would be identified", [rx, ry])
        if ry in taxa or (rx not in taxa and ry < rx):
            rx, ry = ry, rx
        parent[ry] = rx

    node_id = {}
    for v in decomp.clusters:
        if v in in_piece:
            continue
        placed = decomp.tree_nodes[v]
        if len(placed) > 1:
            raise AttachmentError(f"terminals {sorted(placed)} share one tree node", sorted(placed))
        node_id[v] = next(iter(placed)) if placed else fresh()

    edges = []
    attach = {}  # (piece index, tree edge index) -> network node
    contracted = set()
    for pc in plan.pieces:
        g = pc.graph
        local = dict(enumerate(pc.terminals, 1))
        mapping = {v: (local[v] if v in local and local[v] not in pc.representatives else fresh())
                   for v in g.nodes}
        dropped = set()
        for v in g.boundary:
            lab = local[v]
            if lab not in pc.representatives:
                continue
            idx = pc.representatives[lab]
            nb = g.neighbors(v)
            if len(nb) == 1 and nb[0] not in dropped:
                attach[(pc.index, idx)] = mapping[nb[0]]
                dropped.add(v)
            elif lab in pc.anchored:
                attach[(pc.index, idx)] = mapping[v]
                contracted.add(idx)
            else:
                cands = [mapping[x] for x in nb]
                raise AttachmentError(
                    f"representative {lab} of piece {pc.index} has neighbours {cands}; "
                    "bridge attachment is ambiguous",
                    cands,
                )
        for (a, b), c in g.edges.items():
            if a not in dropped and b not in dropped:
                edges.append((mapping[a], mapping[b], UNKNOWN))

    tree_edges = []
    for idx, (c, p, s) in enumerate(decomp.tree_edges):
        if c in in_piece and p in in_piece and in_piece[c] is in_piece[p]:
            continue
        ends = [attach[(in_piece[v].index, idx)] if v in in_piece else node_id[v] for v in (c, p)]
        if idx in contracted:
            union(*ends)
            continue
        known = c not in in_piece and p not in in_piece
        cond = (Fraction(1) / s.weight if isinstance(s.weight, Fraction) else 1.0 / s.weight) if known else UNKNOWN
        tree_edges.append((ends[0], ends[1], s, cond))
        edges.append((ends[0], ends[1], cond))
    edges = [(find(a), find(b), c) for a, b, c in edges]
    plan.tree_edges = [(find(a), find(b), s, c) for a, b, s, c in tree_edges]
    used = sorted({x for a, b, _ in edges for x in (a, b)} - set(taxa))
    relabel = {old: new for new, old in enumerate(used, max(taxa) + 1)}
    rl = lambda x: relabel.get(x, x)
    edges = [(rl(a), rl(b), c) for a, b, c in edges]
    plan.tree_edges = [(rl(a), rl(b), s, c) for a, b, s, c in plan.tree_edges]
    plan.network = Network(tuple(order.seq), sorted(relabel.values()), edges)
    return plan.network


def _order_label(order):
    return " ".join(map(str, order.seq))


def _choose_order(m, w, cfg, given):
    arith = cfg.arith
    if given is not None:
        order = as_order(given)
        kv = is_kalmanson(w, order, arith)
        if not kv:
            raise PipelineError(2, "W is not Kalmanson for the given order", kv.witness)
        candidates = [order]
    else:
        res = find_circular_order(w, arith, cfg.max_n)
        if res.status == "none":
            kv = is_kalmanson(w, CircularOrder(sorted(w.labels)), arith)
            raise PipelineError(2, "W is not Kalmanson for any circular order", kv.witness)
        if res.status == "undetermined":
            raise PipelineError(2, "circular order undetermined (heuristic failed verification)")
        candidates = [res.order]
        if w.n <= cfg.max_n:
            more = consistent_orders(w, arith, cfg.max_orders)
            candidates += [o for o in more if o != res.order]
    first = None
    for order in candidates:
        verdict = is_circular_planar(m, order, arith, max_n=cfg.planarity_max_n)
        if verdict.planar:
            return order
        if first is None:
            first = verdict
    raise PipelineError(2, "response matrix is not circular planar", first.witness, first.value)


def _run(m, w, cfg, strict_step1):
    arith = cfg.arith
    m = m.in_mode(arith)
    rep = validate_response(m, arith)
    if not rep.valid:
        if strict_step1 or not rep.connected or not rep.sign_pattern:
            raise PipelineError(1, "not a valid weighted Laplacian: " + ", ".join(rep.reasons), detail=rep)
        warnings.warn("response matrix fails " + ", ".join(rep.reasons) + "; continuing with the paired W")
    if w is None:
        w = w_from_m(m, arith)
    else:
        w = w.in_mode(arith)
    order = _choose_order(m, w, cfg, cfg.order)
    try:
        system = split_decomposition(w, order, arith)
    except NotKalmansonError as exc:
        raise PipelineError(3, str(exc), exc.witness) from None
    decomp = decompose(system)
    plan = ReconstructionPlan(order, system, decomp)
    for s in decomp.bridge_candidates:
        plan.bridge_checks[s.key] = verify_bridge(m, order, s, decomp, arith)
    pieces, _ = plan_pieces(decomp, plan.bridge_checks, order)
    for pc in pieces:
        try:
            reconstruct_piece(pc, m=m, w=w if cfg.use_resistance_for_blobs else None, arith=arith)
        except (KronSplitError, ValueError) as exc:
            raise PipelineError(4, f"piece {pc.index} on {list(pc.terminals)}: {exc}") from None
    plan.pieces = pieces
    try:
        reassemble(plan)
    except AttachmentError as exc:
        raise PipelineError(5, str(exc), exc.candidates) from None
    return plan


def reconstruct_pipeline(m, config=None):
    """Steps 1-5 from a response matrix; raises PipelineError at the first failed gate."""
    return _run(m, None, config or PipelineConfig(), strict_step1=True)


def reconstruct_from(m, w, config=None):
    """Steps 2-5 from a paired measurement: W drives order and splits, M drives minors.

    A row-sum failure in M is downgraded to a warning; sign or connectivity
    failures still stop the run at Step 1.
    """
    return _run(m, w, config or PipelineConfig(), strict_step1=False)


# -- serialisation --------------------------------------------------------------------
def _w(x):
    return str(x) if isinstance(x, (Fraction, int)) else f"{float(x):.9g}"


def format_plan(plan):
    order = plan.order
    out = ["ORDER", "  " + _order_label(order), "SPLITS"]
    for s in plan.system:
        out.append(f"  {_w(s.weight)} {s.label(order)}")
    out.append("BRIDGES")
    for s in plan.decomposition.bridge_candidates:
        chk = plan.bridge_checks.get(s.key)
        status = "verified" if chk and chk.verified else "unverified"
        extra = f" blocked {chk.blocked}" if chk and chk.blocked else ""
        out.append(f"  {s.label(order)} weight {_w(s.weight)} {status} ({chk.checked if chk else 0} pairs){extra}")
    for pc in plan.pieces:
        out.append(f"BLOB {pc.index + 1}")
        out.append("  terminals " + " ".join(map(str, pc.terminals)))
        reps = " ".join(str(r) for r in sorted(pc.representatives, key=order.position))
        out.append("  representatives " + (reps or "-"))
        out.append("  matching " + (str(pc.matching) if pc.matching else "-"))
        if pc.graph is not None:
            local = dict(enumerate(pc.terminals, 1))
            for (a, b) in pc.graph.edges:
                la = local.get(a, f"v{a}")
                lb = local.get(b, f"v{b}")
                out.append(f"  edge {la} {lb}")
    out.append("TREE EDGES")
    for a, b, s, c in plan.tree_edges:
        out.append(f"  {a} {b} split {s.label(order)} conductance {'?' if c is UNKNOWN else _w(c)}")
    if plan.network is not None:
        net = plan.network
        out.append("NETWORK")
        out.append("  boundary " + " ".join(map(str, net.boundary)))
        out.append("  interior " + " ".join(map(str, net.interior)))
        for (a, b), c in net.edges.items():
            out.append(f"  edge {a} {b} {'?' if c is UNKNOWN else _w(c)}")
    return "\n".join(out) + "\n"


def network_dot(net):
    lines = ["graph network {", "  node [shape=circle];"]
    for b in net.boundary:
        lines.append(f'  {b} [shape=doublecircle, label="{b}"];')
    for v in net.interior:
        lines.append(f'  {v} [shape=point];')
    for (a, b), c in net.edges.items():
        lab = "?" if c is UNKNOWN else _w(c)
        lines.append(f'  {a} -- {b} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
