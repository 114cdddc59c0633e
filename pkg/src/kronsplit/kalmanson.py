"""Kalmanson metrics, circular order search and weighted circular split systems."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from ._kernels import kalmanson_scan
from .circular import CircularOrder, as_order
from .errors import NotKalmansonError, ParseError
from .matkernel import SquareMatrix, arith_for, to_fraction


@dataclass(frozen=True)
class WeightedSplit:
    """Bipartition of ``taxa`` stored by the part avoiding the smallest taxon."""

    side: frozenset
    taxa: frozenset
    weight: object = Fraction(1)

    def __post_init__(self):
        side = frozenset(self.side)
        taxa = frozenset(self.taxa)
        if not side or not side < taxa:
            raise ValueError("both parts of a split must be nonempty")
        if min(taxa) in side:
            side = taxa - side
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "taxa", taxa)

    @classmethod
    def of(cls, part, taxa, weight=Fraction(1)):
        return cls(frozenset(part), frozenset(taxa), weight)

    @property
    def key(self):
        return (self.side, self.taxa)

    @property
    def rest(self):
        return self.taxa - self.side

    @property
    def parts(self):
        return self.rest, self.side

    @property
    def is_trivial(self):
        return min(len(self.side), len(self.rest)) == 1

    def separates(self, a, b):
        return (a in self.side) != (b in self.side)

    def part_of(self, label):
        return self.side if label in self.side else self.rest

    def same_split(self, other):
        return self.key == other.key

    def label(self, order=None):
        """``A|B`` text with each part listed in circular order (or sorted)."""
        key = order.position if order is not None else (lambda x: x)
        a = sorted(self.rest, key=key)
        b = sorted(self.side, key=key)
        return "{" + ",".join(map(str, b)) + "}|{" + ",".join(map(str, a)) + "}"

    def __str__(self):
        return f"{self.label()} w={self.weight}"


class WeightedSplitSystem:
    """Splits with positive weights, each displayable as an arc of ``order``."""

    def __init__(self, splits, order):
        self.order = as_order(order)
        taxa = frozenset(self.order)
        seen = {}
        for s in splits:
            if s.taxa != taxa:
                raise ValueError("split taxa differ from the order's labels")
            if not self.order.is_arc(s.side):
                raise ValueError(f"split {s.label()} is not circular for {self.order}")
            if s.key in seen:
                raise ValueError(f"duplicate split {s.label()}")
            seen[s.key] = s
        self.splits = tuple(sorted(seen.values(), key=self._sort_key))
        self._by_side = {s.side: s for s in self.splits}

    def _sort_key(self, s):
        pos = sorted(self.order.position(x) for x in s.side)
        return (len(s.side), pos)

    @property
    def taxa(self):
        return frozenset(self.order)

    def __len__(self):
        return len(self.splits)

    def __iter__(self):
        return iter(self.splits)

    def get(self, part):
        """Split with ``part`` as one side, or None."""
        part = frozenset(part)
        return self._by_side.get(part) or self._by_side.get(self.taxa - part)

    def weight(self, part):
        s = self.get(part)
        return s.weight if s is not None else 0

    def trivial(self):
        return [s for s in self.splits if s.is_trivial]

    def nontrivial(self):
        return [s for s in self.splits if not s.is_trivial]

    def __eq__(self, other):
        if not isinstance(other, WeightedSplitSystem):
            return NotImplemented
        return self.order == other.order and {s.key: s.weight for s in self} == {
            s.key: s.weight for s in other
        }

    __hash__ = None

    def __repr__(self):
        return f"WeightedSplitSystem({len(self.splits)} splits, order={list(self.order.seq)})"


# -- Kalmanson test -------------------------------------------------------------
@dataclass(frozen=True)
class KalmansonVerdict:
    ok: bool
    witness: Optional[tuple] = None
    slack: object = None

    def __bool__(self):
        return self.ok


def _scale(w):
    return float(np.abs(w.data.astype(np.float64)).max(initial=0.0)) or 1.0


def is_kalmanson(w, order=None, arith=None):
    """Both quadruple inequalities for every 4-subset in circular order.

    The witness is the first violating quadruple in lexicographic position
    order (exact mode) or the worst one (float mode).
    """
    order = as_order(order, w.labels)
    arith = arith or arith_for(w)
    w = w.in_mode(arith)
    idx = [w.index(x) for x in order]
    if arith.exact:
        d = w.data
        for a, b, c, e in combinations(range(len(idx)), 4):
            i, j, k, l = idx[a], idx[b], idx[c], idx[e]
            cross = d[i, k] + d[j, l]
            s = min(cross - d[i, j] - d[k, l], cross - d[j, k] - d[i, l])
            if s < 0:
                return KalmansonVerdict(False, tuple(order[t] for t in (a, b, c, e)), s)
        return KalmansonVerdict(True)
    slack, quad = kalmanson_scan(w.data, np.array(idx))
    if slack < -arith.threshold(_scale(w)):
        return KalmansonVerdict(False, tuple(order[int(t)] for t in quad), float(slack))
    return KalmansonVerdict(True, None, float(slack) if np.isfinite(slack) else None)


# -- split decomposition --------------------------------------------------------
def arc_split_weights(w, order=None):
    """Closed-form weight of every arc split (one entry per bipartition)."""
    order = as_order(order, w.labels)
    n = order.n
    d = w.data
    pos = [w.index(x) for x in order]
    half = Fraction(1, 2) if w.exact else 0.5
    p0 = order.position(min(order))
    taxa = frozenset(order)
    out = []
    for length in range(1, n):
        for s in range(1, n - length + 1):
            i = (p0 + s) % n
            j = (i + length - 1) % n
            a, b = pos[(i - 1) % n], pos[i]
            c, e = pos[j], pos[(j + 1) % n]
            wt = half * (d[a, c] + d[b, e] - d[a, e] - d[b, c])
            out.append((WeightedSplit(frozenset(order.arc(i, length)), taxa, wt), wt))
    return out


def split_decomposition(w, order=None, arith=None):
    """The unique weighted circular split system whose split metric is ``w``."""
    order = as_order(order, w.labels)
    arith = arith or arith_for(w)
    w = w.in_mode(arith)
    scale = _scale(w)
    splits = []
    for s, wt in arc_split_weights(w, order):
        if arith.is_zero(wt, scale):
            continue
        if wt < 0:
            raise NotKalmansonError(
                f"negative weight {wt} on split {s.label(order)}: not Kalmanson for this order",
                witness=s,
            )
        splits.append(WeightedSplit(s.side, s.taxa, wt))
    return WeightedSplitSystem(splits, order)


def split_metric(system, labels=None):
    """``d(i,j)`` = total weight of splits separating ``i`` and ``j``."""
    labels = tuple(labels) if labels is not None else tuple(sorted(system.taxa))
    n = len(labels)
    exact = all(isinstance(s.weight, (Fraction, int)) for s in system)
    zero = Fraction(0) if exact else 0.0
    data = np.full((n, n), zero, dtype=object if exact else np.float64)
    for s in system:
        for i in range(n):
            for j in range(i + 1, n):
                if s.separates(labels[i], labels[j]):
                    data[i, j] += s.weight
                    data[j, i] += s.weight
    return SquareMatrix(data, labels, exact=exact)


# -- order search ------------------------------------------------------------
@dataclass(frozen=True)
class OrderSearchResult:
    status: str  # "found", "none" or "undetermined"
    order: Optional[CircularOrder] = None
    explored: int = 0

    def __bool__(self):
        return self.status == "found"


def _entries(w, arith):
    w = w.in_mode(arith)
    if arith.exact:
        return w.data.tolist(), Fraction(0)
    return w.data.tolist(), arith.threshold(_scale(w))


def _dfs_orders(w, arith, limit=1):
    """Lexicographic DFS over sequences starting at the smallest label."""
    d, thr = _entries(w, arith)
    labels = sorted(w.labels)
    li = {x: w.index(x) for x in labels}
    n = len(labels)
    found = []
    explored = 0
    seq = [li[labels[0]]]
    used = {labels[0]}

    def ok(x):
        for a, b, c in combinations(range(len(seq)), 3):
            i, j, k = seq[a], seq[b], seq[c]
            cross = d[i][k] + d[j][x]
            if cross - d[i][j] - d[k][x] < -thr or cross - d[j][k] - d[i][x] < -thr:
                return False
        return True

    def rec():
        nonlocal explored
        explored += 1
        if len(seq) == n:
            # keep one direction of each reflection pair
            if w.labels[seq[1]] < w.labels[seq[-1]]:
                found.append(tuple(w.labels[t] for t in seq))
            return len(found) >= limit
        for x in labels:
            if x in used:
                continue
            xi = li[x]
            if len(seq) >= 3 and not ok(xi):
                continue
            seq.append(xi)
            used.add(x)
            stop = rec()
            used.discard(x)
            seq.pop()
            if stop:
                return True
        return False

    rec()
    return found, explored


def _greedy_order(w, arith):
    """Insertion heuristic: place each label where the partial order stays most Kalmanson."""
    labels = sorted(w.labels)
    wf = w.to_float()
    seq = labels[:3]
    for x in labels[3:]:
        best = None
        for at in range(1, len(seq) + 1):
            cand = seq[:at] + [x] + seq[at:]
            sub = wf.restrict(cand)
            slack, _ = kalmanson_scan(sub.data, np.arange(len(cand)))
            if best is None or slack > best[0]:
                best = (slack, cand)
        seq = best[1]
    return CircularOrder(seq)


def find_circular_order(w, arith=None, max_exhaustive=10):
    """A canonical circular order under which ``w`` is Kalmanson.

    Exhaustive branch-and-bound up to ``max_exhaustive`` labels; above that a
    greedy proposal is verified and an unverified one reported as undetermined.
    """
    arith = arith or arith_for(w)
    n = w.n
    if n <= 3:
        return OrderSearchResult("found", CircularOrder(sorted(w.labels)).canonicalized(), 1)
    if n <= max_exhaustive:
        found, explored = _dfs_orders(w, arith, limit=1)
        if found:
            return OrderSearchResult("found", CircularOrder(found[0]), explored)
        return OrderSearchResult("none", None, explored)
    cand = _greedy_order(w, arith)
    if is_kalmanson(w, cand, arith):
        return OrderSearchResult("found", cand.canonicalized(), 0)
    return OrderSearchResult("undetermined", None, 0)


def consistent_orders(w, arith=None, limit=1000):
    """All canonical orders (up to ``limit``) under which ``w`` is Kalmanson."""
    arith = arith or arith_for(w)
    if w.n <= 3:
        return [CircularOrder(sorted(w.labels)).canonicalized()]
    found, _ = _dfs_orders(w, arith, limit=limit)
    return [CircularOrder(s) for s in found]


def count_consistent_orders(w, arith=None, limit=1000):
    return len(consistent_orders(w, arith, limit))


# -- text format -------------------------------------------------------------
def format_split_system(system):
    out = ["# order: " + " ".join(map(str, system.order.seq))]
    for s in system:
        a = sorted(s.side, key=system.order.position)
        b = sorted(s.rest, key=system.order.position)
        out.append(f"{s.weight} " + " ".join(map(str, a)) + " | " + " ".join(map(str, b)))
    return "\n".join(out) + "\n"


def parse_split_system(text, exact=True):
    order = None
    splits = []
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("order:"):
                order = [int(t) for t in body.split(":", 1)[1].split()]
            continue
        if "|" not in line:
            raise ParseError(f"split line needs '|': {line!r}")
        left, right = line.split("|", 1)
        toks = left.split()
        if not toks:
            raise ParseError(f"missing weight: {line!r}")
        wt = to_fraction(toks[0]) if exact else float(Fraction(toks[0]))
        rows.append((wt, [int(t) for t in toks[1:]], [int(t) for t in right.split()]))
    if order is None:
        raise ParseError("missing '# order:' header")
    taxa = frozenset(order)
    for wt, a, b in rows:
        if frozenset(a) | frozenset(b) != taxa or set(a) & set(b):
            raise ParseError("split parts must partition the order's labels")
        splits.append(WeightedSplit(frozenset(a), taxa, wt))
    return WeightedSplitSystem(splits, order)
