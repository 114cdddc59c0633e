"""Circular orders, circular pairs and circular minors."""
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Optional

import numpy as np

from ._kernels import batch_minors
from .errors import SizeGuardError
from .matkernel import arith_for, det_exact


class CircularOrder:
    """Cyclic sequence of terminal labels; equal up to rotation and reflection."""

    __slots__ = ("seq", "_pos")

    def __init__(self, seq):
        self.seq = tuple(seq)
        if len(set(self.seq)) != len(self.seq):
            raise ValueError("circular order has repeated labels")
        self._pos = {x: i for i, x in enumerate(self.seq)}

    @classmethod
    def counting(cls, n):
        return cls(range(1, n + 1))

    @property
    def n(self):
        return len(self.seq)

    def __len__(self):
        return len(self.seq)

    def __iter__(self):
        return iter(self.seq)

    def __getitem__(self, i):
        return self.seq[i % len(self.seq)]

    def __contains__(self, x):
        return x in self._pos

    def position(self, label):
        return self._pos[label]

    def canonical(self):
        """Rotation starting at the smallest label, direction with seq[1] < seq[-1]."""
        n = len(self.seq)
        if n == 0:
            return ()
        s = min(range(n), key=lambda i: self.seq[i])
        fwd = tuple(self.seq[(s + t) % n] for t in range(n))
        if n < 3:
            return fwd
        rev = (fwd[0],) + tuple(reversed(fwd[1:]))
        return min(fwd, rev)

    def canonicalized(self):
        return CircularOrder(self.canonical())

    def reflected(self):
        return CircularOrder(reversed(self.seq))

    def rotated(self, k):
        n = len(self.seq)
        return CircularOrder(self.seq[(i + k) % n] for i in range(n))

    def arc(self, start, length):
        """Labels at positions start, start+1, ..., start+length-1 (mod n)."""
        n = len(self.seq)
        return tuple(self.seq[(start + t) % n] for t in range(length))

    def is_arc(self, subset):
        """True iff ``subset`` occupies consecutive positions."""
        sub = set(subset)
        n = len(self.seq)
        if not sub or len(sub) == n:
            return bool(sub)
        inside = [x in sub for x in self.seq]
        # a contiguous arc has exactly one entry point going clockwise
        return sum(1 for i in range(n) if inside[i] and not inside[i - 1]) == 1

    def __eq__(self, other):
        if not isinstance(other, CircularOrder):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"CircularOrder({list(self.seq)})"


def as_order(order, labels=None):
    if order is None:
        return CircularOrder(labels)
    return order if isinstance(order, CircularOrder) else CircularOrder(order)


class CircularPair(NamedTuple):
    p: tuple
    q: tuple

    @property
    def k(self):
        return len(self.p)

    def transpose(self):
        """The pair whose minor is the transpose minor (Q reversed; P reversed)."""
        return CircularPair(tuple(reversed(self.q)), tuple(reversed(self.p)))

    def swapped(self):
        return CircularPair(self.q, self.p)

    def __str__(self):
        return "(" + ",".join(map(str, self.p)) + ";" + ",".join(map(str, self.q)) + ")"


def parse_pair(text):
    """Parse ``(1,3;5,4)`` into a CircularPair."""
    body = text.strip().strip("()")
    left, right = body.split(";")
    conv = lambda s: tuple(int(t) for t in s.replace(",", " ").split())
    return CircularPair(conv(left), conv(right))


def is_circular_pair(p, q, order):
    order = as_order(order)
    p, q = tuple(p), tuple(q)
    if not p or len(p) != len(q):
        return False
    seq = p + tuple(reversed(q))
    if len(set(seq)) != len(seq) or any(x not in order for x in seq):
        return False
    pos = [order.position(x) for x in seq]
    # a cyclic sequence respecting the order descends exactly once around the loop
    drops = sum(1 for i in range(len(pos)) if pos[i] < pos[i - 1])
    return drops == 1 or len(pos) == 1


def enumerate_circular_pairs(order, max_k=None, min_k=1):
    """Every circular pair once, sizes ascending.

    For each 2k-subset in circular order and each of its 2k rotations the
    first k labels form P and the last k reversed form Q.
    """
    order = as_order(order)
    n = order.n
    top = n // 2 if max_k is None else min(max_k, n // 2)
    for k in range(min_k, top + 1):
        for sub in combinations(order.seq, 2 * k):
            for r in range(2 * k):
                seq = sub[r:] + sub[:r]
                yield CircularPair(seq[:k], tuple(reversed(seq[k:])))


def circular_minor(m, pair):
    """Determinant of rows P, columns Q (no sign correction)."""
    block = m.sub(pair.p, pair.q)
    if m.exact:
        return det_exact(block)
    return float(np.linalg.det(np.asarray(block, dtype=np.float64)))


def _hadamard(block):
    b = np.asarray(block, dtype=np.float64)
    return float(np.prod(np.sqrt((b * b).sum(axis=1))))


def minor_sign(m, pair, arith=None):
    """Sign of a circular minor; float zero test is relative to the Hadamard bound."""
    arith = arith or arith_for(m)
    val = circular_minor(m, pair)
    if arith.exact:
        return (val > 0) - (val < 0), val
    return arith.sign(val, _hadamard(m.sub(pair.p, pair.q))), val


def minor_table(m, pairs, arith=None):
    """Map each pair to ``(sign, value)``; float mode runs through the batched kernel."""
    arith = arith or arith_for(m)
    pairs = list(pairs)
    out = {}
    if m.exact:
        cache = {}
        sym = m.is_symmetric()
        for pr in pairs:
            # transposed pairs share a minor when M is symmetric
            key = pr if not sym or pr.p <= tuple(reversed(pr.q)) else pr.transpose()
            if key not in cache:
                v = circular_minor(m, key)
                cache[key] = ((v > 0) - (v < 0), v)
            out[pr] = cache[key]
        return out
    a = m.data.astype(np.float64)
    by_k = {}
    for pr in pairs:
        by_k.setdefault(pr.k, []).append(pr)
    for k, group in by_k.items():
        rows = np.array([[m.index(x) for x in pr.p] for pr in group], dtype=np.int64)
        cols = np.array([[m.index(x) for x in pr.q] for pr in group], dtype=np.int64)
        dets, scales = batch_minors(a, rows, cols)
        for pr, d, s in zip(group, dets, scales):
            out[pr] = (arith.sign(d, s), float(d))
    return out


@dataclass(frozen=True)
class PlanarityVerdict:
    planar: bool
    witness: Optional[CircularPair] = None
    value: object = None
    checked: int = 0

    def __bool__(self):
        return self.planar


def is_circular_planar(m, order=None, arith=None, max_n=12, max_k=None):
    """Check that every circular minor is non-negative.

    Scans sizes in ascending order and stops at the first negative minor,
    which is therefore a witness of minimal size.
    """
    order = as_order(order, m.labels)
    arith = arith or arith_for(m)
    if order.n > max_n:
        raise SizeGuardError(f"n={order.n} exceeds the planarity bound {max_n}")
    m = m.in_mode(arith)
    checked = 0
    top = order.n // 2 if max_k is None else max_k
    for k in range(1, top + 1):
        group = list(enumerate_circular_pairs(order, k, k))
        table = minor_table(m, group, arith)
        for pr in group:
            checked += 1
            sign, val = table[pr]
            if sign < 0:
                return PlanarityVerdict(False, pr, val, checked)
    return PlanarityVerdict(True, None, None, checked)


def positive_pairs(m, order=None, arith=None, max_k=None):
    """All circular pairs (every orientation) whose minor is strictly positive."""
    order = as_order(order, m.labels)
    arith = arith or arith_for(m)
    m = m.in_mode(arith)
    table = minor_table(m, enumerate_circular_pairs(order, max_k), arith)
    return frozenset(pr for pr, (sign, _) in table.items() if sign > 0)


def format_pair(pair):
    return str(pair)


__all__ = [
    "CircularOrder",
    "CircularPair",
    "PlanarityVerdict",
    "as_order",
    "circular_minor",
    "enumerate_circular_pairs",
    "is_circular_pair",
    "is_circular_planar",
    "minor_sign",
    "minor_table",
    "parse_pair",
    "positive_pairs",
]
