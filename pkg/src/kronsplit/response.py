"""Response/resistance matrix validation and the M <-> W conversions."""
from dataclasses import dataclass, field
from fractions import Fraction
import warnings

import networkx as nx
import numpy as np

from .errors import DisconnectedError, NotResistanceMetricError
from .matkernel import SquareMatrix, arith_for, inverse, laplacian_pseudoinverse


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the weighted-Laplacian checks on a response matrix."""

    n: int
    symmetric: bool
    sign_pattern: bool
    zero_row_sums: bool
    connected: bool
    cut_points: dict = field(default_factory=dict)
    reasons: tuple = ()
    max_row_sum: float = 0.0

    @property
    def valid(self):
        return self.symmetric and self.sign_pattern and self.zero_row_sums and self.connected

    def __bool__(self):
        return self.valid


def kron_graph(m, arith=None):
    """The clique graph K(N): an edge wherever the off-diagonal entry is positive."""
    arith = arith or arith_for(m)
    scale = float(np.abs(m.data.astype(np.float64)).max(initial=0.0)) or 1.0
    g = nx.Graph()
    g.add_nodes_from(m.labels)
    for i, a in enumerate(m.labels):
        for j in range(i + 1, m.n):
            v = m.data[i, j]
            if v > 0 and not arith.is_zero(v, scale):
                g.add_edge(a, m.labels[j])
    return g


def validate_response(m, arith=None):
    """Symmetry, sign pattern, zero row sums and K(N) connectivity.

    Also lists boundary cut points of K(N) with the components they separate.
    """
    arith = arith or arith_for(m)
    m = m.in_mode(arith)
    n = m.n
    data = m.data
    scale = float(np.abs(data.astype(np.float64)).max(initial=0.0)) or 1.0
    reasons = []

    symmetric = m.is_symmetric(arith.tol)
    if not symmetric:
        reasons.append("symmetry")

    sign_ok = True
    for i in range(n):
        if data[i, i] > 0 and not arith.is_zero(data[i, i], scale):
            sign_ok = False
        for j in range(n):
            if i != j and data[i, j] < 0 and not arith.is_zero(data[i, j], scale):
                sign_ok = False
    if not sign_ok:
        reasons.append("sign pattern")

    sums = data.sum(axis=1)
    max_rs = float(np.abs(sums.astype(np.float64)).max(initial=0.0))
    rows_ok = all(arith.is_zero(s, n * scale) for s in sums)
    if not rows_ok:
        reasons.append("row sums")

    g = kron_graph(m, arith)
    connected = n > 0 and nx.is_connected(g)
    if not connected:
        reasons.append("disconnected")
    cuts = {}
    if connected and n > 2:
        for v in sorted(nx.articulation_points(g), key=m.labels.index):
            h = g.subgraph([x for x in m.labels if x != v])
            comps = sorted(
                (tuple(sorted(c, key=m.labels.index)) for c in nx.connected_components(h)),
                key=lambda c: m.labels.index(c[0]),
            )
            cuts[v] = tuple(comps)
    return ValidationReport(n, symmetric, sign_ok, rows_ok, connected, cuts, tuple(reasons), max_rs)


def symmetrize(m, arith=None):
    """Average ``M`` with its transpose in float mode, warning when that changes it."""
    arith = arith or arith_for(m)
    if m.exact:
        if not m.is_symmetric():
            raise ValueError("exact matrix is not symmetric")
        return m
    data = m.data.astype(np.float64)
    if not np.array_equal(data, data.T):
        gap = float(np.abs(data - data.T).max())
        warnings.warn(f"averaging M with its transpose (max asymmetry {gap:.3g})", stacklevel=2)
        data = (data + data.T) / 2
    return SquareMatrix(data, m.labels, exact=False)


def _resistance_from_pinv(xp):
    d = np.diag(xp.data)
    data = d[:, None] + d[None, :] - 2 * xp.data
    for i in range(data.shape[0]):
        data[i, i] = Fraction(0) if xp.exact else 0.0
    return SquareMatrix(data, xp.labels, exact=xp.exact)


def w_from_m(m, arith=None, check=True):
    """Resistance matrix ``W = X†_D J + J X†_D - 2 X†`` with ``X = -M``."""
    arith = arith or arith_for(m)
    m = symmetrize(m.in_mode(arith), arith)
    if check:
        rep = validate_response(m, arith)
        if not rep.connected:
            raise DisconnectedError("response matrix is disconnected")
        if not rep.valid:
            raise ValueError(f"not a valid response matrix: {', '.join(rep.reasons)}")
    neg = SquareMatrix(-m.data, m.labels, exact=m.exact)
    try:
        xp = laplacian_pseudoinverse(neg, arith.tol)
    except ValueError:
        if check:
            raise
        # rows do not sum to zero: a nonsingular X has X† = X^-1
        xp = inverse(neg, arith.tol)
    return _resistance_from_pinv(xp)


def m_from_w(w, arith=None, check=True):
    """Response matrix ``(½(W - (WJ+JW)/n + tr(WJ)/n² J))†``."""
    arith = arith or arith_for(w)
    w = symmetrize(w.in_mode(arith), arith)
    n = w.n
    data = w.data
    rows = data.sum(axis=1)
    total = rows.sum()
    if w.exact:
        y = (data - (rows[:, None] + rows[None, :]) / n + total / (n * n)) / 2
        y = np.vectorize(Fraction, otypes=[object])(y)
    else:
        y = (data - (rows[:, None] + rows[None, :]) / n + total / (n * n)) / 2
    try:
        m = laplacian_pseudoinverse(SquareMatrix(y, w.labels, exact=w.exact), arith.tol)
    except DisconnectedError:
        raise NotResistanceMetricError("not an electrical resistance metric (singular centring)") from None
    if check:
        rep = validate_response(m, arith)
        if not rep.valid:
            raise NotResistanceMetricError(
                "not an electrical resistance metric: " + ", ".join(rep.reasons)
            )
    return m


def restrict_resistance(w, subset):
    """Submatrix of ``W`` on ``subset``; labels kept in the order given."""
    subset = tuple(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    return w.restrict(subset)


def validate_resistance(w, arith=None):
    """Reasons ``W`` fails to be a metric with positive off-diagonal (empty when valid)."""
    arith = arith or arith_for(w)
    data = w.data
    n = w.n
    scale = float(np.abs(data.astype(np.float64)).max(initial=0.0)) or 1.0
    reasons = []
    if not w.is_symmetric(arith.tol):
        reasons.append("symmetry")
    if any(not arith.is_zero(data[i, i], scale) for i in range(n)):
        reasons.append("diagonal")
    if any(data[i, j] <= 0 or arith.is_zero(data[i, j], scale) for i in range(n) for j in range(n) if i != j):
        reasons.append("positivity")
    tri = True
    for i in range(n):
        for j in range(n):
            for k in range(n):
                gap = data[i, k] + data[k, j] - data[i, j]
                if gap < 0 and not arith.is_zero(gap, scale):
                    tri = False
    if not tri:
        reasons.append("triangle inequality")
    return tuple(reasons)
