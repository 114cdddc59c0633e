"""Exact-rational and float matrix kernel.

Matrices hold either an object array of ``Fraction`` (exact mode) or a
float64 array (float mode). Rows and columns carry terminal labels so
submatrices can be addressed the way the networks name their nodes.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
import re

import numpy as np

from .errors import (
    DisconnectedError,
    ModeError,
    ParseError,
    SingularBlockError,
    SingularMatrixError,
)

ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class Arith:
    """Arithmetic mode for one pipeline run.

    ``tol`` is relative; zero tests compare against ``max(tol * scale, 1e-12)``.
    Exact mode ignores it.
    """

    exact: bool = True
    tol: float = 1e-6

    def threshold(self, scale=1.0):
        return max(self.tol * float(scale), ABS_FLOOR)

    def is_zero(self, x, scale=1.0):
        if self.exact:
            return x == 0
        return abs(float(x)) <= self.threshold(scale)

    def sign(self, x, scale=1.0):
        if self.is_zero(x, scale):
            return 0
        return 1 if x > 0 else -1

    def convert(self, x):
        return to_fraction(x) if self.exact else float(x)


EXACT = Arith(True)
FLOAT = Arith(False)


def arith_for(m, tol=None):
    """Arithmetic matching the storage mode of ``m``."""
    if m.exact:
        return EXACT
    return Arith(False, FLOAT.tol if tol is None else tol)


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational or decimal: {x!r}") from exc
    if isinstance(x, (float, np.floating)):
        # shortest repr gives the decimal the user most likely meant
        return Fraction(repr(float(x)))
    raise ModeError(f"cannot convert {type(x).__name__} to an exact rational")


def _as_array(data, exact):
    if exact:
        arr = np.empty(np.shape(data), dtype=object)
        src = np.asarray(data, dtype=object)
        for idx in np.ndindex(src.shape):
            arr[idx] = to_fraction(src[idx])
        return arr
    return np.array(np.asarray(data), dtype=np.float64)


class SquareMatrix:
    """Labelled square matrix in exact or float mode.

    Positional indexing (``m[i, j]``) goes straight to the array; label
    lookups use :meth:`entry` and :meth:`sub`.
    """

    __slots__ = ("data", "labels", "_index")

    def __init__(self, data, labels=None, exact=None):
        arr = np.asarray(data, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"matrix must be square, got shape {arr.shape}")
        if exact is None:
            # integers and Fractions select exact mode; any float selects float mode
            exact = all(isinstance(v, (Fraction, int, np.integer)) for v in arr.flat)
        self.data = _as_array(arr, exact)
        n = self.data.shape[0]
        self.labels = tuple(range(1, n + 1)) if labels is None else tuple(labels)
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("labels must be distinct and match the dimension")
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    # -- basic access ------------------------------------------------------
    @property
    def exact(self):
        return self.data.dtype == object

    @property
    def n(self):
        return self.data.shape[0]

    def __len__(self):
        return self.n

    def __getitem__(self, key):
        return self.data[key]

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no row labelled {label!r}") from None

    def entry(self, a, b):
        return self.data[self._index[a], self._index[b]]

    def sub(self, rows, cols):
        """Array of entries for the given row and column labels, in that order."""
        r = [self.index(x) for x in rows]
        c = [self.index(x) for x in cols]
        return self.data[np.ix_(r, c)]

    def restrict(self, labels):
        labels = tuple(labels)
        return SquareMatrix(self.sub(labels, labels), labels, exact=self.exact)

    def relabel(self, labels):
        return SquareMatrix(self.data.copy(), labels, exact=self.exact)

    def to_float(self):
        return SquareMatrix(self.data.astype(np.float64), self.labels, exact=False)

    def to_exact(self):
        return SquareMatrix(self.data, self.labels, exact=True)

    def in_mode(self, arith):
        if arith.exact == self.exact:
            return self
        return self.to_exact() if arith.exact else self.to_float()

    def tolist(self):
        return self.data.tolist()

    # -- comparisons -------------------------------------------------------
    def is_symmetric(self, tol=None):
        if self.exact:
            return bool((self.data == self.data.T).all())
        scale = float(np.abs(self.data).max()) if self.n else 0.0
        t = max((tol if tol is not None else FLOAT.tol) * scale, ABS_FLOOR)
        return bool(np.abs(self.data - self.data.T).max(initial=0.0) <= t)

    def equals(self, other, tol=None):
        """Label-aware equality; exact unless either side is float or ``tol`` is given."""
        if set(self.labels) != set(other.labels):
            return False
        o = other.sub(self.labels, self.labels)
        if self.exact and other.exact and tol is None:
            return bool((self.data == o).all())
        a = self.data.astype(np.float64)
        b = np.asarray(o, dtype=np.float64)
        t = FLOAT.tol if tol is None else tol
        scale = max(float(np.abs(a).max(initial=0.0)), 1.0)
        return bool(np.abs(a - b).max(initial=0.0) <= t * scale)

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.labels == other.labels and self.exact == other.exact and self.equals(other)

    __hash__ = None

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"SquareMatrix({mode}, labels={list(self.labels)})\n{format_matrix(self)}"


# -- determinants --------------------------------------------------------
def _bareiss(rows):
    """Fraction-free determinant of an integer matrix (list of lists)."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1] if n else 1


def det_exact(block):
    """Exact determinant of a 2-D array or nested list of rationals."""
    rows = [list(map(to_fraction, r)) for r in np.asarray(block, dtype=object).tolist()]
    if not rows:
        return Fraction(1)
    scale = 1
    ints = []
    for r in rows:
        den = lcm(*(x.denominator for x in r))
        ints.append([x.numerator * (den // x.denominator) for x in r])
        scale *= den
    return Fraction(_bareiss(ints), scale)


def determinant(m):
    """Determinant of a SquareMatrix or square array, in its own mode."""
    data = m.data if isinstance(m, SquareMatrix) else np.asarray(m)
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise ValueError("determinant needs a square matrix")
    if data.dtype == object:
        return det_exact(data)
    if data.shape[0] == 0:
        return 1.0
    return float(np.linalg.det(data))


# -- inverses and Schur complements ---------------------------------------
def _inverse_exact(block):
    a = [list(map(to_fraction, r)) for r in np.asarray(block, dtype=object).tolist()]
    n = len(a)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        inv[c], inv[p] = inv[p], inv[c]
        piv = a[c][c]
        if piv != 1:
            a[c] = [x / piv for x in a[c]]
            inv[c] = [x / piv for x in inv[c]]
        for r in range(n):
            f = a[r][c]
            if r != c and f != 0:
                ar, ac = a[r], a[c]
                ir, ic = inv[r], inv[c]
                for j in range(n):
                    if ac[j]:
                        ar[j] -= f * ac[j]
                    if ic[j]:
                        ir[j] -= f * ic[j]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = inv[i][j]
    return out


def _inverse_float(block, tol):
    a = np.asarray(block, dtype=np.float64)
    if a.size == 0:
        return a.copy()
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= max(tol * s[0], ABS_FLOOR):
        raise SingularMatrixError("matrix is numerically singular")
    return np.linalg.inv(a)


def inverse(m, tol=None):
    """Inverse in the matrix's own mode; raises SingularMatrixError."""
    if isinstance(m, SquareMatrix):
        data = _inverse_exact(m.data) if m.exact else _inverse_float(m.data, tol or 1e-13)
        return SquareMatrix(data, m.labels, exact=m.exact)
    arr = np.asarray(m)
    if arr.dtype == object:
        return _inverse_exact(arr)
    return _inverse_float(arr, tol or 1e-13)


def schur_complement(m, keep):
    """Kron reduction ``A - B C^-1 B^T`` onto the labels in ``keep``.

    Keeps the order given in ``keep``. Raises SingularBlockError naming the
    eliminated labels when their block is singular.
    """
    keep = tuple(keep)
    keep_set = set(keep)
    drop = tuple(x for x in m.labels if x not in keep_set)
    if not drop:
        return m.restrict(keep)
    a = m.sub(keep, keep)
    b = m.sub(keep, drop)
    bt = m.sub(drop, keep)
    c = m.sub(drop, drop)
    try:
        cinv = inverse(c)
    except SingularMatrixError:
        raise SingularBlockError(drop) from None
    if m.exact:
        out = a - b.dot(cinv).dot(bt)
    else:
        out = a - b @ cinv @ bt
    return SquareMatrix(out, keep, exact=m.exact)


def laplacian_pseudoinverse(x, tol=None):
    """Moore-Penrose pseudoinverse of a symmetric matrix with kernel span{1}.

    Computed as ``(X + J/n)^-1 - J/n``; ``X`` here is the positive
    semidefinite form (``-M`` for a response matrix).
    """
    n = x.n
    if n == 0:
        raise ValueError("empty matrix")
    ar = arith_for(x, tol)
    rs = x.data.sum(axis=1)
    scale = float(np.abs(x.data.astype(np.float64)).max(initial=0.0)) or 1.0
    if not all(ar.is_zero(v, n * scale) for v in rs):
        raise ValueError("rows must sum to zero (all-ones vector in the kernel)")
    if x.exact:
        jn = Fraction(1, n)
        shifted = x.data + jn
        try:
            inv = _inverse_exact(shifted)
        except SingularMatrixError:
            raise DisconnectedError("kernel is larger than span{1}: network is disconnected") from None
        return SquareMatrix(inv - jn, x.labels, exact=True)
    shifted = x.data + 1.0 / n
    ev = np.linalg.eigvalsh((shifted + shifted.T) / 2)
    if np.abs(ev).min() <= max(ar.tol * np.abs(ev).max(), ABS_FLOOR):
        raise DisconnectedError("kernel is larger than span{1}: network is disconnected")
    return SquareMatrix(np.linalg.inv(shifted) - 1.0 / n, x.labels, exact=False)


# -- text format -----------------------------------------------------------
_LABEL_RE = re.compile(r"#\s*labels?\s*:\s*(.*)$", re.IGNORECASE)


def _label(tok):
    return int(tok) if tok.lstrip("-").isdigit() else tok


def parse_matrix(text, exact=True):
    """Parse the matrix text format.

    First non-comment line is ``n``, then ``n`` rows of ``p/q`` or decimal
    entries. An optional ``# labels: ...`` comment names the rows.
    """
    labels = None
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            mt = _LABEL_RE.match(line)
            if mt:
                labels = [_label(t) for t in mt.group(1).split()]
            continue
        lines.append(line.split("#", 1)[0].split())
    if not lines:
        raise ParseError("empty matrix file")
    if len(lines[0]) != 1:
        raise ParseError("first line must hold the dimension n")
    try:
        n = int(lines[0][0])
    except ValueError:
        raise ParseError(f"bad dimension {lines[0][0]!r}") from None
    rows = lines[1:]
    if n < 1 or len(rows) != n or any(len(r) != n for r in rows):
        raise ParseError(f"expected {n} rows of {n} entries")
    if exact:
        data = [[to_fraction(t) for t in r] for r in rows]
    else:
        try:
            data = [[float(Fraction(t)) for t in r] for r in rows]
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc)) from None
    if labels is not None and len(labels) != n:
        raise ParseError("label count does not match n")
    return SquareMatrix(data, labels, exact=exact)


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def format_matrix(m):
    """Inverse of :func:`parse_matrix`; labels written only when not 1..n."""
    out = []
    if m.labels != tuple(range(1, m.n + 1)):
        out.append("# labels: " + " ".join(map(str, m.labels)))
    out.append(str(m.n))
    cells = [[_fmt(v) for v in row] for row in m.data.tolist()]
    width = max((len(c) for r in cells for c in r), default=1)
    for r in cells:
        out.append(" ".join(c.rjust(width) for c in r))
    return "\n".join(out) + "\n"


def read_matrix(path, exact=True):
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read(), exact=exact)
