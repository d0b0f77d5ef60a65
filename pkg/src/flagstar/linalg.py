"""Exact linear algebra over Q(i).

Two flavours: :class:`SpanBasis` is an incremental sparse echelon form over
dict-vectors (used for bases of polynomial and operator spaces), and the
``mat_*`` helpers work on small dense matrices stored as lists of rows.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Sequence

from gmpy2 import mpq

from .polynomials import grlex_key
from .scalars import conj

__all__ = [
    "NotInSpan",
    "SpanBasis",
    "identity",
    "ldl_hermitian",
    "mat_add",
    "mat_conj",
    "mat_ct",
    "mat_inverse",
    "mat_mul",
    "mat_rank",
    "mat_scale",
    "mat_sub",
    "mat_t",
    "mat_vec",
    "nullspace",
    "rref",
    "solve",
    "zeros",
]

ZERO = mpq(0)
ONE = mpq(1)


class NotInSpan(ValueError):
    """Vector is not in the span of the basis."""


def _pivot_key(k):
    if isinstance(k, tuple) and all(isinstance(e, int) for e in k):
        return (0, grlex_key(k))
    return (1, k)


class SpanBasis:
    """Incremental echelon form remembering how each row came from the generators.

    ``add`` accepts a sparse vector (dict key -> scalar).  If the vector is
    independent of what came before it becomes generator number
    ``len(self)``; coordinates returned by :meth:`coords` are with respect to
    the accepted generators, in acceptance order.
    """

    def __init__(self):
        self._rows: List[tuple] = []  # (pivot, row dict, transform dict)
        self._pivots: Dict[Hashable, int] = {}
        self.ngens = 0

    def __len__(self):
        return self.ngens

    def reduce(self, vec: Dict):
        """Return (remainder, coefficients) with vec = remainder + sum c_g gen_g."""
        v = {k: c for k, c in vec.items() if c}
        coeffs: Dict[int, object] = {}
        for pivot, row, tr in self._rows:
            c = v.get(pivot)
            if not c:
                continue
            for k, x in row.items():
                w = v.get(k, ZERO) - c * x
                if w:
                    v[k] = w
                else:
                    v.pop(k, None)
            for g, t in tr.items():
                w = coeffs.get(g, ZERO) + c * t
                if w:
                    coeffs[g] = w
                else:
                    coeffs.pop(g, None)
        return v, coeffs

    def add(self, vec: Dict) -> Optional[int]:
        rem, coeffs = self.reduce(vec)
        if not rem:
            return None
        g = self.ngens
        self.ngens += 1
        pivot = max(rem, key=_pivot_key)
        inv = 1 / rem[pivot]
        row = {k: x * inv for k, x in rem.items()}
        # rem = vec - sum coeffs*gen  =>  row = (gen_g - sum coeffs*gen) * inv
        tr = {h: -c * inv for h, c in coeffs.items()}
        tr[g] = inv
        self._pivots[pivot] = len(self._rows)
        self._rows.append((pivot, row, tr))
        return g

    def contains(self, vec: Dict) -> bool:
        return not self.reduce(vec)[0]

    def coords(self, vec: Dict) -> List:
        rem, coeffs = self.reduce(vec)
        if rem:
            raise NotInSpan(f"vector has {len(rem)} components outside the span")
        out = [ZERO] * self.ngens
        for g, c in coeffs.items():
            out[g] = c
        return out


# -- dense helpers ----------------------------------------------------------


def zeros(r, c):
    return [[ZERO] * c for _ in range(r)]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    if not a:
        return []
    nb = len(b[0]) if b else 0
    out = []
    bt = list(zip(*b)) if b else []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum((x * bt[j][k] for k, x in nz), ZERO) for j in range(nb)])
    return out


def mat_vec(a, v):
    return [sum((x * v[k] for k, x in enumerate(row) if x), ZERO) for row in a]


def mat_t(a):
    return [list(r) for r in zip(*a)] if a else []


def mat_conj(a):
    return [[conj(x) for x in r] for r in a]


def mat_ct(a):
    return mat_t(mat_conj(a))


def mat_add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in r] for r in a]


def rref(a):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def mat_rank(a):
    return len(rref(a)[1]) if a else 0


def nullspace(a, ncols=None):
    """Basis (list of vectors) of {x : a x = 0}."""
    if not a:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    n = len(a[0])
    m, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for i, pc in enumerate(pivots):
            x[pc] = -m[i][f]
        basis.append(x)
    return basis


def solve(a, b):
    """Solve a x = b (b a list of right-hand-side columns given as a matrix).

    Returns x with one column per column of b; raises NotInSpan if
    inconsistent.  Free variables are set to zero.
    """
    n = len(a[0]) if a else 0
    k = len(b[0]) if b else 0
    aug = [list(r) + list(s) for r, s in zip(a, b)]
    m, pivots = rref(aug)
    for row, pc in zip(m, pivots):
        if pc >= n:
            raise NotInSpan("inconsistent linear system")
    x = zeros(n, k)
    for row, pc in zip(m, pivots):
        x[pc] = row[n:]
    return x


def mat_inverse(a):
    n = len(a)
    x = solve(a, identity(n))
    if mat_rank(a) != n:
        raise ZeroDivisionError("singular matrix")
    return x


def ldl_hermitian(a):
    """LDL* of a hermitian matrix without pivoting.

    Returns (L, pivots) with L unit lower triangular and pivots the diagonal of
    D.  Stops at the first zero pivot (the remaining entries are absent).
    """
    n = len(a)
    L = identity(n)
    d: List = []
    for j in range(n):
        s = a[j][j]
        for k in range(j):
            if L[j][k]:
                s -= L[j][k] * d[k] * conj(L[j][k])
        d.append(s)
        if not s:
            return L, d
        for i in range(j + 1, n):
            t = a[i][j]
            for k in range(j):
                if L[i][k] and L[j][k]:
                    t -= L[i][k] * d[k] * conj(L[j][k])
            L[i][j] = t / s
    return L, d


def is_hermitian(a) -> bool:
    n = len(a)
    return all(a[i][j] == conj(a[j][i]) for i in range(n) for j in range(i, n))


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v) if x and y), ZERO)
