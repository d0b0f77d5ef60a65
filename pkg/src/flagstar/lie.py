"""sl_n structure data, its Cartan involution, S(g), casimirs, and the Fischer pairing.

Elements of g are coordinate lists over the basis

    E_ij (i < j),  H_1 .. H_{n-1},  E_ij (i > j)

with H_k = E_kk - E_{k+1,k+1}.  Elements of S(g) are :class:`SymElement`,
keyed by sorted tuples of basis indices.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .linalg import mat_inverse
from .scalars import conj

__all__ = ["LieAlgebra", "SymElement", "sl"]

ZERO = mpq(0)
ONE = mpq(1)

Multiset = Tuple[int, ...]


class SymElement:
    """Element of the symmetric algebra S(g): sorted index tuple -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: Dict[Multiset, object] = {}
        for k, v in (terms or {}).items():
            if v:
                k = tuple(sorted(k))
                w = self.terms.get(k, ZERO) + v
                if w:
                    self.terms[k] = w
                else:
                    self.terms.pop(k, None)

    @classmethod
    def monomial(cls, indices, coef=ONE):
        return cls({tuple(sorted(indices)): coef})

    @classmethod
    def one(cls):
        return cls({(): ONE})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k, ZERO) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return _sym(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return _sym({k: c * v for k, v in self.terms.items() if c * v})

    def __mul__(self, other):
        if not isinstance(other, SymElement):
            return self.scale(other)
        out: Dict[Multiset, object] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                out[k] = out.get(k, ZERO) + v1 * v2
        return _sym({k: v for k, v in out.items() if v})

    def __eq__(self, other):
        if not isinstance(other, SymElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return sorted({len(k) for k in self.terms})

    def homogeneous_part(self, d):
        return _sym({k: v for k, v in self.terms.items() if len(k) == d})

    def __repr__(self):
        return f"SymElement({dict(sorted(self.terms.items()))})"


def _sym(terms):
    s = SymElement.__new__(SymElement)
    s.terms = terms
    return s


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]


class LieAlgebra:
    """sl_n over Q(i) with the real basis described in the module docstring."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("sl_n needs n >= 2")
        self.n = n
        pos = [(i, j) for i in range(n) for j in range(i + 1, n)]
        neg = [(j, i) for (i, j) in pos]
        self.labels: List[tuple] = (
            [("E", i, j) for (i, j) in pos] + [("H", k) for k in range(n - 1)] + [("E", i, j) for (i, j) in neg]
        )
        self.dim = len(self.labels)
        self.index = {lab: a for a, lab in enumerate(self.labels)}

    # -- naming ---------------------------------------------------------------
    def name(self, a: int) -> str:
        lab = self.labels[a]
        if lab[0] == "H":
            return f"H{lab[1] + 1}"
        i, j = lab[1] + 1, lab[2] + 1
        return f"E{i}{j}" if self.n < 10 else f"E{i}_{j}"

    @cached_property
    def names(self) -> List[str]:
        return [self.name(a) for a in range(self.dim)]

    def lookup(self, name: str) -> int:
        """Basis index from a name such as ``E12``, ``E_12``, ``E_1_2`` or ``H1``."""
        s = name.strip().upper().replace(" ", "")
        if s.startswith("H"):
            k = int(s[1:].lstrip("_")) - 1
            if not 0 <= k < self.n - 1:
                raise KeyError(name)
            return self.index[("H", k)]
        if s.startswith("E"):
            body = s[1:].lstrip("_")
            if "_" in body:
                i, j = (int(t) for t in body.split("_"))
            elif len(body) == 2:
                i, j = int(body[0]), int(body[1])
            else:
                raise KeyError(name)
            key = ("E", i - 1, j - 1)
            if key not in self.index:
                raise KeyError(name)
            return self.index[key]
        raise KeyError(name)

    # -- matrices -------------------------------------------------------------
    def basis_matrix(self, a: int):
        n = self.n
        m = [[ZERO] * n for _ in range(n)]
        lab = self.labels[a]
        if lab[0] == "E":
            m[lab[1]][lab[2]] = ONE
        else:
            k = lab[1]
            m[k][k] = ONE
            m[k + 1][k + 1] = -ONE
        return m

    def to_matrix(self, x: Sequence):
        n = self.n
        m = [[ZERO] * n for _ in range(n)]
        for a, c in enumerate(x):
            if not c:
                continue
            lab = self.labels[a]
            if lab[0] == "E":
                m[lab[1]][lab[2]] = m[lab[1]][lab[2]] + c
            else:
                k = lab[1]
                m[k][k] = m[k][k] + c
                m[k + 1][k + 1] = m[k + 1][k + 1] - c
        return m

    def from_matrix(self, m) -> List:
        n = self.n
        if sum((m[i][i] for i in range(n)), ZERO) != 0:
            raise ValueError("matrix is not trace free")
        x = [ZERO] * self.dim
        for a, lab in enumerate(self.labels):
            if lab[0] == "E":
                x[a] = m[lab[1]][lab[2]]
        running = ZERO
        for k in range(n - 1):
            running = running + m[k][k]
            x[self.index[("H", k)]] = running
        return x

    def unit(self, a: int) -> List:
        x = [ZERO] * self.dim
        x[a] = ONE
        return x

    # -- structure --------------------------------------------------------------
    @cached_property
    def structure_constants(self) -> Dict[Tuple[int, int], Dict[int, object]]:
        """(a, b) -> {c: coefficient} for [x_a, x_b], nonzero brackets only."""
        mats = [self.basis_matrix(a) for a in range(self.dim)]
        out = {}
        for a in range(self.dim):
            for b in range(self.dim):
                ab = _matmul(mats[a], mats[b])
                ba = _matmul(mats[b], mats[a])
                comm = [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]
                coords = self.from_matrix(comm)
                nz = {c: v for c, v in enumerate(coords) if v}
                if nz:
                    out[(a, b)] = nz
        return out

    def bracket_basis(self, a: int, b: int) -> Dict[int, object]:
        return self.structure_constants.get((a, b), {})

    def bracket(self, x: Sequence, y: Sequence) -> List:
        out = [ZERO] * self.dim
        sc = self.structure_constants
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for c, v in sc.get((a, b), {}).items():
                    out[c] = out[c] + xa * yb * v
        return out

    def cartan_involution(self, x: Sequence) -> List:
        """sigma(x) = -conj(x)^T."""
        m = self.to_matrix(x)
        n = self.n
        return self.from_matrix([[-conj(m[j][i]) for j in range(n)] for i in range(n)])

    @cached_property
    def sigma_basis(self) -> List[Tuple[int, object]]:
        """sigma(x_a) = sign * x_b for the real basis; list of (b, sign)."""
        out = []
        for a in range(self.dim):
            s = self.cartan_involution(self.unit(a))
            nz = [(b, v) for b, v in enumerate(s) if v]
            assert len(nz) == 1, "sigma must permute the basis up to sign"
            out.append(nz[0])
        return out

    def trace_form(self, x: Sequence, y: Sequence):
        mx, my = self.to_matrix(x), self.to_matrix(y)
        n = self.n
        return sum((mx[i][k] * my[k][i] for i in range(n) for k in range(n)), ZERO)

    @cached_property
    def killing_matrix(self):
        """tr(x_a x_b) on the basis."""
        return [[self.trace_form(self.unit(a), self.unit(b)) for b in range(self.dim)] for a in range(self.dim)]

    @cached_property
    def fischer_metric(self):
        """G[a][b] = d_{x_a}(x_b) = -(sigma(x_a), x_b)."""
        return [
            [-self.trace_form(self.cartan_involution(self.unit(a)), self.unit(b)) for b in range(self.dim)]
            for a in range(self.dim)
        ]

    # -- symmetric algebra --------------------------------------------------------
    def sym_basis(self, d: int) -> List[Multiset]:
        return list(combinations_with_replacement(range(self.dim), d))

    def ad_sym(self, a: int, f: SymElement) -> SymElement:
        """Adjoint action of x_a on S(g), extended as a derivation."""
        sc = self.structure_constants
        out: Dict[Multiset, object] = {}
        for mono, v in f.terms.items():
            for pos, b in enumerate(mono):
                if pos and mono[pos - 1] == b:
                    continue
                mult = mono.count(b)
                rest = mono[:pos] + mono[pos + 1:]
                for c, s in sc.get((a, b), {}).items():
                    k = tuple(sorted(rest + (c,)))
                    out[k] = out.get(k, ZERO) + v * s * mult
        return SymElement(out)

    def sigma_sym(self, f: SymElement) -> SymElement:
        """Anti-linear algebra automorphism of S(g) extending sigma."""
        sb = self.sigma_basis
        out = {}
        for mono, v in f.terms.items():
            c = conj(v)
            k = []
            for a in mono:
                b, s = sb[a]
                c = c * s
                k.append(b)
            k = tuple(sorted(k))
            out[k] = out.get(k, ZERO) + c
        return SymElement(out)

    @cached_property
    def dual_basis(self) -> List[List]:
        """x^a with tr(x^a x_b) = delta_ab, as coordinate lists."""
        inv = mat_inverse(self.killing_matrix)
        return [[inv[b][a] for b in range(self.dim)] for a in range(self.dim)]

    @cached_property
    def casimirs(self) -> List[SymElement]:
        """Polarized power traces tr(x^k), k = 2..n, as elements of S^k(g)."""
        n = self.n
        # Y = sum_a t_a x^a with t_a the S(g) generator x_a
        Y = [[SymElement() for _ in range(n)] for _ in range(n)]
        for a in range(self.dim):
            m = self.to_matrix(self.dual_basis[a])
            gen = SymElement.monomial((a,))
            for i in range(n):
                for j in range(n):
                    if m[i][j]:
                        Y[i][j] = Y[i][j] + gen.scale(m[i][j])
        out = []
        power = Y
        for k in range(2, n + 1):
            power = [
                [sum((power[i][l] * Y[l][j] for l in range(n)), SymElement()) for j in range(n)] for i in range(n)
            ]
            out.append(sum((power[i][i] for i in range(n)), SymElement()))
        return out

    def invariant_basis(self, d: int) -> List[SymElement]:
        """Products of casimirs of total degree d (a basis of S^d(g)^g for sl_n)."""
        cas = self.casimirs
        degs = [2 + i for i in range(len(cas))]
        out = []

        def rec(i, remaining, acc):
            if remaining == 0:
                out.append(acc)
                return
            if i == len(cas):
                return
            e = 0
            cur = acc
            while e * degs[i] <= remaining:
                rec(i + 1, remaining - e * degs[i], cur)
                cur = cur * cas[i]
                e += 1

        rec(0, d, SymElement.one())
        return out

    # -- Fischer pairing ------------------------------------------------------------
    def sym_derivative(self, b: int, f: SymElement) -> SymElement:
        """d_{x_b} f with d_{x_b}(x_a) = G[b][a]."""
        row = self.fischer_metric[b]
        out: Dict[Multiset, object] = {}
        for mono, v in f.terms.items():
            seen = set()
            for pos, a in enumerate(mono):
                if a in seen or not row[a]:
                    continue
                seen.add(a)
                mult = mono.count(a)
                k = mono[:pos] + mono[pos + 1:]
                out[k] = out.get(k, ZERO) + v * row[a] * mult
        return SymElement({k: v for k, v in out.items() if v})

    def fischer_pair(self, f: SymElement, g: SymElement):
        """bh(f, g) = d_g(f): linear in f, anti-linear in g."""
        total = ZERO
        for mono, c in g.terms.items():
            h = f.homogeneous_part(len(mono))
            for b in mono:
                if not h:
                    break
                h = self.sym_derivative(b, h)
            if h:
                total = total + conj(c) * h.terms.get((), ZERO)
        return total

    def fischer_monomial_pair(self, m1: Multiset, m2: Multiset):
        return self.fischer_pair(SymElement.monomial(m1), SymElement.monomial(m2))


_CACHE: Dict[int, LieAlgebra] = {}


def sl(n: int) -> LieAlgebra:
    if n not in _CACHE:
        _CACHE[n] = LieAlgebra(n)
    return _CACHE[n]
