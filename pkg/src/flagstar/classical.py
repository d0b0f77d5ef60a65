"""The graded Poisson algebra R of momentum symbols.

R^d is spanned by the degree-d products of the mu^x.  A basis is chosen
greedily among sorted mu-monomials, so every basis vector remembers the
multiset of g-indices it came from.  S^d(g) -> R^d (x -> mu^x) gives the
ideal I^d as a kernel and the harmonic space H^d as its Fischer complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .flag import FlagModel, ModelError
from .lie import SymElement
from .linalg import NotInSpan, SpanBasis, mat_rank, nullspace
from .polynomials import PolyZP
from .scalars import conj

__all__ = [
    "GradedBasisR",
    "IdealData",
    "alpha",
    "bar",
    "build_basis_R",
    "dims_table",
    "ideal_and_harmonics",
    "poisson",
    "sigma_R",
]

ZERO = mpq(0)
ONE = mpq(1)


def poisson(a: PolyZP, b: PolyZP) -> PolyZP:
    """sum_i (da/dp_i db/dz_i - da/dz_i db/dp_i)."""
    a._check(b)
    out = PolyZP.zero(a.m)
    for i in range(a.m):
        out = out + a.diff_p(i) * b.diff_z(i) - a.diff_z(i) * b.diff_p(i)
    return out


def alpha(a: PolyZP) -> PolyZP:
    return a.alpha()


def bar(a: PolyZP) -> PolyZP:
    return a.bar()


@dataclass
class GradedBasisR:
    """Bases of R^0..R^D by greedy selection among mu-monomials."""

    model: FlagModel
    D: int
    elements: List[List[PolyZP]] = field(default_factory=list)
    monomials: List[List[Tuple[int, ...]]] = field(default_factory=list)
    spans: List[SpanBasis] = field(default_factory=list)
    products: Dict[Tuple[int, ...], PolyZP] = field(default_factory=dict)

    def dim(self, d: int) -> int:
        return len(self.elements[d])

    def product(self, multiset: Sequence[int]) -> PolyZP:
        key = tuple(sorted(multiset))
        hit = self.products.get(key)
        if hit is None:
            hit = self.product(key[:-1]) * self.model.mu[key[-1]] if key else PolyZP.constant(self.model.m, 1)
            self.products[key] = hit
        return hit

    def coords(self, phi: PolyZP, d: int) -> List:
        if d < 0 or d > self.D:
            if phi.is_zero():
                return []
            raise ValueError(f"degree {d} outside 0..{self.D}")
        if phi.homogeneous_degree() != d and not phi.is_zero():
            raise NotInSpan(f"polynomial is not homogeneous of degree {d}")
        return self.spans[d].coords(phi.terms)

    def element(self, d: int, vec: Sequence) -> PolyZP:
        out = PolyZP.zero(self.model.m)
        for c, e in zip(vec, self.elements[d]):
            if c:
                out = out + e.scale(c)
        return out

    def degree_of(self, phi: PolyZP) -> int:
        d = phi.homogeneous_degree()
        if d is None:
            raise ValueError("polynomial is not homogeneous in p")
        return d


def build_basis_R(model: FlagModel, D: int) -> GradedBasisR:
    basis = GradedBasisR(model, D)
    g = model.g
    for d in range(D + 1):
        span = SpanBasis()
        elems, monos = [], []
        for mono in g.sym_basis(d):
            poly = basis.product(mono)
            if span.add(poly.terms) is not None:
                elems.append(poly)
                monos.append(mono)
        basis.elements.append(elems)
        basis.monomials.append(monos)
        basis.spans.append(span)
    return basis


def sigma_R(phi: PolyZP, basis: GradedBasisR) -> PolyZP:
    """Anti-linear algebra involution induced by mu^x -> mu^sigma(x)."""
    g = basis.model.g
    out = PolyZP.zero(basis.model.m)
    for d, part in phi.p_degree_split():
        vec = basis.coords(part, d)
        for c, mono in zip(vec, basis.monomials[d]):
            if not c:
                continue
            img = g.sigma_sym(SymElement.monomial(mono))
            for m2, s in img.terms.items():
                out = out + basis.product(m2).scale(conj(c) * s)
    return out


@dataclass
class IdealData:
    """I^d and H^d inside S^d(g), as coordinate vectors over g.sym_basis(d)."""

    d: int
    monomials: List[Tuple[int, ...]]
    substitution: List[List]  # columns: coords in R^d of each monomial
    ideal: List[List]
    harmonic: List[List]

    def ideal_elements(self) -> List[SymElement]:
        return [_to_sym(v, self.monomials) for v in self.ideal]

    def harmonic_elements(self) -> List[SymElement]:
        return [_to_sym(v, self.monomials) for v in self.harmonic]


def _to_sym(vec, monos) -> SymElement:
    return SymElement({m: c for m, c in zip(monos, vec) if c})


def ideal_and_harmonics(d: int, basis: GradedBasisR) -> IdealData:
    g = basis.model.g
    monos = g.sym_basis(d)
    cols = [basis.coords(basis.product(m), d) for m in monos]
    rows = [[col[i] for col in cols] for i in range(basis.dim(d))]
    ideal = nullspace(rows, ncols=len(monos))
    # H^d = {h : bh(h, i) = 0 for i in I^d}
    cons = []
    for vec in ideal:
        target = _to_sym(vec, monos)
        cons.append([g.fischer_pair(SymElement.monomial(m), target) for m in monos])
    harmonic = nullspace(cons, ncols=len(monos))
    if len(harmonic) != basis.dim(d):
        raise ModelError("substitution is not injective on the harmonic space")
    sub_h = [[sum((col[i] * h[k] for k, col in enumerate(cols) if h[k]), ZERO) for h in harmonic]
             for i in range(basis.dim(d))]
    if mat_rank(sub_h) != basis.dim(d):
        raise ModelError("substitution is not injective on the harmonic space")
    return IdealData(d, monos, cols, ideal, harmonic)


def casimir_ideal_span(d: int, g) -> List[SymElement]:
    """Degree-d part of the ideal generated by the casimirs."""
    out = []
    for k, c in zip(range(2, g.n + 1), g.casimirs):
        if k > d:
            continue
        for mono in g.sym_basis(d - k):
            out.append(c * SymElement.monomial(mono))
    return out


def dims_table(basis: GradedBasisR, ideals: Sequence[IdealData]) -> List[Tuple[int, int, int, int]]:
    """Rows (d, dim S^d, dim I^d, dim R^d)."""
    return [(data.d, len(data.monomials), len(data.ideal), basis.dim(data.d)) for data in ideals]
