"""Filtered model of the operator algebra D spanned by eta-words.

The basis of D_{<=d} consists of the sorted eta-words whose multisets index
the basis of R^k, k <= d; the symbol of such a word is the matching basis
vector of R^k.  Spanning is certified by reducing every sorted word of
length <= d, and the relations found on the way (elements of J) are used to
check that sigma is well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from gmpy2 import mpq

from .classical import GradedBasisR
from .flag import FlagModel, ModelError
from .linalg import SpanBasis, nullspace
from .scalars import conj
from .weyl import WeylOperator, commutator, symbol, transpose

__all__ = ["FilteredBasisD", "ad_action", "build_basis_D", "sigma_D", "sigma_word"]

ZERO = mpq(0)


@dataclass
class FilteredBasisD:
    model: FlagModel
    D: int
    words: List[Tuple[int, ...]] = field(default_factory=list)
    degree_start: List[int] = field(default_factory=list)  # index of the first word of each degree
    span: SpanBasis = field(default_factory=SpanBasis)
    relations: List[Tuple[Tuple[int, ...], List]] = field(default_factory=list)
    sorted_word_rank: List[int] = field(default_factory=list)

    def dim(self, d: int) -> int:
        """dim D_{<=d}."""
        d = min(d, self.D)
        return self.degree_start[d + 1] if d + 1 < len(self.degree_start) else len(self.words)

    def degree(self, i: int) -> int:
        return len(self.words[i])

    def indices_of_degree(self, d: int) -> range:
        return range(self.degree_start[d], self.dim(d))

    def operator(self, i: int) -> WeylOperator:
        return self.model.word(self.words[i])

    def coords(self, A: WeylOperator) -> List:
        return self.span.coords(A.terms)

    def contains(self, A: WeylOperator) -> bool:
        return self.span.contains(A.terms)

    def combine(self, vec: Sequence) -> WeylOperator:
        out = WeylOperator.zero(self.model.m)
        for c, w in zip(vec, self.words):
            if c:
                out = out + self.model.word(w).scale(c)
        return out


def build_basis_D(model: FlagModel, R: GradedBasisR, D: int = None) -> FilteredBasisD:
    D = R.D if D is None else D
    basis = FilteredBasisD(model, D)
    for d in range(D + 1):
        basis.degree_start.append(len(basis.words))
        for mono in R.monomials[d]:
            if basis.span.add(model.word(mono).terms) is None:
                raise ModelError(f"eta-word {mono} is dependent on lower words")
            basis.words.append(mono)
        if len(basis.words) != sum(R.dim(k) for k in range(d + 1)):
            raise ModelError("dim D_{<=d} differs from the graded dimension of R")
    # spanning: every sorted word of length <= D reduces to zero
    g = model.g
    chosen = set(basis.words)
    for d in range(D + 1):
        for mono in g.sym_basis(d):
            if mono in chosen:
                continue
            rem, coeffs = basis.span.reduce(model.word(mono).terms)
            if rem:
                raise ModelError(f"sorted word {mono} lies outside the chosen span")
            basis.relations.append((mono, [coeffs.get(k, ZERO) for k in range(len(basis.words))]))
        basis.sorted_word_rank.append(basis.dim(d))
    return basis


def sigma_word(model: FlagModel, word: Sequence[int]) -> WeylOperator:
    """sigma(eta^{a1}...eta^{ak}) = eta^{sigma(a1)}...eta^{sigma(ak)}."""
    sb = model.g.sigma_basis
    sign = mpq(1)
    img = []
    for a in word:
        b, s = sb[a]
        sign *= s
        img.append(b)
    return model.word(img).scale(sign)


def sigma_matrix(basis: FilteredBasisD, d: int = None) -> List[List]:
    """Columns: coordinates of sigma(word_j) for j in D_{<=d}."""
    n = basis.dim(basis.D if d is None else d)
    cols = [basis.coords(sigma_word(basis.model, basis.words[j]))[:n] for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def sigma_D(A: WeylOperator, basis: FilteredBasisD) -> WeylOperator:
    """Anti-linear involution of D defined on eta-words."""
    vec = basis.coords(A)
    out = WeylOperator.zero(basis.model.m)
    for c, w in zip(vec, basis.words):
        if c:
            out = out + sigma_word(basis.model, w).scale(conj(c))
    return out


def sigma_consistent(basis: FilteredBasisD) -> bool:
    """sigma respects every relation word = sum c_k basis_k found while spanning."""
    model = basis.model
    for mono, coeffs in basis.relations:
        lhs = sigma_word(model, mono)
        rhs = WeylOperator.zero(model.m)
        for c, w in zip(coeffs, basis.words):
            if c:
                rhs = rhs + sigma_word(model, w).scale(conj(c))
        if lhs != rhs:
            return False
    return True


def ad_action(model: FlagModel, x: int, A: WeylOperator) -> WeylOperator:
    return commutator(model.eta[x], A)


def ad_matrix(basis: FilteredBasisD, x: int, d: int) -> List[List]:
    n = basis.dim(d)
    cols = [basis.coords(ad_action(basis.model, x, basis.operator(j)))[:n] for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def invariants(basis: FilteredBasisD, d: int) -> List[List]:
    """Kernel of the stacked ad-matrices on D_{<=d}."""
    stacked = []
    for x in range(basis.model.g.dim):
        stacked += ad_matrix(basis, x, d)
    return nullspace(stacked, ncols=basis.dim(d))


def transpose_preserves(basis: FilteredBasisD, d: int) -> bool:
    """transpose maps D_{<=d} into itself and acts as (-1)^k on degree-k symbols."""
    n = basis.dim(d)
    for i in range(basis.dim(d)):
        A = basis.operator(i)
        At = transpose(A)
        if not basis.contains(At) or any(basis.coords(At)[n:]):
            return False
        k = basis.degree(i)
        s = symbol(A, k)
        if symbol(At, k) != (s if k % 2 == 0 else -s):
            return False
    return True


def bar_preserves(basis: FilteredBasisD, d: int) -> bool:
    return all(basis.contains(basis.operator(i).bar()) for i in range(basis.dim(d)))
