"""The invariant trace on D, computed two ways.

``trace_T`` is the defining characterization: A - c is a sum of commutators
[eta^x, B] inside D_{<=d}.  It only needs big-cell operators, but the
commutator span grows quickly with d.

:class:`WordTrace` computes tau(u) = T(image of u) for words u in U(g).
Since T kills [g, U], tau(s(f)) only depends on the projection of f in S(g)
onto the invariants, taken orthogonally for the Fischer pairing; on an
invariant c the value is the scalar by which the symmetrized image of c acts.
Words are turned into symmetric tensors by the left multiplication rule

    s^-1(x s(f)) = sum_n B_n/n! sum_{a_1..a_n} [x_a1,[...,[x_an, x]]] d_a1...d_an f

with Bernoulli numbers B_1 = -1/2, B_2 = 1/6, ...
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .dmodule import FilteredBasisD, ad_action
from .flag import FlagModel, ModelError
from .lie import SymElement
from .linalg import SpanBasis, mat_inverse, mat_t, mat_vec
from .scalars import conj
from .weyl import WeylOperator

__all__ = ["CommutatorTrace", "WordTrace", "bernoulli", "trace_T"]

ZERO = mpq(0)
ONE = mpq(1)

Mono = Tuple[int, ...]


@lru_cache(maxsize=None)
def bernoulli(n: int) -> mpq:
    """B_n with B_1 = -1/2."""
    b = [mpq(1)]
    for k in range(1, n + 1):
        b.append(-sum((mpq(factorial(k + 1), factorial(j) * factorial(k + 1 - j)) * b[j] for j in range(k)), ZERO)
                 / (k + 1))
    return b[n]


class CommutatorTrace:
    """T on D_{<=d} via the complement sum_x [eta^x, D_{<=d}] of the constants."""

    def __init__(self, basis: FilteredBasisD):
        self.basis = basis
        self._spans: Dict[int, Tuple[SpanBasis, dict]] = {}

    def _span(self, d: int):
        if d not in self._spans:
            span = SpanBasis()
            model = self.basis.model
            for x in range(model.g.dim):
                for j in range(self.basis.dim(d)):
                    span.add(ad_action(model, x, self.basis.operator(j)).terms)
            rem_one, _ = span.reduce(WeylOperator.constant(model.m, 1).terms)
            if not rem_one:
                raise ModelError("the constant 1 is a sum of commutators")
            self._spans[d] = (span, rem_one)
        return self._spans[d]

    def __call__(self, A: WeylOperator, d: int = None):
        if d is None:
            vec = self.basis.coords(A)
            nz = [self.basis.degree(i) for i, c in enumerate(vec) if c]
            d = max(nz, default=0)
        span, rem_one = self._span(d)
        rem, _ = span.reduce(A.terms)
        if not rem:
            return ZERO
        key = next(iter(rem_one))
        c = rem.get(key, ZERO) / rem_one[key]
        if any(rem.get(k, ZERO) != c * v for k, v in rem_one.items()) or any(k not in rem_one for k in rem):
            raise ModelError("operator is not a constant modulo commutators")
        return c


def trace_T(A: WeylOperator, basis: FilteredBasisD, d: int = None):
    """Unique c with A - c in the span of [eta^x, D_{<=d}]."""
    return CommutatorTrace(basis)(A, d)


def _generating_values(model: FlagModel, k: int) -> Dict[Mono, object]:
    """[t^alpha] of ((sum_a t_a eta^a)^k 1)(0), keyed by sorted index tuples."""
    m = model.m
    g = model.g
    pieces = []
    for a in range(g.dim):
        eta = model.eta[a]
        terms = []
        for key, c in eta.terms.items():
            zexp, dexp = key[:m], key[m:]
            i = next((j for j, e in enumerate(dexp) if e), None)
            terms.append((zexp, i, c))
        pieces.append(terms)
    state: Dict[Tuple[Mono, Mono], object] = {((0,) * m, ()): ONE}
    for step in range(k):
        cap = k - step - 1
        nxt: Dict[Tuple[Mono, Mono], object] = {}
        for (zexp, tmono), v in state.items():
            for a, terms in enumerate(pieces):
                tm = tuple(sorted(tmono + (a,)))
                for cz, i, c in terms:
                    if i is None:
                        ze = tuple(x + y for x, y in zip(zexp, cz))
                        coef = c * v
                    else:
                        e = zexp[i]
                        if not e:
                            continue
                        ze = tuple(x + y - (1 if j == i else 0) for j, (x, y) in enumerate(zip(zexp, cz)))
                        coef = c * v * e
                    if sum(ze) > cap:
                        continue
                    key = (ze, tm)
                    w = nxt.get(key, ZERO) + coef
                    if w:
                        nxt[key] = w
                    else:
                        nxt.pop(key, None)
        state = nxt
    zero = (0,) * m
    return {tm: v for (ze, tm), v in state.items() if ze == zero}


def _multifactorial(mono: Mono) -> int:
    out = 1
    run = 1
    for i in range(1, len(mono) + 1):
        if i < len(mono) and mono[i] == mono[i - 1]:
            run += 1
        else:
            out *= factorial(run)
            run = 1
    return out


class WordTrace:
    """tau on U(g) for a flag model, with memoized left multiplication."""

    def __init__(self, model: FlagModel):
        self.model = model
        self.g = model.g
        self._ell: Dict[Mono, object] = {(): ONE}
        self._ell_vectors: Dict[int, SymElement] = {}
        self._W: Dict[Tuple[int, Mono], Dict[int, object]] = {}
        self._L: Dict[Tuple[int, Mono], Dict[Mono, object]] = {}
        self._cov: Dict[Tuple[Mono, Mono], object] = {}
        self._sinv: Dict[Mono, Dict[Mono, object]] = {(): {(): ONE}}
        self.central_values: Dict[int, List] = {}

    # -- invariants and their scalars --------------------------------------------
    def central_character(self, c: SymElement):
        """Scalar by which the symmetrized image of an invariant acts."""
        k = max(c.degrees(), default=0)
        if k == 0:
            return c.terms.get((), ZERO)
        raw = _generating_values(self.model, k)
        total = ZERO
        fk = factorial(k)
        for mono, coef in c.terms.items():
            v = raw.get(mono)
            if v:
                total = total + coef * v * mpq(_multifactorial(mono), fk)
        return total

    def _ell_vector(self, k: int) -> SymElement:
        """g_k with ell(f) = bh(f, g_k) on S^k."""
        if k not in self._ell_vectors:
            inv = self.g.invariant_basis(k) if k >= 2 else []
            if not inv:
                self._ell_vectors[k] = SymElement()
            else:
                chi = [self.central_character(c) for c in inv]
                self.central_values[k] = chi
                gram = [[self.g.fischer_pair(cj, ci) for cj in inv] for ci in inv]
                w = mat_vec(mat_t(mat_inverse(gram)), chi)
                vec = SymElement()
                for wi, ci in zip(w, inv):
                    vec = vec + ci.scale(conj(wi))
                self._ell_vectors[k] = vec
        return self._ell_vectors[k]

    def ell(self, mono: Mono):
        """tau(s(x^mono))."""
        hit = self._ell.get(mono)
        if hit is None:
            vec = self._ell_vector(len(mono))
            hit = ZERO
            if vec:
                hit = self.g.fischer_pair(SymElement.monomial(mono), vec)
            self._ell[mono] = hit
        return hit

    # -- left multiplication ----------------------------------------------------
    def _nest(self, a: int, nu: Mono) -> Dict[int, object]:
        """Sum over orderings (b_1..b_n) of nu of [x_b1,[...,[x_bn, x_a]]]."""
        key = (a, nu)
        hit = self._W.get(key)
        if hit is not None:
            return hit
        if not nu:
            out = {a: ONE}
        else:
            out: Dict[int, object] = {}
            for pos, b in enumerate(nu):
                if pos and nu[pos - 1] == b:
                    continue
                inner = self._nest(a, nu[:pos] + nu[pos + 1:])
                for c, v in inner.items():
                    for e, s in self.g.bracket_basis(b, c).items():
                        out[e] = out.get(e, ZERO) + v * s
            out = {e: v for e, v in out.items() if v}
        self._W[key] = out
        return out

    def left(self, a: int, mono: Mono) -> Dict[Mono, object]:
        """s^-1(x_a s(x^mono)) as a map monomial -> coefficient."""
        key = (a, mono)
        hit = self._L.get(key)
        if hit is not None:
            return hit
        out: Dict[Mono, object] = {tuple(sorted(mono + (a,))): ONE}
        for n in range(1, len(mono) + 1):
            bn = bernoulli(n)
            if not bn:
                continue
            scale = bn / factorial(n)
            for nu in _sub_multisets(mono, n):
                w = self._nest(a, nu)
                if not w:
                    continue
                rest, weight = _remove(mono, nu)
                for c, v in w.items():
                    k = tuple(sorted(rest + (c,)))
                    out[k] = out.get(k, ZERO) + scale * weight * v
        out = {k: v for k, v in out.items() if v}
        self._L[key] = out
        return out

    def symmetric_of_word(self, word: Sequence[int], coef=ONE) -> Dict[Mono, object]:
        """s^-1 of the product x_w1 x_w2 ... x_wk in U(g)."""
        word = tuple(word)
        hit = self._sinv.get(word)
        if hit is None:
            tail = self.symmetric_of_word(word[1:])
            out: Dict[Mono, object] = {}
            for mono, v in tail.items():
                for k, c in self.left(word[0], mono).items():
                    out[k] = out.get(k, ZERO) + v * c
            hit = {k: v for k, v in out.items() if v}
            self._sinv[word] = hit
        if coef == ONE:
            return hit
        return {k: coef * v for k, v in hit.items()}

    # -- covectors --------------------------------------------------------------
    def covector(self, word: Mono, mono: Mono):
        """tau(x_word * s(x^mono))."""
        key = (word, mono)
        hit = self._cov.get(key)
        if hit is not None:
            return hit
        if not word:
            hit = self.ell(mono)
        else:
            head, last = word[:-1], word[-1]
            hit = ZERO
            for m2, c in self.left(last, mono).items():
                v = self.covector(head, m2)
                if v:
                    hit = hit + c * v
        self._cov[key] = hit
        return hit

    def pair(self, word: Sequence[int], f: Dict[Mono, object]):
        """tau(x_word * s(f))."""
        word = tuple(word)
        total = ZERO
        for mono, c in f.items():
            v = self.covector(word, mono)
            if v:
                total = total + c * v
        return total

    def tau_word(self, word: Sequence[int]):
        return self.pair((), self.symmetric_of_word(word))

    def tau_sym(self, f: SymElement):
        return self.pair((), f.terms)


def _sub_multisets(mono: Mono, n: int):
    counts: Dict[int, int] = {}
    for a in mono:
        counts[a] = counts.get(a, 0) + 1
    keys = sorted(counts)

    def rec(i, left):
        if left == 0:
            yield ()
            return
        if i == len(keys):
            return
        a = keys[i]
        for take in range(min(counts[a], left), -1, -1):
            for rest in rec(i + 1, left - take):
                yield (a,) * take + rest

    yield from rec(0, n)


def _remove(mono: Mono, nu: Mono):
    """(mono - nu, mono!/(mono - nu)!) for a sub-multiset nu."""
    rest = list(mono)
    weight = 1
    for a in nu:
        weight *= rest.count(a)
        rest.remove(a)
    return tuple(rest), weight
