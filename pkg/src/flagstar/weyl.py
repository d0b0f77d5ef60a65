"""Polynomial-coefficient differential operators in z1..zm, normal ordered.

A term ``z^a d^b`` is stored under the key ``a + b`` (z-exponents followed by
derivative exponents), with every z to the left of every derivative.  Since
normal ordered monomials form a basis of the Weyl algebra, two operators are
equal iff their term maps are equal.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import comb

from gmpy2 import mpq

from .polynomials import DimensionError, PolyZ, PolyZP, _clean, _Sparse

__all__ = ["OrderError", "WeylOperator", "commutator", "compose", "symbol", "transpose"]


class OrderError(ValueError):
    """An operator exceeds the order allowed by the caller."""


@lru_cache(maxsize=None)
def _leibniz(b: int, g: int):
    """d^b z^g = sum_k C(b,k) g!/(g-k)! z^(g-k) d^(b-k); returns [(k, coeff)]."""
    out = []
    falling = 1
    for k in range(min(b, g) + 1):
        out.append((k, comb(b, k) * falling))
        falling *= g - k
    return tuple(out)


class WeylOperator(_Sparse):
    """Element of the Weyl algebra with exact coefficients."""

    __slots__ = ()
    _groups = 2

    def _var_names(self):
        return [f"z{i + 1}" for i in range(self.m)] + [f"d{i + 1}" for i in range(self.m)]

    @classmethod
    def z(cls, m, i):
        key = [0] * (2 * m)
        key[i] = 1
        return cls._make(m, {tuple(key): mpq(1)})

    @classmethod
    def d(cls, m, i):
        key = [0] * (2 * m)
        key[m + i] = 1
        return cls._make(m, {tuple(key): mpq(1)})

    @classmethod
    def multiplication(cls, f: PolyZ):
        m = f.m
        return cls._make(m, {k + (0,) * m: v for k, v in f.terms.items()})

    @classmethod
    def first_order(cls, coeffs, const=None):
        """sum_i coeffs[i] * d_i + const, with PolyZ coefficients."""
        m = len(coeffs)
        out = {}
        for i, c in enumerate(coeffs):
            unit = tuple(1 if j == i else 0 for j in range(m))
            for k, v in c.terms.items():
                out[k + unit] = v
        if const is not None:
            for k, v in const.terms.items():
                out[k + (0,) * m] = out.get(k + (0,) * m, 0) + v
        return cls(m, out)

    # -- structure ----------------------------------------------------------
    def order(self):
        """Total derivative degree; -1 for the zero operator."""
        m = self.m
        return max((sum(k[m:]) for k in self.terms), default=-1)

    def z_degree(self):
        m = self.m
        return max((sum(k[:m]) for k in self.terms), default=-1)

    def coefficient_of(self, dexp) -> PolyZ:
        """PolyZ coefficient of d^dexp."""
        m = self.m
        dexp = tuple(dexp)
        return PolyZ._make(m, {k[:m]: v for k, v in self.terms.items() if k[m:] == dexp})

    def __mul__(self, other):
        if isinstance(other, WeylOperator):
            return compose(self, other)
        return self.scale(other)

    def __matmul__(self, other):
        return compose(self, other)

    def apply(self, f: PolyZ) -> PolyZ:
        """Act on a polynomial function."""
        if f.m != self.m:
            raise DimensionError("operator and function live in different variables")
        m = self.m
        out = {}
        for k, v in self.terms.items():
            alpha, beta = k[:m], k[m:]
            for fk, fv in f.terms.items():
                c = 1
                for b, e in zip(beta, fk):
                    if b > e:
                        c = 0
                        break
                    for t in range(b):
                        c *= e - t
                if not c:
                    continue
                kk = tuple(a + e - b for a, e, b in zip(alpha, fk, beta))
                out[kk] = out.get(kk, 0) + v * fv * c
        return PolyZ._make(m, _clean(out))

    def is_scalar(self):
        return all(not any(k) for k in self.terms)

    def scalar_value(self):
        return self.terms.get((0,) * (2 * self.m), mpq(0))

    def transpose(self):
        return transpose(self)

    def symbol(self, d):
        return symbol(self, d)


def compose(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    """Normal-ordered product a*b."""
    if a.m != b.m:
        raise DimensionError(f"variable counts differ: {a.m} vs {b.m}")
    m = a.m
    out = {}
    get = out.get
    bterms = [(kb[:m], kb[m:], vb) for kb, vb in b.terms.items()]
    for ka, va in a.terms.items():
        alpha, beta = ka[:m], ka[m:]
        if not any(beta):
            for gamma, delta, vb in bterms:
                k = tuple(x + y for x, y in zip(alpha, gamma)) + delta
                w = get(k)
                out[k] = va * vb if w is None else w + va * vb
            continue
        for gamma, delta, vb in bterms:
            choices = [_leibniz(beta[i], gamma[i]) for i in range(m)]
            base = va * vb
            for combo in product(*choices):
                c = 1
                for _, cc in combo:
                    c *= cc
                zk = tuple(alpha[i] + gamma[i] - combo[i][0] for i in range(m))
                dk = tuple(beta[i] - combo[i][0] + delta[i] for i in range(m))
                k = zk + dk
                w = get(k)
                t = base * c
                out[k] = t if w is None else w + t
    return WeylOperator._make(m, _clean(out))


def commutator(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    return compose(a, b) - compose(b, a)


def transpose(a: WeylOperator) -> WeylOperator:
    """Formal transpose: z_i -> z_i, d_i -> -d_i, extended anti-multiplicatively."""
    m = a.m
    out = {}
    for k, v in a.terms.items():
        alpha, beta = k[:m], k[m:]
        sign = -1 if sum(beta) % 2 else 1
        # (z^alpha d^beta)^t = (-d)^beta z^alpha
        for combo in product(*[_leibniz(beta[i], alpha[i]) for i in range(m)]):
            c = sign
            for _, cc in combo:
                c *= cc
            kk = tuple(alpha[i] - combo[i][0] for i in range(m)) + tuple(
                beta[i] - combo[i][0] for i in range(m)
            )
            out[kk] = out.get(kk, 0) + v * c
    return WeylOperator._make(m, _clean(out))


def symbol(a: WeylOperator, d: int) -> PolyZP:
    """Degree-d symbol: z^a d^b with |b| = d becomes z^a p^b; lower terms drop."""
    m = a.m
    if a.order() > d:
        raise OrderError(f"operator of order {a.order()} has no degree-{d} symbol")
    return PolyZP._make(m, {k: v for k, v in a.terms.items() if sum(k[m:]) == d})


def divergence(xi: WeylOperator) -> PolyZ:
    """sum_i d(coefficient of d_i)/dz_i for a first-order operator without constant term."""
    m = xi.m
    if xi.order() > 1:
        raise OrderError("divergence needs a first-order operator")
    total = PolyZ.zero(m)
    for i in range(m):
        unit = tuple(1 if j == i else 0 for j in range(m))
        total = total + xi.coefficient_of(unit).diff(i)
    return total
