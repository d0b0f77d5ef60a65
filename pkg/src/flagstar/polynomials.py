"""Sparse multivariate polynomials with exact Q(i) coefficients.

``PolyZ`` lives in z1..zm.  ``PolyZP`` lives in z1..zm, p1..pm; its exponent
keys are the z-exponents followed by the p-exponents.  Terms are kept in a
dict from exponent tuple to nonzero coefficient; iteration for output uses
the graded-lexicographic order (highest first).
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, Tuple

from gmpy2 import mpq

from .scalars import conj, fmt_scalar, parse_scalar, scalar

__all__ = ["DimensionError", "PolyZ", "PolyZP", "grlex_key", "poly_arith"]

Key = Tuple[int, ...]


class DimensionError(ValueError):
    """Operands live in different numbers of variables."""


def grlex_key(key: Key):
    return (sum(key), key)


def _clean(terms: Dict[Key, object]) -> Dict[Key, object]:
    return {k: v for k, v in terms.items() if v}


class _Sparse:
    __slots__ = ("m", "terms")

    # number of exponent slots per variable group
    _groups = 1

    def __init__(self, m: int, terms=None, _trusted=False):
        self.m = m
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = terms
        else:
            width = m * self._groups
            out = {}
            for k, v in dict(terms).items():
                k = tuple(int(e) for e in k)
                if len(k) != width:
                    raise DimensionError(f"exponent {k} has wrong length for m={m}")
                if any(e < 0 for e in k):
                    raise ValueError(f"negative exponent in {k}")
                v = scalar(v) if isinstance(v, (int, str)) else v
                if v:
                    out[k] = v
            self.terms = out

    # -- construction helpers -----------------------------------------------
    @classmethod
    def _make(cls, m, terms):
        return cls(m, terms, _trusted=True)

    @classmethod
    def zero(cls, m):
        return cls._make(m, {})

    @classmethod
    def constant(cls, m, c=1):
        c = scalar(c) if isinstance(c, int) else c
        return cls._make(m, {(0,) * (m * cls._groups): c} if c else {})

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.m != self.m:
            raise DimensionError(f"variable counts differ: {self.m} vs {other.m}")

    # -- linear structure ---------------------------------------------------
    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                w = w + v
                if w:
                    out[k] = w
                else:
                    del out[k]
        return self._make(self.m, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._make(self.m, {k: -v for k, v in self.terms.items()})

    def scale(self, c):
        if not c:
            return self.zero(self.m)
        return self._make(self.m, _clean({k: c * v for k, v in self.terms.items()}))

    def bar(self):
        """Conjugate every coefficient."""
        return self._make(self.m, {k: conj(v) for k, v in self.terms.items()})

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if type(other) is not type(self):
            if isinstance(other, int) and other == 0:
                return not self.terms
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.m, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def items(self):
        """Terms in canonical (graded-lex, descending) order."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def coefficient(self, key):
        return self.terms.get(tuple(key), mpq(0))

    # -- text ---------------------------------------------------------------
    def _var_names(self):
        raise NotImplementedError

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = self._var_names()
        parts = []
        for k, v in self.items():
            factors = []
            for name, e in zip(names, k):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            parts.append(f"[{fmt_scalar(v)}]" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, m: int, text: str):
        """Parse the output of :meth:`to_text`."""
        text = text.strip()
        if text == "0":
            return cls.zero(m)
        probe = cls.zero(m)
        index = {name: i for i, name in enumerate(probe._var_names())}
        terms = {}
        for chunk in re.findall(r"\[([^\]]*)\]((?:\*[A-Za-z]+\d+(?:\^\d+)?)*)", text):
            coef_txt, mono_txt = chunk
            key = [0] * (m * cls._groups)
            for fac in filter(None, mono_txt.split("*")):
                name, _, e = fac.partition("^")
                key[index[name]] += int(e) if e else 1
            k = tuple(key)
            terms[k] = terms.get(k, 0) + parse_scalar(coef_txt)
        return cls(m, terms)

    def __repr__(self):
        return f"{type(self).__name__}({self.m}, {self.to_text()})"


class PolyZ(_Sparse):
    """Polynomial in z1..zm."""

    __slots__ = ()
    _groups = 1

    def _var_names(self):
        return [f"z{i + 1}" for i in range(self.m)]

    @classmethod
    def var(cls, m, i):
        key = [0] * m
        key[i] = 1
        return cls._make(m, {tuple(key): mpq(1)})

    def __mul__(self, other):
        if not isinstance(other, PolyZ):
            return self.scale(other)
        self._check(other)
        out: Dict[Key, object] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                w = out.get(k)
                out[k] = v1 * v2 if w is None else w + v1 * v2
        return self._make(self.m, _clean(out))

    def diff(self, i: int):
        out = {}
        for k, v in self.terms.items():
            e = k[i]
            if e:
                kk = list(k)
                kk[i] = e - 1
                out[tuple(kk)] = v * e
        return self._make(self.m, out)

    def degree(self):
        return max((sum(k) for k in self.terms), default=-1)

    def evaluate(self, point):
        total = mpq(0)
        for k, v in self.terms.items():
            t = v
            for x, e in zip(point, k):
                if e:
                    t = t * x ** e
            total = total + t
        return total


class PolyZP(_Sparse):
    """Polynomial in z1..zm, p1..pm (key = z-exponents + p-exponents)."""

    __slots__ = ()
    _groups = 2

    def _var_names(self):
        return [f"z{i + 1}" for i in range(self.m)] + [f"p{i + 1}" for i in range(self.m)]

    @classmethod
    def z(cls, m, i):
        key = [0] * (2 * m)
        key[i] = 1
        return cls._make(m, {tuple(key): mpq(1)})

    @classmethod
    def p(cls, m, i):
        key = [0] * (2 * m)
        key[m + i] = 1
        return cls._make(m, {tuple(key): mpq(1)})

    def __mul__(self, other):
        if not isinstance(other, PolyZP):
            return self.scale(other)
        self._check(other)
        out: Dict[Key, object] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                w = out.get(k)
                out[k] = v1 * v2 if w is None else w + v1 * v2
        return self._make(self.m, _clean(out))

    def __pow__(self, k: int):
        out = self.constant(self.m)
        for _ in range(k):
            out = out * self
        return out

    def p_degree(self, key):
        return sum(key[self.m:])

    def p_degree_split(self):
        """[(d, component of p-degree d)] for each nonzero component, ascending d."""
        parts: Dict[int, Dict[Key, object]] = {}
        m = self.m
        for k, v in self.terms.items():
            parts.setdefault(sum(k[m:]), {})[k] = v
        return [(d, self._make(m, parts[d])) for d in sorted(parts)]

    def homogeneous_degree(self):
        """The p-degree if homogeneous (0 for the zero polynomial), else None."""
        degs = {sum(k[self.m:]) for k in self.terms}
        if not degs:
            return 0
        return degs.pop() if len(degs) == 1 else None

    def diff_z(self, i: int):
        return self._diff(i)

    def diff_p(self, i: int):
        return self._diff(self.m + i)

    def _diff(self, slot):
        out = {}
        for k, v in self.terms.items():
            e = k[slot]
            if e:
                kk = list(k)
                kk[slot] = e - 1
                out[tuple(kk)] = v * e
        return self._make(self.m, out)

    def alpha(self):
        """phi -> (-1)^d phi on each p-degree-d component."""
        m = self.m
        return self._make(m, {k: (-v if sum(k[m:]) % 2 else v) for k, v in self.terms.items()})


def monomials_of_degree(nvars: int, d: int) -> Iterable[Key]:
    """All exponent tuples of total degree d in nvars variables (lex descending)."""
    if nvars == 0:
        if d == 0:
            yield ()
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            yield (first,) + rest


def poly_arith(a: PolyZP, b, op: str) -> PolyZP:
    """a + b, a * b, or a scaled by the scalar b."""
    if op == "scale":
        return a.scale(b)
    if not isinstance(b, PolyZP) or b.m != a.m:
        raise DimensionError("poly_arith needs polynomials in the same variables")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")
