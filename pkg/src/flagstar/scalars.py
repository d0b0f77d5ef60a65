"""Exact scalars over Q(i).

Real values are carried as ``gmpy2.mpq``; values with a nonzero imaginary
part are carried as :class:`GaussianRational`.  Every arithmetic result is
normalized back to ``mpq`` when its imaginary part vanishes, so equality and
hashing agree across the two representations.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "GaussianRational",
    "I",
    "Q",
    "conj",
    "fmt_scalar",
    "imag",
    "is_real",
    "parse_scalar",
    "real",
    "scalar",
]

_RATIONAL_TYPES = (int, Fraction, type(mpq(0)))


def Q(x, den=None):
    """Coerce ``x`` (int, Fraction, mpq, or "a/b" string) to ``mpq``."""
    if den is not None:
        return mpq(x, den)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class GaussianRational:
    """a + b*i with a, b exact rationals.

    Instances are immutable.  Arithmetic returns ``mpq`` whenever the result is
    real; construct directly only if you need the wrapper around a real value.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Q(re))
        object.__setattr__(self, "im", Q(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, _RATIONAL_TYPES):
            return Q(other), mpq(0)
        if isinstance(other, Rational):
            return mpq(other.numerator, other.denominator), mpq(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return scalar(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return scalar(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return scalar(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = p
        return scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        a, b = self.re, self.im
        return scalar((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(*p) / self

    def __neg__(self):
        return scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        out = mpq(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return scalar(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({fmt_scalar(self.re)}, {fmt_scalar(self.im)})"

    def __str__(self):
        return fmt_scalar(self)


I = GaussianRational(0, 1)


def scalar(re, im=0):
    """Canonical scalar: ``mpq`` if ``im == 0`` else GaussianRational."""
    if im == 0:
        return Q(re)
    return GaussianRational(re, im)


def conj(x):
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


def real(x):
    return x.re if isinstance(x, GaussianRational) else Q(x)


def imag(x):
    return x.im if isinstance(x, GaussianRational) else mpq(0)


def is_real(x):
    return not isinstance(x, GaussianRational) or x.im == 0


def _fmt_q(q) -> str:
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def fmt_scalar(x) -> str:
    """Canonical text form ``a/b+c/d*i`` (parts omitted when zero)."""
    re_, im_ = real(x), imag(x)
    if im_ == 0:
        return _fmt_q(re_)
    im_txt = "i" if im_ == 1 else ("-i" if im_ == -1 else f"{_fmt_q(im_)}*i")
    if re_ == 0:
        return im_txt
    sign = "" if im_txt.startswith("-") else "+"
    return f"{_fmt_q(re_)}{sign}{im_txt}"


def parse_scalar(text: str):
    """Inverse of :func:`fmt_scalar`."""
    s = text.strip().replace(" ", "")
    if not s.endswith("i"):
        return Q(s)
    body = s[:-1]
    if body.endswith("*"):
        body = body[:-1]
    # split at the last sign that is not the leading one
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut <= 0:
        re_txt, im_txt = "0", body
    else:
        re_txt, im_txt = body[:cut], body[cut:]
    if im_txt in ("", "+"):
        im_val = mpq(1)
    elif im_txt == "-":
        im_val = mpq(-1)
    else:
        im_val = Q(im_txt.lstrip("+"))
    return scalar(Q(re_txt), im_val)
