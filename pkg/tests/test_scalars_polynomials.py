from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from flagstar.polynomials import DimensionError, PolyZ, PolyZP, poly_arith
from flagstar.scalars import GaussianRational, I, Q, conj, fmt_scalar, parse_scalar, scalar

rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 12))
scalars = st.builds(scalar, rationals, rationals)


def polys(m=2, max_terms=4, max_exp=2):
    key = st.tuples(*[st.integers(0, max_exp)] * (2 * m))
    return st.dictionaries(key, scalars, max_size=max_terms).map(lambda t: PolyZP(m, t))


def z1():
    return PolyZP.z(1, 0)


def p1():
    return PolyZP.p(1, 0)


# -- scalars ------------------------------------------------------------------


def test_reduced_form():
    x = GaussianRational(Fraction(2, 4), Fraction(-6, 8))
    assert fmt_scalar(x) == "1/2-3/4*i"
    assert scalar(Fraction(4, 6)) == Q(2, 3)


def test_i_squared():
    assert I * I == -1


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(scalars, scalars)
def test_conjugation(a, b):
    assert conj(conj(a)) == a
    assert conj(a * b) == conj(a) * conj(b)
    assert conj(a + b) == conj(a) + conj(b)


@given(scalars)
def test_text_roundtrip(a):
    assert parse_scalar(fmt_scalar(a)) == a


# -- poly_arith examples ---------------------------------------------------------


def test_poly_arith_add():
    assert poly_arith(z1() + p1(), -z1(), "add") == p1()


def test_poly_arith_mul():
    zp = z1() * p1()
    assert poly_arith(zp, zp, "mul") == PolyZP(1, {(2, 2): 1})


def test_poly_arith_scale_i():
    ip = poly_arith(p1(), I, "scale")
    assert poly_arith(ip, ip, "mul") == PolyZP(1, {(0, 2): -1})


def test_poly_arith_dimension_error():
    with pytest.raises(DimensionError):
        poly_arith(PolyZP.p(1, 0), PolyZP.p(2, 0), "add")
    with pytest.raises(DimensionError):
        PolyZP.p(1, 0) * PolyZP.p(2, 1)


def test_no_zero_coefficients():
    a = z1() + p1()
    assert (a - a).terms == {}
    assert PolyZP(1, {(1, 0): 0}).terms == {}


# -- p_degree_split ----------------------------------------------------------------


def test_split_example():
    a = PolyZP.z(2, 0) * PolyZP.p(2, 0) + PolyZP.p(2, 1) ** 2
    assert a.p_degree_split() == [(1, PolyZP.z(2, 0) * PolyZP.p(2, 0)), (2, PolyZP.p(2, 1) ** 2)]


def test_split_zero():
    assert PolyZP.zero(3).p_degree_split() == []


def test_split_mu_h(sl2_model):
    h = sl2_model.g.lookup("H1")
    mu = sl2_model.mu[h]
    assert mu == PolyZP(1, {(1, 1): -2})
    assert mu.p_degree_split() == [(1, mu)]


@given(polys())
def test_split_resums(a):
    parts = a.p_degree_split()
    total = PolyZP.zero(2)
    for d, c in parts:
        assert c.homogeneous_degree() == d
        total = total + c
    assert total == a


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == PolyZP.zero(2)


@given(polys())
def test_text_serialization(a):
    assert PolyZP.from_text(2, a.to_text()) == a


def test_canonical_order_is_deterministic():
    a = PolyZP(2, {(0, 0, 1, 0): 1, (1, 0, 0, 0): 2, (0, 0, 0, 0): 3})
    b = PolyZP(2, {(0, 0, 0, 0): 3, (0, 0, 1, 0): 1, (1, 0, 0, 0): 2})
    assert a.to_text() == b.to_text()
    assert hash(a) == hash(b)


def test_polyz_basics():
    z = PolyZ.var(2, 0)
    w = PolyZ.var(2, 1)
    f = z * z * w + z
    assert f.diff(0) == PolyZ(2, {(1, 1): 2, (0, 0): 1})
    assert f.evaluate([Q(2), Q(3)]) == 14
