from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from flagstar.lie import SymElement, sl
from flagstar.scalars import I, conj, is_real, scalar

rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))
scalars = st.builds(scalar, rationals, rationals)


def elements(n):
    return st.lists(scalars, min_size=n * n - 1, max_size=n * n - 1)


def sym_elements(n, max_deg=3):
    dim = n * n - 1
    mono = st.integers(0, max_deg).flatmap(
        lambda d: st.lists(st.integers(0, dim - 1), min_size=d, max_size=d).map(lambda l: tuple(sorted(l))))
    return st.dictionaries(mono, st.builds(scalar, rationals).filter(bool), min_size=1, max_size=4).map(SymElement)


def mat_commutator(a, b):
    n = len(a)
    ab = [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    ba = [[sum(b[i][k] * a[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[ab[i][j] - ba[i][j] for j in range(n)] for i in range(n)]


@pytest.fixture
def g2():
    return sl(2)


def test_basis_names(g2):
    assert g2.names == ["E12", "H1", "E21"]
    assert g2.lookup("E_12") == g2.lookup("E_1_2") == 0


def test_sl2_brackets(g2):
    e, h, f = (g2.unit(a) for a in range(3))
    assert g2.bracket(e, f) == h
    assert g2.bracket(h, e) == [2 * c for c in e]


@given(elements(3))
def test_self_bracket_vanishes(x):
    assert not any(sl(3).bracket(x, x))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_structure_constants_match_matrices(n):
    g = sl(n)
    for a, b in product(range(g.dim), repeat=2):
        expected = mat_commutator(g.basis_matrix(a), g.basis_matrix(b))
        assert g.to_matrix(g.bracket(g.unit(a), g.unit(b))) == expected


@pytest.mark.parametrize("n", [2, 3, 4])
def test_jacobi_exhaustive(n):
    g = sl(n)
    for a, b, c in product(range(g.dim), repeat=3):
        x, y, z = g.unit(a), g.unit(b), g.unit(c)
        total = [
            p + q + r
            for p, q, r in zip(
                g.bracket(x, g.bracket(y, z)), g.bracket(y, g.bracket(z, x)), g.bracket(z, g.bracket(x, y)))
        ]
        assert not any(total)


def test_cartan_examples(g2):
    e, h, f = (g2.unit(a) for a in range(3))
    assert g2.cartan_involution(e) == [-c for c in f]
    assert g2.cartan_involution(f) == [-c for c in e]
    assert g2.cartan_involution(h) == [-c for c in h]
    ie = [I * c for c in e]
    assert g2.cartan_involution(ie) == [-I * c for c in g2.cartan_involution(e)]


@given(elements(3), elements(3))
def test_cartan_is_antilinear_automorphism(x, y):
    g = sl(3)
    s = g.cartan_involution
    assert s(g.bracket(x, y)) == g.bracket(s(x), s(y))
    assert s(s(x)) == x


def test_trace_form_examples(g2):
    e, h, f = (g2.unit(a) for a in range(3))
    assert g2.trace_form(e, f) == 1
    assert g2.trace_form(h, h) == 2
    g3 = sl(3)
    assert g3.trace_form(g3.unit(g3.lookup("E12")), g3.unit(g3.lookup("E13"))) == 0


@given(elements(3), elements(3), elements(3))
def test_trace_form_invariant(x, y, w):
    g = sl(3)
    assert g.trace_form(g.bracket(x, y), w) + g.trace_form(y, g.bracket(x, w)) == 0
    assert g.trace_form(x, y) == g.trace_form(y, x)


def test_sl2_casimir(g2):
    (c,) = g2.casimirs
    e, h, f = 0, 1, 2
    expected = SymElement({(e, f): 2, (h, h): Fraction(1, 2)})
    # proportional to ef + fe + h^2/2
    ratio = c.terms[(h, h)] / expected.terms[(h, h)]
    assert c == expected.scale(ratio)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_casimirs_invariant(n):
    g = sl(n)
    assert [max(c.degrees()) for c in g.casimirs] == list(range(2, n + 1))
    for c in g.casimirs:
        for a in range(g.dim):
            assert not g.ad_sym(a, c)


def test_fischer_examples(g2):
    e = SymElement.monomial((0,))
    assert g2.fischer_pair(e, e) == 1
    assert g2.fischer_pair(e, SymElement.monomial((0, 2))) == 0
    assert g2.fischer_pair(SymElement.monomial((1,)), SymElement.monomial((1,))) == 2


@given(sym_elements(2), sym_elements(2))
def test_fischer_hermitian(f, h):
    g = sl(2)
    assert g.fischer_pair(f, h) == conj(g.fischer_pair(h, f))


@given(sym_elements(3))
def test_fischer_positive(f):
    g = sl(3)
    v = g.fischer_pair(f, f)
    assert is_real(v) and v > 0


def test_fischer_separates_degrees():
    g = sl(3)
    for a in g.sym_basis(1):
        for b in g.sym_basis(2):
            assert g.fischer_monomial_pair(a, b) == 0
