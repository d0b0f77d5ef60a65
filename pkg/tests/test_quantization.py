from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from flagstar.classical import poisson
from flagstar.dmodule import sigma_D
from flagstar.flag import FlagConfig
from flagstar.linalg import is_hermitian, mat_mul, mat_sub
from flagstar.polynomials import PolyZP
from flagstar.quantization import (
    build_quantization,
    gram_gamma,
    inner_product,
    lambda_op,
    preferred_bq,
    star_coeffs,
    symmetrization_bfr,
    tau_splitting_check,
)
from flagstar.scalars import I, conj, scalar
from flagstar.weyl import WeylOperator, compose, symbol, transpose

PIPELINES = ["q_sl2", "q_p2", "q_full"]
coeffs = st.lists(st.builds(scalar, st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3)),
                            st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))), min_size=64, max_size=64)


@pytest.fixture(params=PIPELINES)
def q(request):
    return request.getfixturevalue(request.param)


def unit(q, word):
    return [int(w == word) for w in q.F.words]


# -- Gram form --------------------------------------------------------------------


def test_gram_examples(q_sl2):
    assert q_sl2.gamma(unit(q_sl2, ()), unit(q_sl2, ())) == 1
    assert q_sl2.gamma(unit(q_sl2, (0,)), unit(q_sl2, (0,))) == Fraction(1, 6)
    assert q_sl2.gamma(unit(q_sl2, (1,)), unit(q_sl2, (1,))) == Fraction(1, 3)


def test_gram_hermitian_positive(q):
    assert is_hermitian(q.gram)
    assert len(q.pivots) == len(q.F.words)
    assert all(p > 0 for p in q.pivots)
    for K in gram_gamma(q):
        assert is_hermitian(K)


def test_gram_is_trace_of_sigma_product(q_sl2):
    """gamma(A, B) = T(A B^sigma) recomputed with operators."""
    F = q_sl2.F
    for i in range(F.dim(2)):
        for j in range(F.dim(2)):
            A, B = F.operator(i), F.operator(j)
            assert q_sl2.gram[i][j] == q_sl2.T(compose(A, sigma_D(B, F)))


def test_splitting_is_direct_and_graded(q):
    F = q.F
    for i, row in enumerate(q.V):
        d = F.degree(i)
        assert row[i] == 1
        assert not any(c for k, c in enumerate(row) if F.degree(k) >= d and k != i)
    gv = q.gram_V
    for i, j in product(range(len(F.words)), repeat=2):
        if F.degree(i) != F.degree(j):
            assert gv[i][j] == 0


# -- bq --------------------------------------------------------------------------------


def test_bq_low_degree(q):
    M = q.model
    one = PolyZP.constant(M.m, 1)
    assert preferred_bq(q, one) == WeylOperator.constant(M.m, 1)
    for a in range(M.g.dim):
        assert preferred_bq(q, M.mu[a]) == M.eta[a]


def test_bq_sl2_quadratic(q_sl2):
    e, h, f = q_sl2.model.mu
    A = preferred_bq(q_sl2, e * f)
    assert symbol(A, 2) == e * f
    # gamma-orthogonal to D_{<=1}
    vec = q_sl2.F.coords(A)
    for j in range(q_sl2.F.dim(1)):
        assert q_sl2.gamma(vec, unit(q_sl2, q_sl2.F.words[j])) == 0
    assert A == symmetrization_bfr(q_sl2, e * f)


@given(st.integers(0, 3), coeffs)
@settings(max_examples=20)
def test_bq_transpose_and_bar(q_p2, d, c):
    R = q_p2.R
    phi = R.element(d, c[: R.dim(d)])
    A = q_p2.bq(phi)
    assert q_p2.bq(phi.alpha()) == transpose(A)
    assert q_p2.bq(phi.bar()) == A.bar()
    assert q_p2.bq_inverse(A) == phi


def test_bq_equivariant(q_p2):
    M, R = q_p2.model, q_p2.R
    for d in range(3):
        for r in R.elements[d]:
            A = q_p2.bq(r)
            for x in range(M.g.dim):
                assert q_p2.bq(poisson(M.mu[x], r)) == compose(M.eta[x], A) - compose(A, M.eta[x])


# -- inner product ---------------------------------------------------------------------


def test_inner_examples(q):
    one = PolyZP.constant(q.model.m, 1)
    assert inner_product(q, one, one) == 1
    for dj, dk in product(range(min(q.D, 3) + 1), repeat=2):
        if dj == dk:
            continue
        for a in q.R.elements[dj]:
            for b in q.R.elements[dk]:
                assert q.inner(a, b) == 0


def test_inner_hermitian(q_sl2):
    R = q_sl2.R
    a = R.elements[2][0].scale(1 + I) + R.elements[2][3]
    b = R.elements[2][1].scale(2 - I)
    assert q_sl2.inner(a, b) == conj(q_sl2.inner(b, a))
    assert q_sl2.inner(a.scale(I), b) == I * q_sl2.inner(a, b)


# -- star product ----------------------------------------------------------------------


def test_star_sl2_example(q_sl2):
    e, h, f = q_sl2.model.mu
    sc = star_coeffs(q_sl2, e, f)
    assert sc.coefficient(0) == e * f
    assert sc.coefficient(1) == h.scale(Fraction(1, 2))
    assert sc.coefficient(2) == PolyZP.constant(1, Fraction(-1, 6))


def test_star_unit_and_self(q_sl2):
    one = PolyZP.constant(1, 1)
    psi = q_sl2.R.elements[2][1]
    sc = q_sl2.star(one, psi)
    assert sc.coefficient(0) == psi
    assert all(not sc.coefficient(p) for p in range(1, 3))
    for mu in q_sl2.model.mu:
        assert not q_sl2.star(mu, mu).coefficient(1)


@given(st.integers(0, 2), st.integers(0, 1), coeffs, coeffs)
@settings(max_examples=15)
def test_star_leading_terms_and_parity(q_p2, dj, dk, u, v):
    R = q_p2.R
    phi = R.element(dj, u[: R.dim(dj)])
    psi = R.element(dk, v[: R.dim(dk)])
    a = q_p2.star(phi, psi)
    b = q_p2.star(psi, phi)
    assert a.coefficient(0) == phi * psi
    if dj + dk:
        assert a.coefficient(1) == poisson(phi, psi).scale(Fraction(1, 2))
    for p in range(dj + dk + 1):
        assert a.coefficient(p) == b.coefficient(p).scale((-1) ** p)
        if dj + dk - p < abs(dj - dk):
            assert not a.coefficient(p)


def test_star_reconstructs_operator_product(q_sl2):
    """sum_p bq(C_p) = bq(phi) bq(psi)."""
    R = q_sl2.R
    phi, psi = R.elements[2][2], R.elements[1][0]
    sc = q_sl2.star(phi, psi)
    total = WeylOperator.zero(1)
    for p in range(4):
        total = total + q_sl2.bq(sc.coefficient(p))
    assert total == compose(q_sl2.bq(phi), q_sl2.bq(psi))


# -- Lambda ---------------------------------------------------------------------------


def test_lambda_sl2_pairing(q_sl2):
    g = q_sl2.model.g
    P = q_sl2.lambda_pairing()
    for x, y in product(range(3), repeat=2):
        assert P[x][y] == Fraction(-1, 6) * g.killing_matrix[x][y]


def test_lambda_of_constants(q):
    for x in range(q.model.g.dim):
        assert lambda_op(q, x, 0) == []


def test_lambda_is_second_star_coefficient(q):
    M, R = q.model, q.R
    for d in range(q.D):
        for x in range(M.g.dim):
            L = lambda_op(q, x, d)
            for i, r in enumerate(R.elements[d]):
                c2 = q.star(M.mu[x], r).coefficient(2)
                expected = R.element(d - 1, [row[i] for row in L]) if d else PolyZP.zero(M.m)
                assert c2 == expected
                assert not any(q.star(M.mu[x], r).coefficient(p) for p in range(3, d + 2))


def test_lambda_commute_and_equivariance(q_p2):
    g = q_p2.model.g
    for d in range(2, q_p2.D + 1):
        for x, y in product(range(g.dim), repeat=2):
            a = mat_mul(q_p2.lambda_matrix(x, d - 1), q_p2.lambda_matrix(y, d))
            b = mat_mul(q_p2.lambda_matrix(y, d - 1), q_p2.lambda_matrix(x, d))
            assert a == b
    for d in range(1, q_p2.D + 1):
        for x, y in product(range(g.dim), repeat=2):
            comm = mat_sub(mat_mul(q_p2.poisson_matrix(x, d - 1), q_p2.lambda_matrix(y, d)),
                           mat_mul(q_p2.lambda_matrix(y, d), q_p2.poisson_matrix(x, d)))
            assert comm == q_p2.lambda_of(g.bracket(g.unit(x), g.unit(y)), d)


# -- cross-characterizations ------------------------------------------------------------


def test_bfr_symbol(q_full):
    R = q_full.R
    for d in range(q_full.D + 1):
        for r in R.elements[d]:
            assert symbol(symmetrization_bfr(q_full, r), d) == r


def test_bfr_equals_bq_multiplicity_free(q_sl2, q_p2):
    for q in (q_sl2, q_p2):
        for d in range(4):
            for r in q.R.elements[d]:
                assert q.bfr(r) == q.bq(r)


def test_tau_splitting(q):
    assert tau_splitting_check(q)


@pytest.mark.parametrize("D", [0, 1])
def test_low_degree_splittings_trivial(D):
    q = build_quantization(FlagConfig.projective(2), D)
    assert tau_splitting_check(q)
    assert q.K[0] == [[1]]
