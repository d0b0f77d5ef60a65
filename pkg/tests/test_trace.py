from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flagstar.flag import FlagConfig, build_model, casimir_operator
from flagstar.scalars import I, conj
from flagstar.trace import CommutatorTrace, WordTrace, bernoulli, trace_T
from flagstar.weyl import WeylOperator, compose, transpose

PIPELINES = ["q_sl2", "q_p2", "q_full"]
coeffs = st.lists(st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3)), min_size=40, max_size=40)


@pytest.fixture(params=PIPELINES)
def q(request):
    return request.getfixturevalue(request.param)


def test_bernoulli():
    assert [bernoulli(n) for n in range(7)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0,
                                               Fraction(1, 42)]


def test_sl2_values(q_sl2):
    M = q_sl2.model
    e, h, f = M.eta
    one = WeylOperator.constant(1, 1)
    assert q_sl2.T(one) == 1
    assert all(q_sl2.T(x) == 0 for x in M.eta)
    ef = q_sl2.T(compose(e, f))
    hh = q_sl2.T(compose(h, h))
    assert ef == Fraction(-1, 6)
    assert hh == Fraction(-1, 3)
    # casimir scalar identity: 2 T(eta^e eta^f) + T(eta^h eta^h)/2 = -1/2
    assert 2 * ef + hh / 2 == Fraction(-1, 2)


def test_sl2_values_by_commutator_span(q_sl2):
    e, h, f = q_sl2.model.eta
    assert trace_T(compose(e, f), q_sl2.F) == Fraction(-1, 6)
    assert trace_T(compose(h, h), q_sl2.F) == Fraction(-1, 3)
    assert trace_T(compose(f, e), q_sl2.F) == Fraction(-1, 6)


def test_quadratic_trace_proportional_to_trace_form(q):
    g, M = q.model.g, q.model
    K = g.killing_matrix
    ratios = set()
    for a in range(g.dim):
        for b in range(g.dim):
            t = q.T(compose(M.eta[a], M.eta[b]))
            if K[a][b]:
                ratios.add(t / K[a][b])
            else:
                assert t == 0
    assert len(ratios) == 1


def test_dual_route(q):
    """Word-trace values agree with the commutator-span characterization."""
    ct = CommutatorTrace(q.F)
    top = min(q.D, 3)
    for i in range(q.F.dim(top)):
        assert ct(q.F.operator(i), top) == q.tau_words[i]


def test_independent_of_filtration_level(q_sl2):
    ct = CommutatorTrace(q_sl2.F)
    e, h, f = q_sl2.model.eta
    A = compose(e, f)
    assert ct(A, 2) == ct(A, 3) == ct(A, 4)


@given(coeffs, coeffs)
@settings(max_examples=15)
def test_trace_property(q_sl2, u, v):
    F = q_sl2.F
    n = F.dim(2)
    A = F.combine(u[:n])
    B = F.combine(v[:n])
    assert q_sl2.T(compose(A, B)) == q_sl2.T(compose(B, A))
    assert q_sl2.T(transpose(A)) == q_sl2.T(A)


def test_trace_of_conjugate(q_p2):
    F = q_p2.F
    for i in range(F.dim(2)):
        A = F.operator(i).scale(1 + 2 * I)
        assert q_p2.T(A.bar()) == conj(q_p2.T(A))


def test_central_values():
    for config, expected in [
        (FlagConfig.projective(2), [Fraction(-1, 2)]),
        (FlagConfig.projective(3), [Fraction(-3, 2), 0]),
        (FlagConfig.full(3), [-2, 0]),
    ]:
        model = build_model(config)
        wt = WordTrace(model)
        assert [wt.central_character(c) for c in model.g.casimirs] == expected
        # same numbers from the symmetrized operators themselves
        assert [casimir_operator(model, c).scalar_value() for c in model.g.casimirs] == expected
