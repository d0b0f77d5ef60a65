from fractions import Fraction
from itertools import product

import pytest

from flagstar.classical import poisson
from flagstar.flag import FlagConfig, ModelError, build_model, build_vector_fields, casimir_operator, half_density_twist
from flagstar.lie import SymElement, sl
from flagstar.polynomials import PolyZ
from flagstar.weyl import OrderError, WeylOperator, commutator, compose, symbol, transpose

CONFIGS = [
    FlagConfig.projective(2),
    FlagConfig.projective(3),
    FlagConfig.full(3),
    FlagConfig(4, (2,)),
    FlagConfig.full(4),
]


@pytest.fixture(scope="module", params=CONFIGS, ids=lambda c: c.label())
def model(request):
    return build_model(request.param)


def W(terms, m=1):
    return WeylOperator(m, terms)


def test_config_dimensions():
    assert FlagConfig.projective(4).m == 3
    assert FlagConfig.full(3).m == 3
    assert FlagConfig.full(4).m == 6
    assert FlagConfig(4, (2,)).m == 4
    assert FlagConfig(5, (1, 3)).m == 1 * 2 + 1 * 2 + 2 * 2  # blocks 1, 2, 2
    with pytest.raises(ValueError):
        FlagConfig(3, (2, 1))
    with pytest.raises(ValueError):
        FlagConfig(3, (3,))


def test_sl2_vector_fields():
    xi = build_vector_fields(FlagConfig.projective(2))
    assert xi[0] == W({(0, 1): 1})
    assert xi[1] == W({(1, 1): -2})
    assert xi[2] == W({(2, 1): -1})
    assert commutator(xi[0], xi[2]) == xi[1]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_projective_fields_match_fractional_linear_action(n):
    # the line through (1, z) moved by x: z_i' = (v x)_i - z_i (v x)_0
    g = sl(n)
    m = n - 1
    xi = build_vector_fields(FlagConfig.projective(n))
    v = [PolyZ.constant(m, 1)] + [PolyZ.var(m, i) for i in range(m)]
    for a in range(g.dim):
        x = g.basis_matrix(a)
        vx = [sum((v[r].scale(x[r][c]) for r in range(n) if x[r][c]), PolyZ.zero(m)) for c in range(n)]
        for i in range(m):
            expected = vx[i + 1] - PolyZ.var(m, i) * vx[0]
            assert xi[a].coefficient_of(tuple(int(j == i) for j in range(m))) == expected


def test_half_density_examples():
    assert half_density_twist(W({(1, 1): -2})) == W({(1, 1): -2, (0, 0): -1})
    assert half_density_twist(W({(2, 1): -1})) == W({(2, 1): -1, (1, 0): -1})
    assert half_density_twist(W({(0, 1): 1})) == W({(0, 1): 1})
    with pytest.raises(OrderError):
        half_density_twist(W({(0, 2): 1}))


def test_homomorphism(model):
    g = model.g
    for a, b in product(range(g.dim), repeat=2):
        lhs = model.eta_of(g.bracket(g.unit(a), g.unit(b)))
        assert commutator(model.eta[a], model.eta[b]) == lhs
        assert commutator(model.xi[a], model.xi[b]) == sum(
            (model.xi[c].scale(s) for c, s in g.bracket_basis(a, b).items()), WeylOperator.zero(model.m))


def test_transpose_skew(model):
    for eta in model.eta:
        assert transpose(eta) == -eta
        assert eta.order() <= 1


def test_symbols_and_poisson(model):
    g = model.g
    for a in range(g.dim):
        assert symbol(model.eta[a], 1) == model.mu[a]
    for a, b in product(range(g.dim), repeat=2):
        assert poisson(model.mu[a], model.mu[b]) == model.mu_of(g.bracket(g.unit(a), g.unit(b)))


def test_coefficient_degrees(model):
    degree = max(x.z_degree() for x in model.xi)
    if model.config.is_grassmannian:
        assert degree <= 2
    else:
        # the block-upper chart of a partial flag needs degree up to the number of blocks
        assert degree <= len(model.config.dims) + 1


def test_sl2_casimir_scalar(sl2_model):
    (c,) = sl2_model.g.casimirs
    op = casimir_operator(sl2_model, c)
    # hand expansion of ef + fe + h^2/2, then match the normalization of c
    e, h, f = sl2_model.eta
    hand = compose(e, f) + compose(f, e) + compose(h, h).scale(Fraction(1, 2))
    assert hand == WeylOperator.constant(1, Fraction(-1, 2))
    scale = c.terms[(1, 1)] / Fraction(1, 2)
    assert op == hand.scale(scale)
    for eta in sl2_model.eta:
        assert not commutator(eta, op)


def test_full_flag_casimirs_scalar():
    model = build_model(FlagConfig.full(3))
    for c in model.g.casimirs:
        assert casimir_operator(model, c).is_scalar()


def test_non_invariant_rejected(sl2_model):
    with pytest.raises(ModelError):
        casimir_operator(sl2_model, SymElement.monomial((0, 0)))
