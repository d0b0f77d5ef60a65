from fractions import Fraction

import pytest

from flagstar.expr import ParseError, parse_mu
from flagstar.flag import FlagConfig, build_model
from flagstar.polynomials import PolyZP


@pytest.fixture(scope="module")
def p2():
    return build_model(FlagConfig.projective(3))


def test_names(sl2_model):
    e, h, f = sl2_model.mu
    assert parse_mu("e", sl2_model) == e
    assert parse_mu("E_12 * E21", sl2_model) == e * f
    assert parse_mu("H_1", sl2_model) == h
    assert parse_mu("E_1_2", sl2_model) == e


def test_arithmetic(p2):
    mu = p2.mu
    g = p2.g
    e12, e13 = mu[g.lookup("E12")], mu[g.lookup("E13")]
    got = parse_mu("1/2*E12*E13 - 3*(E12 + E13)^2 + 7", p2)
    want = (e12 * e13).scale(Fraction(1, 2)) - ((e12 + e13) ** 2).scale(3) + PolyZP.constant(p2.m, 7)
    assert got == want
    assert parse_mu("-E12", p2) == -e12


@pytest.mark.parametrize("text", ["E12 +", "E44", "1.5*E12", "(E12", "E12 $ E13", "1/0"])
def test_errors(p2, text):
    with pytest.raises(ParseError):
        parse_mu(text, p2)


def test_sl2_letters_only_for_sl2(p2):
    with pytest.raises(ParseError):
        parse_mu("e", p2)
