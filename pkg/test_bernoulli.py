"""
베르누이 수와 L-값 테스트
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bernoulli import (
    bernoulli_number, bernoulli_poly, euler_factor, generalized_bernoulli, kubota_leopoldt, l_value,
    l_value_table, mazur_transform, mazur_value, mu_B, von_staudt_denominator,
)
from characters import DirichletChar, enumerate_characters, evaluate, units
from cyclotomic import CycloElement
from padic import PadicNumber

N = 20


@pytest.mark.parametrize("k, value", [
    (0, Fraction(1)),
    (1, Fraction(-1, 2)),
    (2, Fraction(1, 6)),
    (3, Fraction(0)),
    (4, Fraction(-1, 30)),
    (12, Fraction(-691, 2730)),
])
def test_bernoulli_numbers(k, value):
    assert bernoulli_number(k) == value


@pytest.mark.parametrize("k", [2, 4, 10, 12, 32])
def test_von_staudt_denominator(k):
    assert bernoulli_number(k).denominator == von_staudt_denominator(k)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.fractions(min_value=0, max_value=1, max_denominator=50))
def test_bernoulli_poly_reflection(k, x):
    assert bernoulli_poly(k, 1 - x) == (-1) ** k * bernoulli_poly(k, x)


def test_small_measure_values():
    assert mu_B(5, 2, 1, 1) == Fraction(1, 30)
    assert mazur_value(5, 1, 2, 1, 1) == Fraction(1, 4)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_bernoulli_distribution_is_compatible(k):
    for b in units(5, 1):
        lifts = [a for a in units(5, 2) if a % 5 == b]
        assert sum(mu_B(5, k, a, 2) for a in lifts) == mu_B(5, k, b, 1)


def test_mazur_rejects_bad_auxiliary():
    with pytest.raises(ValueError):
        mazur_value(5, 2, 10, 1, 1)
    with pytest.raises(ValueError):
        mazur_value(5, 2, 2, 5, 1)


def test_zeta_at_minus_one():
    trivial = DirichletChar(5, 1, 0, 0)
    assert l_value(2, trivial, N).rational_part().is_congruent(PadicNumber.from_rational(5, Fraction(-1, 12), N))


def test_quadratic_character_value():
    # ω^2 는 법 5 르장드르 기호
    chi = DirichletChar(5, 1, 2, 0)
    value = l_value(2, chi, N).rational_part()
    assert value.is_congruent(PadicNumber.from_rational(5, Fraction(-2, 5), N))


def test_euler_factor():
    assert euler_factor(DirichletChar(5, 1, 0, 0), 2) == -4
    assert euler_factor(DirichletChar(5, 1, 2, 0), 2) == 1


def test_kubota_leopoldt_trivial_branch():
    phi = DirichletChar(5, 1, 0, 0)
    value = kubota_leopoldt(2, 2, phi, N).rational_part()
    assert value.is_congruent(PadicNumber.from_rational(5, Fraction(1, 3), N))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_mazur_transform_matches_character_sum(k):
    c = 2
    for chi in enumerate_characters(5, 2):
        total = CycloElement.zero(5, 1, N)
        for b in units(5, 2):
            total = total + evaluate(chi, b, N).scale(mazur_value(5, k, c, b, 2))
        assert total.is_congruent(mazur_transform(k, c, chi, N))


def test_l_value_table_rows():
    rows = l_value_table(5, 1, [2], N)
    assert [row['i'] for row in rows] == [0, 2]
    assert rows[0]['conductor'] == 1


def test_odd_weight_even_character_vanishes():
    assert generalized_bernoulli(3, DirichletChar(5, 1, 2, 0), N).is_zero


def test_irregular_pair_is_divisible_by_p():
    value = generalized_bernoulli(2, DirichletChar(37, 1, 30, 0), N)
    assert value.is_zero or value.valuation().exponent >= 1


def test_zeta_at_zero():
    trivial = DirichletChar(5, 1, 0, 0)
    assert l_value(1, trivial, N).rational_part().is_congruent(PadicNumber.from_rational(5, Fraction(-1, 2), N))


def test_von_staudt_up_to_forty():
    for k in range(2, 41, 2):
        assert bernoulli_number(k).denominator == von_staudt_denominator(k)
