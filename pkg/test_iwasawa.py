"""
Iwasawa 멱급수, Weierstrass 분해, d_p 테스트
"""
from fractions import Fraction

import pytest

from characters import DirichletChar, enumerate_characters
from groupring import apply_character, mazur_element
from iwasawa import (
    PowerSeries, TruncationError, UnsupportedInvariantsError, binomial_estimate, branch_series,
    d_p, default_auxiliary, evaluate_at, evaluate_at_zeta, evaluate_branch, gamma_to_t_basis,
    newton_zero, pole_branch_check, truncate, weierstrass_prepare,
)
from padic import PadicNumber, PrecisionError

P = 5
N = 10
MOD = P ** N


def test_gamma_to_t_basis():
    # γ^2 = (1+T)^2 = 1 + 2T + T^2
    assert gamma_to_t_basis([0, 0, 1], 125) == [1, 2, 1]


def test_pure_p_power_has_mu_one():
    W = weierstrass_prepare(PowerSeries(P, N, (5,)))
    assert (W.mu, W.lam) == (1, 0)


def test_distinguished_linear_polynomial():
    W = weierstrass_prepare(PowerSeries(P, N, ((-5) % MOD, 1)))
    assert (W.mu, W.lam) == (0, 1)
    assert W.distinguished == ((-5) % P ** W.precision,)
    assert W.unit[0] == 1
    assert not any(W.unit[1:])
    assert newton_zero(W).to_integer() == 5


def test_unit_factor_is_split_off():
    # (T - 5)(1 + T) = T^2 - 4T - 5
    W = weierstrass_prepare(PowerSeries(P, N, ((-5) % MOD, (-4) % MOD, 1)))
    assert W.lam == 1
    assert W.distinguished == ((-5) % P ** W.precision,)
    assert W.unit[:2] == (1, 1)
    assert newton_zero(W).to_integer() == 5


def test_zero_series_is_rejected():
    with pytest.raises(PrecisionError):
        weierstrass_prepare(PowerSeries(P, N, (0, 0)))


def test_lambda_beyond_level_is_unsupported():
    F = PowerSeries(P, N, (5, 5, 1), modulus_level=1)
    with pytest.raises(UnsupportedInvariantsError):
        weierstrass_prepare(F)


def test_truncation_limits_zeta_evaluation():
    F = PowerSeries(P, N, (1, 1, 0, 0), truncated=True)
    with pytest.raises(TruncationError):
        evaluate_at_zeta(F, 1)


def test_truncate():
    F = PowerSeries(P, N, (1, 2, 3, 4))
    assert truncate(F, None) is F
    short = truncate(F, 2)
    assert short.truncated and short.coeffs == (1, 2)
    with pytest.raises(TruncationError):
        short.coefficient(3)


def test_evaluate_at_point():
    F = PowerSeries(P, N, (1, 2, 3))
    value = evaluate_at(F, PadicNumber.from_int(P, 5, N))
    assert value.is_congruent(PadicNumber.from_int(P, 86, N))


def test_branch_series_interpolates_characters():
    theta = mazur_element(P, 2, 2, 2, 20)
    for chi in enumerate_characters(P, 2):
        phi = DirichletChar(P, 2, 0, chi.j)
        assert evaluate_branch(theta, chi.i, phi).is_congruent(apply_character(theta, chi))


def test_branch_series_modulus_level():
    theta = mazur_element(P, 2, 2, 2, 20)
    F = branch_series(theta, 0)
    assert F.modulus_level == 2
    assert F.M == 5


def test_default_auxiliary_is_primitive_root():
    assert default_auxiliary(5) == 2


def test_regular_prime_has_no_zeros():
    report = d_p(5, 2, 2, 30)
    assert not report.has_zeros
    assert report.to_dict()['d_p']['status'] == 'no zeros'
    assert all(b.lam == 0 for b in report.branches)


def test_d_p_needs_level_two():
    with pytest.raises(ValueError):
        d_p(5, 2, 1, 30)


def test_d_p_rejects_bad_auxiliary():
    with pytest.raises(ValueError):
        d_p(5, 2, 2, 30, c=7)


def test_binomial_estimate():
    result = binomial_estimate(PadicNumber.from_int(P, 5, N), 4)
    assert [row['valuation'] for row in result['rows']] == [1, 2, 3, 4]
    assert result['C'] == 0
    with pytest.raises(ValueError):
        binomial_estimate(PadicNumber.from_int(P, 2, N), 3)


def test_pole_branch_vanishes():
    report = pole_branch_check(5, 2, 1, 20)
    assert report['pole_branch'] == 2
    assert report['passed']
    rows = {row['i']: row for row in report['branches']}
    assert rows[2]['valuation'] >= 1
    assert rows[0]['valuation'] == 0


@pytest.mark.slow
def test_irregular_prime_zero():
    report = d_p(37, 2, 2, 30)
    assert report.has_zeros
    assert report.attaining_branch == 30
    assert report.d_T.exponent == 1
    assert report.d_s.exponent == 0
    zero_branch = next(b for b in report.branches if b.i == 30)
    assert (zero_branch.mu, zero_branch.lam) == (0, 1)
    zeros_s = [s for b in report.branches for s in b.zeros_s]
    assert report.d_s.exponent == min(s.abs_value() for s in zeros_s).exponent
    # s = (β/p)·u, u 단원
    s = zero_branch.zeros_s[0]
    assert report.unit_ratio.v == 0
    assert (report.unit_ratio * report.beta / 37).is_congruent(s)
    assert report.to_dict()['d_p']['unit_ratio']['v'] == 0


@pytest.mark.parametrize("lam", [1, 2, 3])
def test_valuation_law_at_roots_of_unity(lam):
    # (T^λ + 5T^(λ-1) + ... + 5)(1 + T)
    g = [5] * lam + [1]
    coeffs = [(a + b) % MOD for a, b in zip(g + [0], [0] + g)]
    F = PowerSeries(P, N, tuple(coeffs))
    assert evaluate_at_zeta(F, 2).valuation().exponent == Fraction(lam, 20)
    assert evaluate_at_zeta(F, 3).valuation().exponent == Fraction(lam, 100)


def test_finite_level_image_is_not_evaluated_above_its_level():
    F = PowerSeries(P, N, (1, 1, 0, 0, 0), modulus_level=2)
    assert evaluate_at_zeta(F, 1).is_congruent(evaluate_at_zeta(PowerSeries(P, N, (1, 1)), 1))
    with pytest.raises(ValueError):
        evaluate_at_zeta(F, 2)


def constructed_series(n):
    """(T^λ + 5 Σ a_j T^j)(1 + b_1 T + b_2 T^2), μ = 0, λ = 1 + n mod 3"""
    lam = 1 + n % 3
    g = [5 * ((n + j) % 4 + 1) for j in range(lam)] + [1]
    u = [1, n % 5, 2 * n % 5]
    coeffs = [0] * (len(g) + len(u) - 1)
    for a, x in enumerate(g):
        for b, y in enumerate(u):
            coeffs[a + b] += x * y
    return lam, PowerSeries(P, N, tuple(c % MOD for c in coeffs))


@pytest.mark.parametrize("n", range(20))
def test_valuation_law_on_constructed_series(n):
    lam, F = constructed_series(n)
    W = weierstrass_prepare(F)
    assert (W.mu, W.lam) == (0, lam)
    for t in range(4):
        e = (P - 1) * P ** (t - 1) if t else 1
        value = evaluate_at_zeta(F, t)
        assert not value.is_zero
        exponent = value.valuation().exponent
        if e > 3 * lam:
            assert exponent == Fraction(lam, e)
        else:
            assert 0 <= exponent <= 2


def test_pole_branch_valuation_grows_with_level():
    valuations = []
    for m in (1, 2, 3):
        report = pole_branch_check(5, 2, m, 30)
        assert report['passed']
        row = next(r for r in report['branches'] if r['pole_branch'])
        assert row['valuation'] >= m
        valuations.append(row['valuation'])
    assert valuations == sorted(valuations)
    assert valuations[0] < valuations[2]


@pytest.mark.slow
def test_irregular_prime_zero_gives_binomial_growth():
    report = d_p(37, 2, 2, 30)
    result = binomial_estimate(report.beta, 4)
    assert [row['valuation'] for row in result['rows']] == [row['predicted'] for row in result['rows']]
    assert [row['valuation'] for row in result['rows']] == [1, 2, 3, 4]
    assert result['C'] == 0


@pytest.mark.slow
@pytest.mark.parametrize("p", [59, 67, 101])
def test_irregular_primes_have_mu_zero(p):
    report = d_p(p, 2, 2, 30)
    assert all(b.mu == 0 for b in report.branches)
