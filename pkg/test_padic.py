"""
p진수 산술 테스트
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padic import (
    AbsValue, PadicNumber, PrecisionError, check_prime, delta_gamma_split, gamma_log,
    gamma_log_int, gamma_power, int_valuation, rational_reconstruct, rational_valuation,
    teichmuller, teichmuller_int,
)

PRIMES = st.sampled_from([3, 5, 7, 11, 37])
nonzero_fractions = st.builds(
    Fraction,
    st.integers(-1000, 1000).filter(lambda n: n != 0),
    st.integers(1, 1000),
)


def test_quarter_in_five_adics():
    x = PadicNumber.from_rational(5, Fraction(1, 4), 4)
    assert x.v == 0
    assert x.unit == 469
    assert x.digits() == [4, 3, 3, 3]


def test_valuation_of_fraction():
    x = PadicNumber.from_rational(5, Fraction(3, 25), 10)
    assert x.v == -2
    assert x.absprec == 8
    assert rational_valuation(Fraction(50, 3), 5) == 2
    assert rational_valuation(0, 5) is None


def test_zero_keeps_absolute_precision():
    z = PadicNumber.from_int(5, 0, 10)
    assert z.is_zero
    assert z.absprec == 10
    assert z.abs_value().is_zero


def test_cancellation_loses_relative_precision():
    x = PadicNumber.from_int(5, 1 + 5 ** 3, 6)
    y = PadicNumber.from_int(5, 1, 6)
    d = x - y
    assert d.v == 3
    assert d.absprec == 6


def test_division_by_indistinguishable_zero():
    x = PadicNumber.from_int(5, 1, 6)
    with pytest.raises(PrecisionError):
        x / PadicNumber.zero(5, 6)


def test_abs_value_order():
    big = AbsValue(5, Fraction(0))
    small = AbsValue(5, Fraction(1))
    assert small < big
    assert big > small
    assert AbsValue(5, None) < small
    assert (small * small).exponent == 2
    assert small.to_string() == "1/1"


@pytest.mark.parametrize("p", [1, 2, 9, 15])
def test_check_prime_rejects(p):
    with pytest.raises(ValueError):
        check_prime(p)


def test_int_valuation():
    assert int_valuation(250, 5) == 3
    with pytest.raises(ValueError):
        int_valuation(0, 5)


def test_teichmuller_of_two_mod_25():
    assert teichmuller_int(5, 2, 2) == 7


@settings(max_examples=40, deadline=None)
@given(PRIMES, st.integers(1, 10_000), st.integers(1, 12))
def test_teichmuller_is_root_of_unity(p, a, N):
    if a % p == 0:
        a += 1
    w = teichmuller(p, N, a)
    assert w.unit % p == a % p
    assert (w ** (p - 1)).is_congruent(PadicNumber.from_int(p, 1, N))


@settings(max_examples=60, deadline=None)
@given(PRIMES, nonzero_fractions, nonzero_fractions)
def test_multiplication_is_exact_on_rationals(p, a, b):
    x = PadicNumber.from_rational(p, a, 12)
    y = PadicNumber.from_rational(p, b, 12)
    assert (x * y).is_congruent(PadicNumber.from_rational(p, a * b, 12))
    assert (x / y).is_congruent(PadicNumber.from_rational(p, a / b, 12))


@settings(max_examples=60, deadline=None)
@given(PRIMES, nonzero_fractions, nonzero_fractions)
def test_ultrametric_inequality(p, a, b):
    if a + b == 0:
        return
    x = PadicNumber.from_rational(p, a, 20)
    y = PadicNumber.from_rational(p, b, 20)
    s = x + y
    assert s.abs_value() <= max(x.abs_value(), y.abs_value())


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7, 37]), nonzero_fractions)
def test_rational_reconstruction(p, a):
    x = PadicNumber.from_rational(p, a, 30)
    assert rational_reconstruct(x) == a


def test_gamma_log_inverts_gamma_power():
    u = pow(6, 7, 5 ** 6)
    assert gamma_log_int(5, u, 6) == 7
    s = gamma_log(gamma_power(5, 6, 7))
    assert s.to_integer() == 7
    assert s.absprec == 5


def test_gamma_log_rejects_non_principal_unit():
    with pytest.raises(ValueError):
        gamma_log_int(5, 2, 4)


def test_delta_gamma_split():
    x = PadicNumber.from_int(5, 17, 10)
    omega, g = delta_gamma_split(x)
    assert g.unit % 5 == 1
    assert (omega * g).is_congruent(x)


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("s", [1, "p", "2p^2"])
def test_gamma_power_valuation_law(p, s):
    s = {1: 1, "p": p, "2p^2": 2 * p * p}[s]
    assert (gamma_power(p, 12, s) - 1).v == 1 + int_valuation(s, p)


@settings(max_examples=40, deadline=None)
@given(PRIMES, st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_gamma_power_group_law(p, s, t):
    lhs = gamma_power(p, 12, s + t)
    assert lhs.is_congruent(gamma_power(p, 12, s) * gamma_power(p, 12, t))


@settings(max_examples=40, deadline=None)
@given(PRIMES, st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(1, 100))
def test_gamma_power_is_continuous(p, s, n, r):
    diff = gamma_power(p, 12, s) - gamma_power(p, 12, s + r * p ** n)
    assert diff.is_zero or diff.v >= n + 1


@settings(max_examples=40, deadline=None)
@given(PRIMES, st.integers(1, 10 ** 4), st.integers(1, 10 ** 4))
def test_teichmuller_is_multiplicative(p, a, b):
    if a % p == 0 or b % p == 0:
        return
    N = 10
    assert teichmuller_int(p, N, a * b) == teichmuller_int(p, N, a) * teichmuller_int(p, N, b) % p ** N
