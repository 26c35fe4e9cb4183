"""
디리클레 지표 테스트
"""
import pytest
from hypothesis import given, settings, strategies as st

from characters import (
    DirichletChar, discrete_log_gamma, enumerate_characters, evaluate, galois_orbit, gamma_logs,
    is_primitive_root_mod_p2, orbit_representatives, units,
)
from cyclotomic import CycloElement
from padic import teichmuller_int

N = 10
CHARS_5_2 = enumerate_characters(5, 2)


def test_units():
    assert len(units(5, 2)) == 20
    assert units(5, 1) == (1, 2, 3, 4)


def test_gamma_logs_decompose_units():
    for b, s in gamma_logs(5, 3).items():
        assert teichmuller_int(5, 3, b % 5) * pow(6, s, 125) % 125 == b


def test_omega_of_two():
    chi = DirichletChar(5, 1, 1, 0)
    assert evaluate(chi, 2, 2).rational_part().to_integer() == 7


@pytest.mark.parametrize("chi, conductor", [
    (DirichletChar(5, 2, 0, 0), 1),
    (DirichletChar(5, 2, 1, 0), 5),
    (DirichletChar(5, 2, 0, 1), 25),
    (DirichletChar(5, 3, 0, 5), 25),
    (DirichletChar(5, 3, 3, 2), 125),
])
def test_conductor(chi, conductor):
    assert chi.conductor == conductor


def test_index_range_is_checked():
    with pytest.raises(ValueError):
        DirichletChar(5, 2, 4, 0)
    with pytest.raises(ValueError):
        DirichletChar(5, 2, 0, 5)


def test_enumeration_by_parity():
    assert len(CHARS_5_2) == 20
    even = enumerate_characters(5, 2, 1)
    assert len(even) == 10
    assert all(chi.parity == 1 for chi in even)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CHARS_5_2), st.sampled_from(units(5, 2)), st.sampled_from(units(5, 2)))
def test_multiplicative(chi, a, b):
    lhs = evaluate(chi, a * b % 25, N)
    assert lhs.is_congruent(evaluate(chi, a, N) * evaluate(chi, b, N))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CHARS_5_2), st.sampled_from(units(5, 2)))
def test_inverse_character(chi, a):
    product = evaluate(chi, a, N) * evaluate(chi.inverse(), a, N)
    assert product.is_congruent(CycloElement.one(5, 1, N))


def test_parity_matches_value_at_minus_one():
    for chi in CHARS_5_2:
        value = evaluate(chi, 24, N)
        assert value.is_congruent(CycloElement.one(5, 1, N).scale(chi.parity))


def test_lift_agrees_on_units():
    chi = DirichletChar(5, 2, 3, 2)
    lifted = chi.lift(3)
    for a in (2, 7, 13, 24, 101):
        assert evaluate(lifted, a, N).is_congruent(evaluate(chi, a, N))


def test_non_unit_value():
    assert evaluate(DirichletChar(5, 1, 0, 0), 5, N).is_congruent(CycloElement.one(5, 0, N))
    assert evaluate(DirichletChar(5, 1, 2, 0), 5, N).is_zero


def test_galois_orbits_cover_all_characters():
    assert len(galois_orbit(DirichletChar(5, 2, 0, 1))) == 4
    assert len(galois_orbit(DirichletChar(5, 3, 2, 1))) == 20
    covered = set()
    for rep in orbit_representatives(5, 3):
        covered.update(galois_orbit(rep))
    assert covered == set(enumerate_characters(5, 3))


def test_primitive_root_mod_p_squared():
    assert is_primitive_root_mod_p2(2, 5)
    assert not is_primitive_root_mod_p2(7, 5)
    assert not is_primitive_root_mod_p2(10, 5)


def test_discrete_log_round_trip():
    for s in range(49):
        assert discrete_log_gamma(7, 3, pow(8, s, 343)) == s


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CHARS_5_2), st.sampled_from(units(5, 2)), st.sampled_from([2, 3, 4, 7]))
def test_galois_action_matches_conjugate_character(chi, a, u):
    assert evaluate(chi, a, N).galois_conjugate(u).is_congruent(evaluate(chi.conjugate(u), a, N))
