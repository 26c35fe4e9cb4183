"""
Eisenstein 분포 μ*_k 와 t_m 테스트
"""
from fractions import Fraction

import pytest

from bernoulli import mazur_value
from characters import DirichletChar, units
from cyclotomic import CycloElement
from eisenstein import (
    CostGuardError, archimedean_estimate, b_chi, check_cost, eigenvalue_bounds, exact_mu_star,
    irregular_indices, matched_parity, mu_star, mu_star_element, mu_star_element_newton,
    mu_star_table, scan_irregular, t_m, tau_integrality, ultrametric_check, verify_theorem,
    xi_relation,
)
from groupring import project_level
from iwasawa import default_auxiliary
from padic import PadicNumber, rational_reconstruct, rational_valuation

N = 30


def test_matched_parity():
    assert matched_parity(2) == 1
    assert matched_parity(3) == -1


@pytest.mark.parametrize("chi, k, value", [
    (DirichletChar(5, 1, 0, 0), 2, Fraction(1, 3)),
    (DirichletChar(5, 1, 2, 0), 2, Fraction(-2, 5)),
    (DirichletChar(5, 1, 0, 0), 4, Fraction(-31, 30)),
    (DirichletChar(5, 1, 2, 0), 4, Fraction(2)),
])
def test_b_chi_values(chi, k, value):
    assert b_chi(chi, k, N).rational_part().is_congruent(PadicNumber.from_rational(5, value, N))


def test_b_chi_is_one_off_parity():
    chi = DirichletChar(5, 1, 1, 0)
    assert b_chi(chi, 2, N).is_congruent(CycloElement.one(5, 0, N))
    with pytest.raises(ValueError):
        b_chi(chi, 0, N)


def test_mu_star_level_one():
    values = [rational_reconstruct(row.value) for row in mu_star_table(5, 2, 1, N)]
    assert values == [Fraction(1, 8), Fraction(11, 8), Fraction(11, 8), Fraction(1, 8)]


def test_mu_star_single_disc():
    value = mu_star(5, 4, 1, 1, N)
    assert rational_reconstruct(value.value) == Fraction(-29, 248)
    assert value.to_dict()['b'] == 1
    assert value.abs.exponent == 0


def test_exact_mu_star():
    assert exact_mu_star(5, 4, 1) == Fraction(-29, 248)


@pytest.mark.parametrize("m", [1, 2])
def test_newton_path_agrees_with_character_sum(m):
    direct = mu_star_element(5, 2, m, N)
    assert mu_star_element_newton(5, 2, m, N, 2).is_congruent(direct)


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_regular_prime_t_m_is_zero(k, m):
    assert t_m(5, k, m, N)['t_m'] == 0


def test_xi_relation():
    report = xi_relation(5, 2, 2, N)
    assert report['passed']
    assert report['eigenvalues_match']


def test_tau_integrality():
    assert tau_integrality(5, 2, 2, N)


def test_cost_guard():
    with pytest.raises(CostGuardError):
        check_cost(5, 3, 50)
    with pytest.raises(CostGuardError):
        mu_star_element(5, 2, 3, N, max_group_order=50)


def test_irregular_indices():
    assert irregular_indices(3) == ()
    assert irregular_indices(37) == (32,)
    assert irregular_indices(59) == (44,)
    assert irregular_indices(67) == (58,)


def test_scan_irregular():
    reports = scan_irregular(150)
    irregular = {r.p: r.indices for r in reports if not r.regular}
    assert irregular == {37: (32,), 59: (44,), 67: (58,), 101: (68,), 103: (24,), 131: (22,), 149: (130,)}


def test_verify_theorem_regular():
    report = verify_theorem(5, 2, 3, N)
    assert report.verdict == 'regular-bounded'
    assert report.constant
    assert [r['t_m'] for r in report.records] == [0, 0, 0]


def test_verify_theorem_records_prediction_past_cost_limit():
    report = verify_theorem(5, 2, 3, N, max_group_order=20)
    assert report.records[2]['t_m'] is None
    assert report.verdict == 'regular-bounded'


def test_ultrametric_bound():
    assert ultrametric_check(5, 2, 2, N)['holds']


def test_eigenvalue_bounds():
    report = eigenvalue_bounds(5, 2, 1, N)
    rows = {row['i']: row for row in report['branches']}
    # 1/b_1 = 3, 1/b_{ω^2} = -5/2
    assert rows[0]['min_valuation'] == '0'
    assert rows[2]['min_valuation'] == '1'


def test_archimedean_estimate_matches_exact_value():
    row = archimedean_estimate(5, 4, 1, 1, 20000)
    assert abs(row['imag']) < 1e-9
    assert row['value'] == pytest.approx(float(Fraction(-29, 248)), abs=1e-6)


def test_archimedean_rejects_k_one():
    with pytest.raises(ValueError):
        archimedean_estimate(5, 1, 1, 1, 100)


@pytest.mark.slow
def test_irregular_prime_growth():
    report = verify_theorem(37, 2, 2, N)
    assert report.irregular
    t1, t2 = (r['t_m'] for r in report.records)
    assert t1 >= 1
    assert t2 - t1 == 1
    assert report.verdict == 'irregular-linear'
    assert report.sharp_equality


def test_mu_star_is_a_rational_distribution():
    level_two = mu_star_element(5, 2, 2, N)
    assert level_two.is_rational()
    assert project_level(level_two).is_congruent(mu_star_element(5, 2, 1, N))


def test_regular_contrast_case_p7():
    report = verify_theorem(7, 2, 3, N)
    assert report.verdict == 'regular-bounded'
    assert len({r['t_m'] for r in report.records}) == 1


@pytest.mark.slow
def test_archimedean_sum_all_discs():
    for b in range(1, 5):
        row = archimedean_estimate(5, 4, 1, b, 10 ** 6)
        exact = float(exact_mu_star(5, 4, b))
        assert abs(row['value'] - exact) <= 1e-6 * abs(exact)


@pytest.mark.slow
def test_irregular_prime_newton_path_agrees():
    direct = mu_star_element(37, 2, 2, N)
    assert mu_star_element_newton(37, 2, 2, N, default_auxiliary(37)).is_congruent(direct)


@pytest.mark.slow
def test_irregular_prime_level_projection():
    assert project_level(mu_star_element(37, 2, 2, N)).is_congruent(mu_star_element(37, 2, 1, N))


def test_mazur_measure_is_bounded():
    for m in (1, 2, 3):
        for k in (1, 2, 3, 4):
            for b in units(5, m):
                value = mazur_value(5, k, 2, b, m)
                assert value == 0 or rational_valuation(value, 5) >= 0
