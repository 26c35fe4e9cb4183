"""
Eisenstein 분포 μ*_k 계산 모듈
b_χ 고유값, 멜린 역변환으로 얻는 μ*_k(b + p^m Z_p), t_m, 정리 검증, 아르키메데스 교차 확인,
비정칙 소수 탐색
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import primerange

from padic import AbsValue, PadicNumber, PrecisionError, check_prime, rational_reconstruct
from cyclotomic import CycloElement
from characters import (
    DirichletChar, enumerate_characters, orbit_representatives, units,
)
from bernoulli import euler_factor, l_value
from groupring import (
    GroupRingElement, apply_character, convolve, delta, group_order, involution,
    mazur_element, mellin_invert_galois, parity_newton_inverse,
)
from iwasawa import UnsupportedInvariantsError, d_p

logger = logging.getLogger(__name__)

DEFAULT_MAX_GROUP_ORDER = 2000


class CostGuardError(RuntimeError):
    """직접 지표합 계산 한도 초과"""

    def __init__(self, message: str, order: int, limit: int):
        super().__init__(message)
        self.order = order
        self.limit = limit


def check_cost(p: int, m: int, max_group_order: int = DEFAULT_MAX_GROUP_ORDER) -> None:
    order = group_order(p, m)
    if order > max_group_order:
        raise CostGuardError(f"φ({p}^{m}) = {order} 이 한도 {max_group_order} 를 넘습니다.",
                             order, max_group_order)


def matched_parity(k: int) -> int:
    """χ(-1) = (-1)^k"""
    return -1 if k % 2 else 1


def b_chi(chi: DirichletChar, k: int, N: int) -> CycloElement:
    """b_χ = (1 - χ(p)p^(k-1)) L(1-k, χ), 패리티가 다르면 1"""
    if k < 1:
        raise ValueError(f"k는 1 이상이어야 합니다: {k}")
    if chi.parity != matched_parity(k):
        return CycloElement.one(chi.p, chi.level, N)
    value = l_value(k, chi, N).scale(euler_factor(chi, k))
    if value.is_zero:
        raise PrecisionError(f"b_χ 가 mod p^{value.absprec} 에서 0입니다: χ = (i, j) = ({chi.i}, {chi.j}), "
                             f"raise --precision")
    return value


def _reciprocal_task(args: Tuple[int, int, int, int, int, int]) -> CycloElement:
    """1 / b_{χ^{-1}}"""
    p, m, i, j, k, N = args
    return b_chi(DirichletChar(p, m, i, j).inverse(), k, N).inverse()


def _reciprocal_table(p: int, k: int, m: int, N: int, parity: Optional[int],
                      workers: int) -> Dict[DirichletChar, CycloElement]:
    reps = orbit_representatives(p, m, parity)
    tasks = [(p, m, chi.i, chi.j, k, N) for chi in reps]
    if workers > 1 and len(tasks) > 1:
        with Pool(workers) as pool:
            values = pool.map(_reciprocal_task, tasks)
    else:
        values = []
        for n, task in enumerate(tasks, 1):
            values.append(_reciprocal_task(task))
            if n % 10 == 0:
                logger.info(f"b_χ 계산 진행: {n}/{len(tasks)}")
    return dict(zip(reps, values))


@lru_cache(maxsize=32)
def _mu_star_cached(p: int, k: int, m: int, N: int, all_chars: bool, workers: int) -> GroupRingElement:
    parity = None if all_chars else matched_parity(k)
    table = _reciprocal_table(p, k, m, N, parity, workers)
    return mellin_invert_galois(p, m, table.__getitem__, enumerate_characters(p, m, parity))


def mu_star_element(p: int, k: int, m: int, N: int, workers: int = 1,
                    max_group_order: int = DEFAULT_MAX_GROUP_ORDER) -> GroupRingElement:
    """μ*_k = (1/φ(p^m)) Σ_{χ(-1)=(-1)^k} χ(b) / b_χ 를 계수로 갖는 원소"""
    check_prime(p)
    check_cost(p, m, max_group_order)
    logger.info(f"μ* 원소 계산 시작: p={p}, k={k}, m={m}, N={N}")
    return _mu_star_cached(p, k, m, N, False, workers)


def xi_element(p: int, k: int, m: int, N: int, workers: int = 1,
               max_group_order: int = DEFAULT_MAX_GROUP_ORDER) -> GroupRingElement:
    """ξ_m: 모든 χ 에 대해 apply_character(ξ_m, χ^{-1}) = 1/b_χ"""
    check_prime(p)
    check_cost(p, m, max_group_order)
    return _mu_star_cached(p, k, m, N, True, workers)


def mu_star_element_newton(p: int, k: int, m: int, N: int, c: int) -> GroupRingElement:
    """
    Mazur 원소의 패리티 역원 ψ 로부터 μ*_k = ([1] - c^(-k)[c]) * ι(ψ)
    χ(θ) = (1 - χ^{-1}(c)c^{-k}) b_χ 이므로 보조 인수를 다시 곱함
    """
    theta = mazur_element(p, k, c, m, N)
    psi = parity_newton_inverse(theta, matched_parity(k))
    aux = delta(p, m, 1, N) - delta(p, m, c, N).scale(Fraction(1, c ** k))
    return convolve(aux, involution(psi))


@dataclass
class MuStarValue:
    """μ*_k(b + p^m Z_p)"""
    p: int
    k: int
    m: int
    b: int
    value: PadicNumber
    abs: AbsValue = field(init=False)

    def __post_init__(self):
        if self.b % self.p == 0 or not 0 <= self.b < self.p ** self.m:
            raise ValueError(f"b 는 0 ≤ b < p^m 인 단원이어야 합니다: {self.b}")
        self.abs = self.value.abs_value()

    def to_dict(self) -> Dict:
        return {
            'b': self.b,
            'v': self.value.v,
            'digits': self.value.digits(),
            'precision': self.value.absprec,
            'abs': self.abs.to_string(),
        }


def mu_star(p: int, k: int, m: int, b: int, N: int, workers: int = 1) -> MuStarValue:
    element = mu_star_element(p, k, m, N, workers)
    return MuStarValue(p, k, m, b, element.coefficient(b).rational_part())


def mu_star_table(p: int, k: int, m: int, N: int, workers: int = 1) -> List[MuStarValue]:
    element = mu_star_element(p, k, m, N, workers)
    return [MuStarValue(p, k, m, b, c.rational_part()) for b, c in zip(element.units, element.coeffs)]


def _max_exponent(values: Sequence[PadicNumber]) -> Tuple[int, List[int]]:
    """(t, 인덱스): p^t = max |value|"""
    nonzero = [(x.v, n) for n, x in enumerate(values) if not x.is_zero]
    if not nonzero:
        raise PrecisionError("모든 값이 정밀도 안에서 0입니다 (raise --precision)")
    vmin = min(v for v, _ in nonzero)
    for x in values:
        if x.is_zero and x.absprec < vmin:
            raise PrecisionError(f"정밀도 부족으로 최대값을 분리할 수 없습니다: mod p^{x.absprec} (raise --precision)")
    return -vmin, [n for v, n in nonzero if v == vmin]


def t_m(p: int, k: int, m: int, N: int, workers: int = 1) -> Dict:
    """p^(t_m) = max_b |μ*_k(b + p^m Z_p)|"""
    rows = mu_star_table(p, k, m, N, workers)
    t, idx = _max_exponent([r.value for r in rows])
    return {'p': p, 'k': k, 'm': m, 't_m': t, 'attaining_b': [rows[n].b for n in idx]}


def tau_integrality(p: int, k: int, m: int, N: int, workers: int = 1) -> bool:
    """p^(t_m) ξ_m 의 계수가 모두 p-정수인지"""
    t = t_m(p, k, m, N, workers)['t_m']
    xi = xi_element(p, k, m, N, workers)
    return all(x.is_zero or x.v + t >= 0 for x in xi.rational_coefficients())


def xi_relation(p: int, k: int, m: int, N: int, workers: int = 1, check_eigenvalues: bool = True) -> Dict:
    """
    ξ_m(b) = μ*_k(b) + (1/2)(δ_{b≡1} - (-1)^k δ_{b≡-1}) 를 계수별로 확인
    check_eigenvalues 이면 apply_character(ξ_m, χ^{-1}) = 1/b_χ 도 확인
    """
    mu = mu_star_element(p, k, m, N, workers)
    xi = xi_element(p, k, m, N, workers)
    q = p ** m
    sign = -1 if k % 2 else 1
    rows = []
    for b, a, x in zip(mu.units, mu.coeffs, xi.coeffs):
        expected = Fraction(0)
        if b == 1:
            expected += Fraction(1, 2)
        if b == q - 1:
            expected -= Fraction(sign, 2)
        diff = (x - a).rational_part()
        ok = (diff - expected).is_zero
        rows.append({'b': b, 'difference': str(expected), 'match': ok})
    eigen_ok = None
    if check_eigenvalues:
        eigen_ok = True
        for chi in enumerate_characters(p, m):
            lhs = apply_character(xi, chi.inverse())
            rhs = b_chi(chi, k, N).inverse()
            if not lhs.is_congruent(rhs):
                logger.warning(f"고유값 불일치: χ = ({chi.i}, {chi.j})")
                eigen_ok = False
    passed = all(r['match'] for r in rows) and eigen_ok is not False
    return {'p': p, 'k': k, 'm': m, 'rows': rows, 'eigenvalues_match': eigen_ok, 'passed': passed}


@dataclass
class IrregularityReport:
    p: int
    indices: Tuple[int, ...]

    @property
    def regular(self) -> bool:
        return not self.indices

    def to_dict(self) -> Dict:
        return {'p': self.p, 'indices': list(self.indices), 'regular': self.regular}


def irregular_indices(p: int) -> Tuple[int, ...]:
    """p | numerator(B_k) 인 짝수 k ∈ [2, p-3], B_k mod p 점화식"""
    check_prime(p)
    top = p - 3
    if top < 2:
        return ()
    B = [1]
    for n in range(1, top + 1):
        total = sum(math.comb(n + 1, j) * B[j] for j in range(n)) % p
        B.append(-total * pow(n + 1, -1, p) % p)
    return tuple(k for k in range(2, top + 1, 2) if B[k] == 0)


def scan_irregular(p_max: int) -> List[IrregularityReport]:
    reports = [IrregularityReport(p, irregular_indices(p)) for p in primerange(3, p_max + 1)]
    logger.info(f"비정칙 소수 탐색 완료: p ≤ {p_max}, 비정칙 {sum(not r.regular for r in reports)}개")
    return reports


@dataclass
class TheoremReport:
    """t_m 의 성장과 d_p(k) 예측 비교"""
    p: int
    k: int
    irregular: bool
    records: List[Dict]
    bounded_deviation: bool
    constant: bool
    sharp_equality: Optional[bool]
    verdict: str
    d_p: Optional[Dict] = None

    def to_dict(self) -> Dict:
        return {
            'p': self.p, 'k': self.k, 'irregular': self.irregular, 'records': self.records,
            'bounded_deviation': self.bounded_deviation, 'constant': self.constant,
            'sharp_equality': self.sharp_equality, 'verdict': self.verdict, 'd_p': self.d_p,
        }


def verify_theorem(p: int, k: int, m_max: int, N: int, c: Optional[int] = None, workers: int = 1,
                   max_group_order: int = DEFAULT_MAX_GROUP_ORDER) -> TheoremReport:
    """
    정칙 p: t_m 이 상수인지, 비정칙 p: t_m - m 이 상수이고 p^(t_m) = p^(m-1)/d_T 인지
    한도를 넘는 m 은 예측값만 기록
    """
    check_prime(p)
    irregular = bool(irregular_indices(p))
    distance = None
    subtle = False
    if irregular:
        try:
            distance = d_p(p, k, 2, N, c)
        except UnsupportedInvariantsError:
            subtle = True
        if distance is not None and any(not b.supported for b in distance.branches):
            subtle = True
    records = []
    for m in range(1, m_max + 1):
        predicted = None
        if distance is not None and distance.has_zeros:
            predicted = int(m - 1 + distance.d_T.exponent)
        try:
            result = t_m(p, k, m, N, workers) if group_order(p, m) <= max_group_order else None
        except CostGuardError:
            result = None
        if result is None:
            logger.info(f"m={m}: 비용 한도 초과, 예측값만 기록")
            records.append({'m': m, 't_m': None, 'deviation': None, 'predicted': predicted})
            continue
        t = result['t_m']
        records.append({'m': m, 't_m': t, 'deviation': t - m, 'predicted': predicted,
                        'attaining_b': result['attaining_b']})
        logger.info(f"m={m}: t_m = {t}")
    computed = [r for r in records if r['t_m'] is not None]
    constant = len({r['t_m'] for r in computed}) <= 1
    bounded = len({r['deviation'] for r in computed}) <= 1
    sharp = None
    if distance is not None and distance.has_zeros:
        sharp = all(r['t_m'] == r['predicted'] for r in computed)
    if subtle:
        verdict = 'subtle'
    elif not irregular:
        verdict = 'regular-bounded' if constant else 'regular-unbounded'
    elif distance is None or not distance.has_zeros:
        verdict = 'irregular-no-zero'
    else:
        verdict = 'irregular-linear' if bounded else 'irregular-nonlinear'
    return TheoremReport(p, k, irregular, records, bounded, constant, sharp, verdict,
                         distance.to_dict() if distance is not None else None)


def _mobius_sieve(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    for q in primerange(2, n + 1):
        mu[q::q] *= -1
        mu[q * q::q * q] = 0
    return mu


def archimedean_estimate(p: int, k: int, m: int, b: int, cutoff: int) -> Dict:
    """
    (-2πi)^k / (4Γ(k)) Σ_{0<|n|≤cutoff, p∤n} μ(|n|)/n^k
        (Σ_{j=0}^{m} p^(j(k-1)-mk) e^(2πi n̄ p^j b / p^m) - p^(-m)/(1-p^(1-k)))
    n̄ = n^{-1} mod p^m, ±n 를 짝지어 합산
    """
    check_prime(p)
    if k < 2:
        raise ValueError("k = 1 은 조건수렴이므로 지원하지 않습니다 (k ≥ 2 필요)")
    if cutoff < p:
        raise ValueError(f"cutoff 는 p 이상이어야 합니다: {cutoff}")
    if b % p == 0:
        raise ValueError(f"b 는 p와 서로소여야 합니다: {b}")
    q = p ** m
    mu = _mobius_sieve(cutoff)
    n = np.arange(cutoff + 1, dtype=np.int64)
    keep = (mu != 0) & (n % p != 0)
    n, mu = n[keep], mu[keep]
    inv_table = np.zeros(q, dtype=np.int64)
    for r in units(p, m):
        inv_table[r] = pow(r, -1, q)
    nbar = inv_table[n % q]
    inner = np.full(n.shape, -(p ** -m) / (1 - p ** (1 - k)), dtype=np.complex128)
    bound = abs(p ** -m / (1 - p ** (1 - k)))
    for j in range(m + 1):
        level = p ** (m - j)
        weight = float(p) ** (j * (k - 1) - m * k)
        phase = (nbar * (b % level)) % level
        inner += weight * np.exp(2j * np.pi * phase / level)
        bound += weight
    coeff = mu / np.power(n.astype(np.float64), k)
    sign = -1 if k % 2 else 1
    paired = coeff * (inner + sign * np.conj(inner))
    prefactor = (-2j * math.pi) ** k / (4 * math.gamma(k))
    real = math.fsum(paired.real)
    imag = math.fsum(paired.imag)
    total = prefactor * complex(real, imag)
    tail = abs(prefactor) * bound * 2 * float(cutoff) ** (1 - k) / (k - 1)
    return {'p': p, 'k': k, 'm': m, 'b': b, 'cutoff': cutoff,
            'value': total.real, 'imag': total.imag, 'tail_bound': tail}


def exact_mu_star(p: int, k: int, b: int, N: int = 60) -> Fraction:
    """m = 1 의 μ*_k(b) 를 고정밀 p진 값에서 유리수로 복원"""
    value = mu_star(p, k, 1, b, N).value
    return rational_reconstruct(value)


def eigenvalue_bounds(p: int, k: int, m: int, N: int, workers: int = 1) -> Dict:
    """Teichmüller 성분별 |1/b_χ| 의 최소/최대 지수 (레벨 ≤ m 의 모든 χ)"""
    table = _reciprocal_table(p, k, m, N, matched_parity(k), workers)
    rows = {}
    for chi, value in table.items():
        exponent = value.valuation().exponent
        # 표의 값은 χ^{-1} 의 고유값
        branch = (-chi.i) % (p - 1)
        row = rows.setdefault(branch, {'i': branch, 'min_valuation': exponent, 'max_valuation': exponent})
        row['min_valuation'] = min(row['min_valuation'], exponent)
        row['max_valuation'] = max(row['max_valuation'], exponent)
    out = [{'i': r['i'], 'min_valuation': str(r['min_valuation']), 'max_valuation': str(r['max_valuation'])}
           for r in sorted(rows.values(), key=lambda r: r['i'])]
    overall_min = min(r['min_valuation'] for r in rows.values())
    overall_max = max(r['max_valuation'] for r in rows.values())
    return {'p': p, 'k': k, 'm': m, 'branches': out,
            'min_valuation': str(overall_min), 'max_valuation': str(overall_max)}


def ultrametric_check(p: int, k: int, m: int, N: int, workers: int = 1) -> Dict:
    """max_b |μ*_k(b)| ≤ max_χ |1/b_χ| · |φ(p^m)|^{-1}"""
    t = t_m(p, k, m, N, workers)['t_m']
    table = _reciprocal_table(p, k, m, N, matched_parity(k), workers)
    worst = min(value.valuation().exponent for value in table.values())
    bound = -worst + (m - 1)
    return {'p': p, 'k': k, 'm': m, 't_m': t, 'bound_exponent': str(bound), 'holds': t <= bound}
