"""
베르누이 수/다항식과 L-값 모듈
정확한 유리수(Fraction)로 B_k, B_k(x), μ_{B,k}, μ_{k,c} 를 계산하고
일반화 베르누이 수 B_{k,χ} 는 도체별 표를 한 번 만들어 지표마다 재사용
"""
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Dict, List, Sequence, Tuple

from sympy import divisors, isprime

from padic import check_prime, rational_valuation
from cyclotomic import CycloElement, zeta_powers
from characters import (
    DirichletChar, enumerate_characters, evaluate, gamma_logs, teichmuller_powers,
)

logger = logging.getLogger(__name__)

_bernoulli_cache: List[Fraction] = [Fraction(1)]


def bernoulli_number(k: int) -> Fraction:
    """B_k, 점화식 Σ_{j≤n} C(n+1, j) B_j = 0 (B_1 = -1/2)"""
    if k < 0:
        raise ValueError(f"k는 0 이상이어야 합니다: {k}")
    while len(_bernoulli_cache) <= k:
        n = len(_bernoulli_cache)
        total = sum(comb(n + 1, j) * _bernoulli_cache[j] for j in range(n))
        _bernoulli_cache.append(-total / (n + 1))
    return _bernoulli_cache[k]


def von_staudt_denominator(k: int) -> int:
    """짝수 k 에 대해 (q-1) | k 인 소수 q 의 곱"""
    result = 1
    for d in divisors(k):
        if isprime(d + 1):
            result *= d + 1
    return result


def bernoulli_poly(k: int, x) -> Fraction:
    """B_k(x) = Σ C(k, j) B_j x^(k-j)"""
    if k < 0:
        raise ValueError(f"k는 0 이상이어야 합니다: {k}")
    x = Fraction(x)
    return sum((comb(k, j) * bernoulli_number(j) * x ** (k - j) for j in range(k + 1)), Fraction(0))


def _check_disc(p: int, k: int, b: int, m: int) -> None:
    check_prime(p)
    if k < 1 or m < 1:
        raise ValueError(f"k, m 은 1 이상이어야 합니다: k={k}, m={m}")
    if not 0 <= b < p ** m or b % p == 0:
        raise ValueError(f"b 는 0 ≤ b < p^m 인 p와 서로소인 대표여야 합니다: b={b}")


def mu_B(p: int, k: int, b: int, m: int) -> Fraction:
    """μ_{B,k}(b + p^m Z_p) = p^(m(k-1)) B_k(b/p^m)"""
    _check_disc(p, k, b, m)
    return Fraction(p) ** (m * (k - 1)) * bernoulli_poly(k, Fraction(b, p ** m))


def mazur_value(p: int, k: int, c: int, b: int, m: int) -> Fraction:
    """μ_{k,c}(U) = (μ_{B,k}(U) - c^(-k) μ_{B,k}(cU)) / (-k)"""
    _check_disc(p, k, b, m)
    if c <= 0 or gcd(c, p) != 1:
        raise ValueError(f"보조 정수 c 는 p와 서로소인 양의 정수여야 합니다: {c}")
    cb = c * b % p ** m
    return (mu_B(p, k, b, m) - Fraction(1, c ** k) * mu_B(p, k, cb, m)) / (-k)


@lru_cache(maxsize=128)
def _conductor_table(p: int, k: int, f: int, N: int) -> Tuple[int, Tuple[int, ...]]:
    """(D, [p^D · f^(k-1) B_k(a/f) mod p^(N+D)]), 비단원 a 자리는 0"""
    values = []
    for a in range(f):
        if a % p == 0:
            values.append(Fraction(0))
        else:
            values.append(Fraction(f) ** (k - 1) * bernoulli_poly(k, Fraction(a, f)))
    vals = [rational_valuation(x, p) for x in values if x != 0]
    D = max(0, -min(vals)) if vals else 0
    mod = p ** (N + D)
    scale = Fraction(p) ** D
    table = []
    for x in values:
        y = x * scale
        table.append(y.numerator * pow(y.denominator, -1, mod) % mod if y else 0)
    return D, tuple(table)


@lru_cache(maxsize=1024)
def _conductor_buckets(p: int, k: int, f: int, m: int, i: int, N: int) -> Tuple[int, Tuple[int, ...]]:
    """Γ 로그 s(a) mod p^(m-1) 별로 모은 ω(a)^i · 표값"""
    D, table = _conductor_table(p, k, f, N)
    mod = p ** (N + D)
    omega = teichmuller_powers(p, N + D, i)
    logs = gamma_logs(p, m)
    size = p ** (m - 1)
    buckets = [0] * size
    for a in range(1, f):
        if a % p:
            s = logs[a] % size
            buckets[s] = (buckets[s] + omega[a % p] * table[a]) % mod
    return D, tuple(buckets)


def generalized_bernoulli(k: int, chi: DirichletChar, N: int) -> CycloElement:
    """B_{k,χ} = f^(k-1) Σ_{a=1}^{f} χ(a) B_k(a/f), f = 도체"""
    if k < 1:
        raise ValueError(f"k는 1 이상이어야 합니다: {k}")
    p, m, t = chi.p, chi.m, chi.level
    f = chi.conductor
    if f == 1:
        return CycloElement.from_rational(p, t, bernoulli_poly(k, 1), N)
    D, buckets = _conductor_buckets(p, k, f, m, chi.i, N)
    mod = p ** (N + D)
    zetas = zeta_powers(p, t, N + D)
    size = p ** (m - 1)
    e = len(zetas[0])
    coeffs = [0] * e
    for s, value in enumerate(buckets):
        if value:
            row = zetas[chi.j * s % size]
            for n in range(e):
                coeffs[n] += value * row[n]
    return CycloElement.make(p, t, [x % mod for x in coeffs], N + D, -D)


def l_value(k: int, chi: DirichletChar, N: int) -> CycloElement:
    """L(1-k, χ) = -B_{k,χ}/k"""
    return generalized_bernoulli(k, chi, N).scale(Fraction(-1, k))


def euler_factor(chi: DirichletChar, k: int) -> Fraction:
    """1 - χ(p) p^(k-1), χ(p) 는 도체 1 일 때만 1"""
    if chi.conductor == 1:
        return 1 - Fraction(chi.p) ** (k - 1)
    return Fraction(1)


def kubota_leopoldt(k: int, t: int, phi: DirichletChar, N: int) -> CycloElement:
    """L_p(1-k, ω^t φ) = (1 - ω^(t-k)φ(p) p^(k-1)) L(1-k, ω^(t-k)φ)"""
    if k < 1:
        raise ValueError(f"k는 1 이상이어야 합니다: {k}")
    if not 0 <= t <= phi.p - 2:
        raise ValueError(f"분지 지수 t 범위 오류: {t}")
    if phi.i != 0:
        raise ValueError("φ 는 Γ 지표(ω 지수 0)여야 합니다.")
    chi = DirichletChar(phi.p, phi.m, (t - k) % (phi.p - 1), phi.j)
    return l_value(k, chi, N).scale(euler_factor(chi, k))


def mazur_transform(k: int, c: int, chi: DirichletChar, N: int) -> CycloElement:
    """Σ_b χ(b) μ_{k,c}(b) 의 닫힌 형태 (1 - χ(c)^(-1) c^(-k)) (1 - χ(p)p^(k-1)) L(1-k, χ)"""
    chi_c_inv = evaluate(chi.inverse(), c, N)
    aux = CycloElement.one(chi.p, chi.level, N) - chi_c_inv.scale(Fraction(1, c ** k))
    return aux * l_value(k, chi, N).scale(euler_factor(chi, k))


def l_value_table(p: int, m: int, ks: Sequence[int], N: int,
                  parity_only: bool = True) -> List[Dict]:
    """(k, χ, |L(1-k, χ)|) 행 목록"""
    rows = []
    for k in ks:
        parity = (-1) ** k if parity_only else None
        for chi in enumerate_characters(p, m, parity):
            value = l_value(k, chi, N)
            rows.append({
                'k': k,
                'i': chi.i,
                'j': chi.j,
                'conductor': chi.conductor,
                'valuation': value.valuation().to_string(),
                'precision': value.absprec,
            })
    logger.info(f"L-값 표 생성 완료: p={p}, m={m}, {len(rows)}행")
    return rows
