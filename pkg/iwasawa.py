"""
Iwasawa 대수 Λ ≅ Z_p[[T]] 모듈
군환 원소의 Teichmüller 성분을 γ ↦ 1+T 로 옮긴 멱급수, Weierstrass 분해(λ, μ),
ζ-1 에서의 값, λ = 1 영점, d_p(k)
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import primitive_root

from padic import (
    AbsValue, PadicNumber, PrecisionError, Rational, check_prime, gamma_log, int_valuation,
)
from cyclotomic import CycloElement
from characters import DirichletChar, enumerate_characters, is_primitive_root_mod_p2
from groupring import GroupRingElement, gamma_branch, mazur_element, mellin_invert_galois

logger = logging.getLogger(__name__)


class TruncationError(PrecisionError):
    """T-진 절단 차수가 요청 정밀도에 못 미침"""

    def __init__(self, message: str, needed: int):
        super().__init__(message)
        self.needed = needed


class UnsupportedInvariantsError(ArithmeticError):
    """λ ≥ 2 또는 레벨 한계를 넘는 λ"""

    def __init__(self, message: str, branch: Optional[int], lam: int, mu: int):
        super().__init__(message)
        self.branch = branch
        self.lam = lam
        self.mu = mu


def gamma_to_t_basis(c: Sequence[int], mod: int) -> List[int]:
    """Σ c_s γ^s → Σ d_j T^j, d_j = Σ_s c_s C(s, j)"""
    n = len(c)
    return [sum(c[s] * comb(s, j) for s in range(j, n)) % mod for j in range(n)]


@dataclass(frozen=True)
class PowerSeries:
    """
    p^shift · Σ coeffs[j] T^j, 계수는 mod p^N
    truncated=True 이면 길이 이후 항은 미지, 아니면 다항식
    modulus_level=m 이면 (1+T)^(p^(m-1)) - 1 을 법으로 한 유한 레벨 상
    """
    p: int
    N: int
    coeffs: Tuple[int, ...]
    shift: int = 0
    modulus_level: Optional[int] = None
    truncated: bool = False

    def __post_init__(self):
        if self.N < 0:
            raise ValueError(f"정밀도는 0 이상이어야 합니다: {self.N}")
        if not self.coeffs:
            raise ValueError("계수가 비어 있습니다.")

    @classmethod
    def from_rationals(cls, p: int, values: Sequence[Rational], N: int,
                       truncated: bool = False) -> 'PowerSeries':
        """유리수 계수 다항식 (또는 절단 급수), 공통 shift 로 정규화"""
        nonzero = [Fraction(x) for x in values if Fraction(x) != 0]
        if not nonzero:
            return cls(p, 0, tuple(0 for _ in values), N, truncated=truncated)
        shift = min(int_valuation(x.numerator, p) - int_valuation(x.denominator, p) for x in nonzero)
        mod = p ** N
        coeffs = []
        for x in values:
            y = Fraction(x) / Fraction(p) ** shift
            coeffs.append(y.numerator * pow(y.denominator, -1, mod) % mod if y else 0)
        return cls(p, N, tuple(coeffs), shift, truncated=truncated)

    @property
    def M(self) -> int:
        """T-진 절단 차수"""
        return len(self.coeffs)

    @property
    def absprec(self) -> int:
        return self.shift + self.N

    @property
    def is_zero(self) -> bool:
        return self.N == 0 or not any(self.coeffs)

    def coefficient(self, j: int) -> PadicNumber:
        if j >= self.M:
            if self.truncated:
                raise TruncationError(f"T^{j} 계수는 절단 차수 {self.M} 밖입니다 (raise truncation)", j + 1)
            return PadicNumber.zero(self.p, self.absprec)
        return PadicNumber.with_absprec(self.p, self.coeffs[j], self.absprec, self.shift)

    def multiply(self, other: 'PowerSeries') -> 'PowerSeries':
        """곱, 절단 급수가 끼면 짧은 쪽 길이까지"""
        if other.p != self.p:
            raise ValueError(f"서로 다른 소수의 급수입니다: {self.p}, {other.p}")
        N = min(self.N, other.N)
        mod = self.p ** N
        truncated = self.truncated or other.truncated
        if truncated:
            n = min(self.M if self.truncated else self.M + other.M - 1,
                    other.M if other.truncated else self.M + other.M - 1)
        else:
            n = self.M + other.M - 1
        out = _series_mul(self.coeffs, other.coeffs, n, mod)
        return PowerSeries(self.p, N, tuple(out), self.shift + other.shift, truncated=truncated)

    def to_dict(self) -> Dict:
        return {
            'p': self.p, 'N': self.N, 'shift': self.shift, 'M': self.M,
            'truncated': self.truncated, 'modulus_level': self.modulus_level,
            'coeffs': list(self.coeffs),
        }


def _series_mul(a: Sequence[int], b: Sequence[int], n: int, mod: int) -> List[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[:n - i]):
                out[i + j] += x * y
    return [v % mod for v in out]


def _series_inverse(a: Sequence[int], n: int, p: int, mod: int) -> List[int]:
    """상수항이 단원인 급수의 역원 (길이 n)"""
    if a[0] % p == 0:
        raise PrecisionError("상수항이 단원이 아닌 급수는 역원을 갖지 않습니다.")
    inv0 = pow(a[0], -1, mod)
    out = [inv0]
    for k in range(1, n):
        acc = sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        out.append(-acc * inv0 % mod)
    return out


@dataclass(frozen=True)
class WeierstrassData:
    """F = p^mu · unit · distinguished, distinguished = T^lam + Σ_{i<lam} g_i T^i"""
    p: int
    mu: int
    lam: int
    distinguished: Tuple[int, ...]
    unit: Tuple[int, ...]
    precision: int
    series: PowerSeries = field(repr=False)

    def reconstruct(self) -> PowerSeries:
        """p^mu · u · g (u 의 길이까지)"""
        g = PowerSeries(self.p, self.precision, self.distinguished + (1,))
        u = PowerSeries(self.p, self.precision, self.unit, truncated=True)
        prod = g.multiply(u)
        return PowerSeries(self.p, prod.N, prod.coeffs, self.mu, truncated=True)

    def to_dict(self) -> Dict:
        return {'mu': self.mu, 'lambda': self.lam, 'distinguished': list(self.distinguished) + [1],
                'precision': self.precision}


def branch_series(theta: GroupRingElement, i: int) -> PowerSeries:
    """e_{ω^i} θ 의 Γ_m 좌표를 γ ↦ 1+T 로 옮긴 급수, (1+T)^(p^(m-1)) - 1 을 법으로"""
    p = theta.p
    if not 0 <= i < p - 1:
        raise ValueError(f"ω 지수 범위 오류: {i}")
    S, N, c = gamma_branch(theta, i)
    mod = p ** N if N > 0 else 1
    return PowerSeries(p, max(N, 0), tuple(gamma_to_t_basis(c, mod)), S, modulus_level=theta.m)


def truncate(F: PowerSeries, M: Optional[int]) -> PowerSeries:
    """T^M 이후 항을 버린 절단 급수 (M 이 없거나 충분하면 그대로)"""
    if M is None or M >= F.M:
        return F
    if M < 1:
        raise ValueError(f"절단 차수는 1 이상이어야 합니다: {M}")
    return PowerSeries(F.p, F.N, F.coeffs[:M], F.shift, truncated=True)


def weierstrass_prepare(F: PowerSeries) -> WeierstrassData:
    """
    p^(-μ) F = P_low + T^λ U 에서 q ← U^{-1}(1 - τ(q P_low)) 를 고정점까지 반복
    g = T^λ + (q P_low)_{<λ}, u = q^{-1}
    """
    p = F.p
    if F.is_zero:
        raise PrecisionError(f"Weierstrass 분해 실패: 급수가 mod p^{F.absprec} 에서 0입니다 "
                             f"(indistinguishable from zero)")
    drop = min(int_valuation(a, p) for a in F.coeffs if a)
    mu = F.shift + drop
    nw = F.N - drop
    mod = p ** nw
    G = [a // p ** drop % mod for a in F.coeffs]
    lam = next(j for j, a in enumerate(G) if a % p)
    if F.modulus_level is not None and lam >= p ** (F.modulus_level - 1):
        raise UnsupportedInvariantsError(
            f"λ = {lam} 이 레벨 {F.modulus_level} 에서 신뢰 가능한 범위 p^(m-1) 를 넘습니다.", None, lam, mu)
    if F.truncated:
        L = len(G)
        precision = min(nw, (L - lam) // lam) if lam else nw
        if precision <= 0:
            raise TruncationError(f"λ = {lam} 분해에 절단 차수 {L} 이 부족합니다 (raise truncation)",
                                  lam * (nw + 1) + lam)
    else:
        L = max(len(G), lam * (nw + 2) + lam + 1)
        G = G + [0] * (L - len(G))
        precision = nw
    low = G[:lam]
    n = L - lam
    u_inv = _series_inverse(G[lam:], n, p, mod)
    q = u_inv
    for _ in range(nw + 2):
        prod = _series_mul(low, q, n + lam, mod) if lam else [0] * (n + lam)
        rhs = [(1 - prod[lam]) % mod] + [(-x) % mod for x in prod[lam + 1:lam + n]]
        q_next = _series_mul(u_inv, rhs, n, mod)
        if q_next == q:
            break
        q = q_next
    g = tuple(x % p ** precision for x in _series_mul(low, q, lam, mod)) if lam else ()
    unit = _series_inverse(q, n, p, mod)
    out_mod = p ** precision
    logger.debug(f"Weierstrass 분해: μ={mu}, λ={lam}, 정밀도 {precision}")
    return WeierstrassData(p, mu, lam, g, tuple(x % out_mod for x in unit), precision, F)


def evaluate_at_zeta(F: PowerSeries, t: int, u: int = 1) -> CycloElement:
    """F(ζ_{p^t}^u - 1) ∈ Q_p(ζ_{p^t}), 유한 레벨 상은 t ≤ m-1 에서만 정해짐"""
    p = F.p
    if F.modulus_level is not None and t > F.modulus_level - 1:
        raise ValueError(f"레벨 {F.modulus_level} 상은 ζ_(p^{t}) 에서 값이 정해지지 않습니다 (t ≤ {F.modulus_level - 1})")
    exact = not F.truncated or (F.modulus_level is not None and t <= F.modulus_level - 1)
    if F.N == 0:
        return CycloElement.zero(p, t, F.absprec)
    N = F.N
    if not exact:
        e = (p - 1) * p ** (t - 1) if t else 1
        if t and F.M // e < N:
            raise TruncationError(
                f"절단 차수 M={F.M} 로는 레벨 {t} 에서 {N} 자리를 보장할 수 없습니다 "
                f"(raise truncation: M ≥ {N * e} 필요)", N * e)
    acc = CycloElement.zero(p, t, N)
    for d in reversed(F.coeffs):
        acc = acc.mul_pi() + CycloElement.make(p, t, [d], N)
    if F.shift:
        acc = acc.scale(Fraction(p) ** F.shift)
    if u % p ** max(t, 1) != 1 and t > 0:
        acc = acc.galois_conjugate(u)
    return acc


def evaluate_branch(theta: GroupRingElement, i: int, phi: DirichletChar) -> CycloElement:
    """branch_series(θ, i) 를 φ(γ) - 1 에서 평가 (φ 는 ω 지수 0 인 Γ 지표)"""
    if phi.i != 0:
        raise ValueError("φ 는 Γ 지표(ω 지수 0)여야 합니다.")
    if phi.m < theta.m:
        phi = phi.lift(theta.m)
    v = phi.gamma_order_exponent
    F = branch_series(theta, i)
    value = evaluate_at_zeta(F, v, phi.j // theta.p ** (theta.m - 1 - v) if v else 1)
    return value.raise_level(theta.m - 1)


def evaluate_at(F: PowerSeries, x: PadicNumber) -> PadicNumber:
    """F(x), 절단 급수는 |x| < 1 필요"""
    if x.p != F.p:
        raise ValueError(f"서로 다른 소수입니다: {x.p}, {F.p}")
    p = F.p
    if F.truncated:
        if x.is_zero:
            w = x.absprec
        else:
            w = x.v
        if w < 1:
            raise ValueError("절단 급수는 |x| < 1 에서만 평가할 수 있습니다.")
        cap = F.shift + F.M * w
    else:
        cap = None
    acc = PadicNumber.zero(p, F.absprec)
    for j in range(F.M - 1, -1, -1):
        acc = acc * x + F.coefficient(j)
    if cap is not None and acc.absprec > cap:
        if acc.is_zero:
            return PadicNumber.zero(p, cap)
        if acc.v >= cap:
            return PadicNumber.zero(p, cap)
        acc = acc.with_precision(cap - acc.v)
    return acc


def newton_zero(W: WeierstrassData) -> PadicNumber:
    """λ = 1 일 때 T - β 의 β, 급수 자체의 Newton 반복과 교차 확인"""
    if W.lam != 1:
        raise UnsupportedInvariantsError(f"λ = {W.lam}: 영점 계산은 λ = 1 만 지원합니다.", None, W.lam, W.mu)
    p = W.p
    beta = PadicNumber.with_absprec(p, -W.distinguished[0] % p ** W.precision, W.precision)
    F = W.series
    drop = W.mu - F.shift
    nw = F.N - drop
    G = [a // p ** drop % p ** nw for a in F.coeffs]
    mod = p ** nw
    x = 0
    for _ in range(nw.bit_length() + 3):
        value = deriv = 0
        for j in range(len(G) - 1, -1, -1):
            deriv = (deriv * x + value) % mod
            value = (value * x + G[j]) % mod
        step = value * pow(deriv, -1, mod) % mod
        if step == 0:
            break
        x = (x - step) % mod
    limit = min(nw, W.precision)
    if F.truncated:
        limit = min(limit, len(G))
    if (x - beta.to_integer()) % p ** limit:
        raise PrecisionError(f"Newton 영점과 구별다항식 영점이 mod p^{limit} 에서 다릅니다.")
    return PadicNumber.with_absprec(p, x, limit)


@dataclass
class BranchReport:
    """Teichmüller 성분 하나의 불변량과 영점"""
    i: int
    mu: int
    lam: int
    zeros_T: List[PadicNumber]
    zeros_s: List[PadicNumber]
    supported: bool = True

    def to_dict(self) -> Dict:
        return {
            'i': self.i, 'mu': self.mu, 'lambda': self.lam, 'supported': self.supported,
            'zeros_T': [z.to_dict() for z in self.zeros_T],
            'zeros_s': [z.to_dict() for z in self.zeros_s],
        }


@dataclass
class DistanceReport:
    """d_p(k): 1-k 에서 가장 가까운 영점까지의 거리"""
    p: int
    k: int
    level: int
    c: int
    branches: List[BranchReport]
    d_T: Optional[AbsValue]
    d_s: Optional[AbsValue]
    attaining_branch: Optional[int]
    beta: Optional[PadicNumber]
    unit_ratio: Optional[PadicNumber] = None

    @property
    def has_zeros(self) -> bool:
        return self.attaining_branch is not None

    def to_dict(self) -> Dict:
        return {
            'p': self.p, 'level': self.level, 'c': self.c,
            'branches': [b.to_dict() for b in self.branches],
            'd_p': {
                'k': self.k,
                'value': self.d_T.to_string() if self.d_T else None,
                'value_T': self.d_T.to_string() if self.d_T else None,
                'value_s': self.d_s.to_string() if self.d_s else None,
                'attaining_branch': self.attaining_branch,
                'unit_ratio': self.unit_ratio.to_dict() if self.unit_ratio is not None else None,
                'status': 'zero' if self.has_zeros else 'no zeros',
            },
        }


def default_auxiliary(p: int) -> int:
    """법 p^2 의 가장 작은 원시근"""
    return primitive_root(p * p)


def d_p(p: int, k: int, m: int = 2, N: int = 30, c: Optional[int] = None,
        truncation: Optional[int] = None) -> DistanceReport:
    """
    Mazur 원소의 패리티가 맞는 성분(극 성분 i ≡ -k 제외)에서 λ = 1 영점 β 를 찾아
    d_T = |β|, d_s = |log(1+β)/log κ| 를 보고
    """
    check_prime(p)
    if m < 2:
        raise ValueError("영점 탐지는 레벨 m ≥ 2 가 필요합니다.")
    c = default_auxiliary(p) if c is None else c
    if not is_primitive_root_mod_p2(c, p):
        raise ValueError(f"c = {c} 는 법 {p}^2 의 원시근이 아닙니다.")
    theta = mazur_element(p, k, c, m, N)
    pole = (-k) % (p - 1)
    branches = []
    best: Optional[Tuple[AbsValue, int, PadicNumber]] = None
    for i in range(p - 1):
        if (i - k) % 2 or i == pole:
            continue
        F = truncate(branch_series(theta, i), truncation)
        try:
            W = weierstrass_prepare(F)
        except UnsupportedInvariantsError as e:
            branches.append(BranchReport(i, e.mu, e.lam, [], [], supported=False))
            continue
        if W.lam == 0:
            branches.append(BranchReport(i, W.mu, 0, [], []))
            continue
        if W.lam >= 2 or W.mu > 0:
            logger.warning(f"ω^{i} 성분: λ={W.lam}, μ={W.mu} 는 지원하지 않는 불변량입니다.")
            branches.append(BranchReport(i, W.mu, W.lam, [], [], supported=False))
            continue
        beta = newton_zero(W)
        # 유한 레벨 영점은 mod p^(v(β)+m-1) 까지만 참 영점과 일치
        limit = beta.v + m - 1 if not beta.is_zero else beta.absprec
        beta = PadicNumber.with_absprec(p, beta.to_integer(), min(beta.absprec, limit))
        s = gamma_log(beta + 1)
        branches.append(BranchReport(i, W.mu, 1, [beta], [s]))
        logger.info(f"ω^{i} 성분에서 λ=1 영점 발견: |β| = {beta.abs_value().to_string()}")
        if best is None or beta.abs_value() < best[0]:
            best = (beta.abs_value(), i, beta)
    if best is None:
        return DistanceReport(p, k, m, c, branches, None, None, None, None)
    d_T, branch, beta = best
    d_s = min(s.abs_value() for b in branches for s in b.zeros_s)
    # s = (β/p)·u, u = p·log(1+β)/(β·log κ)
    s = next(b.zeros_s[0] for b in branches if b.i == branch)
    ratio = None if s.is_zero else s * p / beta
    return DistanceReport(p, k, m, c, branches, d_T, d_s, branch, beta, ratio)


def binomial_estimate(beta: PadicNumber, m_max: int) -> Dict:
    """v((1+β)^(p^(m-1)) - 1), m ≤ m_max, 그리고 v ≥ m - C 인 최소 C"""
    if beta.is_zero or beta.v < 1:
        raise ValueError("β 는 pZ_p 의 0 아닌 원소여야 합니다.")
    p = beta.p
    rows = []
    C = None
    x = 1 + beta.to_integer()
    for m in range(1, m_max + 1):
        # x^(p^(m-1)) 는 mod p^(absprec+m-1) 로 결정됨
        mod = p ** (beta.absprec + m - 1)
        value = (pow(x, p ** (m - 1), mod) - 1) % mod
        if value == 0:
            raise PrecisionError(f"m={m}: β 의 정밀도가 부족합니다 (mod p^{beta.absprec})")
        v = int_valuation(value, p)
        rows.append({'m': m, 'valuation': v, 'predicted': beta.v + m - 1})
        C = m - v if C is None else max(C, m - v)
    return {'p': p, 'beta_valuation': beta.v, 'rows': rows, 'C': C}


def pole_branch_check(p: int, k: int, m: int = 2, N: int = 30) -> Dict:
    """
    1/b_χ 로 만든 원소의 각 성분을 T* = κ^(-k) - 1 에서 평가
    i ≡ -k 성분은 |·| ≤ p^(-(m + v_p(k))), 나머지는 강제 소멸 없음
    """
    from eisenstein import b_chi
    check_prime(p)
    parity = -1 if k % 2 else 1
    chars = enumerate_characters(p, m, parity)
    xi = mellin_invert_galois(p, m, lambda chi: b_chi(chi, k, N).inverse(), chars)
    kappa = PadicNumber.from_int(p, 1 + p, N + m + 2)
    point = kappa ** (-k) - 1
    pole = (-k) % (p - 1)
    floor = m + int_valuation(k, p)
    rows = []
    for i in range(p - 1):
        if (-1) ** i != parity:
            continue
        value = evaluate_at(branch_series(xi, i), point)
        bound = value.absprec if value.is_zero else value.v
        rows.append({
            'i': i,
            'pole_branch': i == pole,
            'valuation': bound,
            'exact': not value.is_zero,
            'vanishes': bound >= floor,
        })
    passed = all(r['vanishes'] for r in rows if r['pole_branch'])
    logger.info(f"극 성분 확인 p={p}, k={k}, m={m}: {'통과' if passed else '실패'}")
    return {'p': p, 'k': k, 'm': m, 'pole_branch': pole, 'floor': floor, 'branches': rows, 'passed': passed}
