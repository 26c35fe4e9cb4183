"""
p 거듭제곱 법의 디리클레 지표 모듈
χ = ω^i · χ_Γ 를 (i, j) 쌍으로 표현, χ_Γ(γ) = ζ_{p^(m-1)}^j, γ = 1 + p
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Tuple

from sympy import is_primitive_root

from padic import gamma_log_int, int_valuation, teichmuller_int
from cyclotomic import CycloElement, zeta_powers

logger = logging.getLogger(__name__)


def discrete_log_gamma(p: int, m: int, u: int) -> int:
    """γ^s ≡ u mod p^m 인 s mod p^(m-1)"""
    return gamma_log_int(p, u, m)


@lru_cache(maxsize=64)
def units(p: int, m: int) -> Tuple[int, ...]:
    """(Z/p^m)^* 원소, 정수 오름차순"""
    return tuple(b for b in range(1, p ** m) if b % p)


@lru_cache(maxsize=64)
def unit_index(p: int, m: int) -> Dict[int, int]:
    return {b: k for k, b in enumerate(units(p, m))}


@lru_cache(maxsize=64)
def gamma_logs(p: int, m: int) -> Dict[int, int]:
    """b ↦ s(b): b ≡ ω(b) γ^{s(b)} mod p^m"""
    mod = p ** m
    table = {}
    for b in units(p, m):
        omega = teichmuller_int(p, m, b % p)
        table[b] = discrete_log_gamma(p, m, b * pow(omega, -1, mod) % mod)
    return table


@lru_cache(maxsize=256)
def teichmuller_powers(p: int, N: int, i: int) -> Tuple[int, ...]:
    """ω(r)^i mod p^N, r = 0..p-1 (r = 0 자리는 0)"""
    mod = p ** N
    return (0,) + tuple(pow(teichmuller_int(p, N, r), i, mod) for r in range(1, p))


@dataclass(frozen=True)
class DirichletChar:
    """법 p^m 의 디리클레 지표 ω^i χ_Γ"""
    p: int
    m: int
    i: int
    j: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"레벨 m은 1 이상이어야 합니다: {self.m}")
        if not 0 <= self.i < self.p - 1 or not 0 <= self.j < self.p ** (self.m - 1):
            raise ValueError(f"지표 인덱스 범위 오류: (i, j) = ({self.i}, {self.j})")

    @property
    def level(self) -> int:
        """값이 놓이는 원분 레벨 t = m - 1"""
        return self.m - 1

    @property
    def is_trivial(self) -> bool:
        return self.i == 0 and self.j == 0

    @property
    def parity(self) -> int:
        """χ(-1) = (-1)^i"""
        return -1 if self.i % 2 else 1

    @property
    def gamma_order_exponent(self) -> int:
        """χ_Γ 의 위수 p^v 의 v"""
        if self.j == 0:
            return 0
        return self.m - 1 - int_valuation(self.j, self.p)

    @property
    def conductor(self) -> int:
        if self.is_trivial:
            return 1
        if self.j == 0:
            return self.p
        return self.p ** (self.m - int_valuation(self.j, self.p))

    def inverse(self) -> 'DirichletChar':
        return DirichletChar(self.p, self.m, (-self.i) % (self.p - 1), (-self.j) % self.p ** (self.m - 1))

    def conjugate(self, u: int) -> 'DirichletChar':
        """Γ 부분에 Galois 작용 σ_u"""
        return DirichletChar(self.p, self.m, self.i, self.j * u % self.p ** (self.m - 1))

    def lift(self, m: int) -> 'DirichletChar':
        """상위 레벨 법 p^m 의 지표로"""
        if m < self.m:
            raise ValueError(f"하위 레벨로 내릴 수 없습니다: {self.m} → {m}")
        return DirichletChar(self.p, m, self.i, self.j * self.p ** (m - self.m))

    def to_dict(self) -> Dict:
        return {'p': self.p, 'm': self.m, 'i': self.i, 'j': self.j,
                'conductor': self.conductor, 'parity': self.parity}


def zeta_exponent(chi: DirichletChar, a: int) -> int:
    """단원 a 에 대해 χ_Γ(a) = ζ^r 인 r"""
    b = a % chi.p ** chi.m
    return chi.j * gamma_logs(chi.p, chi.m)[b] % chi.p ** (chi.m - 1)


def evaluate(chi: DirichletChar, a: int, N: int) -> CycloElement:
    """χ(a) ∈ Z_p[ζ_{p^(m-1)}], 비단원은 도체가 1이면 1, 아니면 0"""
    p, t = chi.p, chi.level
    if a % p == 0:
        if chi.conductor == 1:
            return CycloElement.one(p, t, N)
        return CycloElement.zero(p, t, N)
    omega = teichmuller_powers(p, N, chi.i)[a % p]
    row = zeta_powers(p, t, N)[zeta_exponent(chi, a)]
    mod = p ** N
    return CycloElement.make(p, t, [omega * x % mod for x in row], N)


def enumerate_characters(p: int, m: int, parity: Optional[int] = None) -> List[DirichletChar]:
    """법 p^m 의 지표 전체, parity 가 주어지면 χ(-1) = parity 인 것만"""
    if m < 1:
        raise ValueError(f"레벨 m은 1 이상이어야 합니다: {m}")
    out = []
    for i in range(p - 1):
        if parity is not None and (-1) ** i != parity:
            continue
        for j in range(p ** (m - 1)):
            out.append(DirichletChar(p, m, i, j))
    return out


def galois_orbit(chi: DirichletChar) -> List[DirichletChar]:
    """Gal(Q_p(χ)/Q_p) 궤도, ω 부분은 고정"""
    v = chi.gamma_order_exponent
    if v == 0:
        return [chi]
    seen = {}
    for u in range(1, chi.p ** v):
        if u % chi.p:
            c = chi.conjugate(u)
            seen[c.j] = c
    return [seen[j] for j in sorted(seen)]


def orbit_representatives(p: int, m: int, parity: Optional[int] = None) -> List[DirichletChar]:
    """각 Galois 궤도의 대표 (j = p^(m-1-v) 꼴)"""
    reps = []
    for i in range(p - 1):
        if parity is not None and (-1) ** i != parity:
            continue
        reps.append(DirichletChar(p, m, i, 0))
        for v in range(1, m):
            reps.append(DirichletChar(p, m, i, p ** (m - 1 - v)))
    return reps


def is_primitive_root_mod_p2(c: int, p: int) -> bool:
    """c 가 법 p^2 의 원시근인지"""
    return gcd(c, p) == 1 and is_primitive_root(c, p * p)
