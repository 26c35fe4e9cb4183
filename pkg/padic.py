"""
p진수 산술 모듈
유효숫자(v, unit mod p^N) 표현으로 Q_p 원소를 다루고 Teichmüller 리프트와 Δ × Γ 분해를 제공
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Dict, Optional, Tuple, Union

from sympy import isprime

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 30

Rational = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """작업 정밀도 안에서 0과 구별할 수 없는 값 (indistinguishable from zero)"""


def check_prime(p: int) -> int:
    """홀수 소수인지 확인"""
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise ValueError(f"p는 홀수 소수여야 합니다: {p}")
    return p


def int_valuation(n: int, p: int) -> int:
    """0이 아닌 정수의 p진 지수"""
    if n == 0:
        raise ValueError("0의 지수는 정의되지 않습니다.")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(x: Rational, p: int) -> Optional[int]:
    """유리수의 p진 지수, 0이면 None"""
    x = Fraction(x)
    if x == 0:
        return None
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


@dataclass(frozen=True)
class AbsValue:
    """|x| = p^(-exponent), exponent가 None이면 0의 절댓값"""
    p: int
    exponent: Optional[Fraction]

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def _key(self):
        # 절댓값이 클수록 작은 지수
        return float('inf') if self.exponent is None else self.exponent

    def __le__(self, other: 'AbsValue') -> bool:
        return self._key() >= other._key()

    def __lt__(self, other: 'AbsValue') -> bool:
        return self._key() > other._key()

    def __ge__(self, other: 'AbsValue') -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: 'AbsValue') -> bool:
        return self._key() < other._key()

    def __mul__(self, other: 'AbsValue') -> 'AbsValue':
        if self.is_zero or other.is_zero:
            return AbsValue(self.p, None)
        return AbsValue(self.p, self.exponent + other.exponent)

    def to_string(self) -> str:
        """지수를 "num/den" 문자열로"""
        if self.exponent is None:
            return "inf"
        return f"{self.exponent.numerator}/{self.exponent.denominator}"

    def to_dict(self) -> Dict:
        return {'p': self.p, 'exponent': self.to_string()}


@dataclass(frozen=True)
class PadicNumber:
    """
    Q_p 원소: p^v · unit, unit은 mod p^N 으로 알려진 단원
    0은 (v, unit) 없이 N에 절대 정밀도를 담는다
    """
    p: int
    N: int
    v: Optional[int] = None
    unit: Optional[int] = None

    def __post_init__(self):
        if self.unit is None:
            if self.v is not None:
                raise ValueError("0 표식에는 지수가 없어야 합니다.")
            return
        if self.N < 1:
            raise ValueError(f"정밀도는 1 이상이어야 합니다: {self.N}")
        if self.unit % self.p == 0 or not 0 <= self.unit < self.p ** self.N:
            raise ValueError(f"단원 표현이 올바르지 않습니다: {self.unit}")

    # ---- 생성자 ----

    @classmethod
    def zero(cls, p: int, absprec: int) -> 'PadicNumber':
        return cls(p, absprec)

    @classmethod
    def with_absprec(cls, p: int, value: int, absprec: int, v: int = 0) -> 'PadicNumber':
        """p^v · value 가 mod p^absprec 으로 알려졌을 때의 정규형"""
        if absprec - v <= 0 or value % p ** (absprec - v) == 0:
            return cls.zero(p, absprec)
        w = int_valuation(value, p)
        new_v = v + w
        rel = absprec - new_v
        return cls(p, rel, new_v, (value // p ** w) % p ** rel)

    @classmethod
    def from_rational(cls, p: int, x: Rational, N: int = DEFAULT_PRECISION) -> 'PadicNumber':
        """정확한 유리수를 상대 정밀도 N으로 내장"""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, N)
        v = rational_valuation(x, p)
        num = x.numerator // p ** max(int_valuation(x.numerator, p), 0)
        den = x.denominator // p ** max(int_valuation(x.denominator, p), 0)
        mod = p ** N
        return cls(p, N, v, num * pow(den, -1, mod) % mod)

    @classmethod
    def from_int(cls, p: int, n: int, N: int = DEFAULT_PRECISION) -> 'PadicNumber':
        return cls.from_rational(p, n, N)

    # ---- 속성 ----

    @property
    def is_zero(self) -> bool:
        return self.unit is None

    @property
    def absprec(self) -> int:
        """값이 알려진 절대 정밀도 (mod p^absprec)"""
        return self.N if self.unit is None else self.v + self.N

    def valuation(self) -> Optional[int]:
        return self.v

    def abs_value(self) -> AbsValue:
        if self.is_zero:
            return AbsValue(self.p, None)
        return AbsValue(self.p, Fraction(self.v))

    def digits(self) -> list:
        """단원의 base-p 자릿수 (little-endian)"""
        if self.is_zero:
            return []
        out, u = [], self.unit
        for _ in range(self.N):
            out.append(u % self.p)
            u //= self.p
        return out

    def to_dict(self) -> Dict:
        return {'p': self.p, 'v': self.v, 'digits': self.digits(), 'N': self.N}

    def to_integer(self) -> int:
        """mod p^absprec 대표 정수 (v ≥ 0 필요)"""
        if self.is_zero:
            return 0
        if self.v < 0:
            raise ValueError(f"정수가 아닌 값입니다 (v={self.v})")
        return self.p ** self.v * self.unit

    def lift(self) -> Fraction:
        """대표 유리수 p^v · unit"""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.v

    def with_precision(self, N: int) -> 'PadicNumber':
        """상대 정밀도를 N 이하로 낮춤"""
        if self.is_zero or N >= self.N:
            return self
        return PadicNumber(self.p, N, self.v, self.unit % self.p ** N)

    # ---- 산술 ----

    def _coerce(self, other) -> 'PadicNumber':
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"서로 다른 소수의 p진수입니다: {self.p}, {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            v = rational_valuation(other, self.p) or 0
            return PadicNumber.from_rational(self.p, other, max(self.N, self.absprec - v, 1))
        return NotImplemented

    def __add__(self, other) -> 'PadicNumber':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        absprec = min(self.absprec, other.absprec)
        if self.is_zero and other.is_zero:
            return PadicNumber.zero(self.p, absprec)
        if self.is_zero:
            return PadicNumber.with_absprec(self.p, other.unit, absprec, other.v)
        if other.is_zero:
            return PadicNumber.with_absprec(self.p, self.unit, absprec, self.v)
        w = min(self.v, other.v)
        total = self.unit * self.p ** (self.v - w) + other.unit * self.p ** (other.v - w)
        return PadicNumber.with_absprec(self.p, total, absprec, w)

    __radd__ = __add__

    def __neg__(self) -> 'PadicNumber':
        if self.is_zero:
            return self
        return PadicNumber(self.p, self.N, self.v, (-self.unit) % self.p ** self.N)

    def __sub__(self, other) -> 'PadicNumber':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> 'PadicNumber':
        return (-self) + other

    def __mul__(self, other) -> 'PadicNumber':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            if self.is_zero and other.is_zero:
                return PadicNumber.zero(self.p, self.absprec + other.absprec)
            z, x = (self, other) if self.is_zero else (other, self)
            return PadicNumber.zero(self.p, z.absprec + x.v)
        N = min(self.N, other.N)
        return PadicNumber(self.p, N, self.v + other.v, self.unit * other.unit % self.p ** N)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'PadicNumber':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise PrecisionError(f"나눗셈 실패: 제수가 mod {self.p}^{other.absprec} 에서 0과 구별되지 않습니다 "
                                 f"(indistinguishable from zero)")
        if self.is_zero:
            return PadicNumber.zero(self.p, self.absprec - other.v)
        N = min(self.N, other.N)
        mod = self.p ** N
        return PadicNumber(self.p, N, self.v - other.v, self.unit * pow(other.unit, -1, mod) % mod)

    def __rtruediv__(self, other) -> 'PadicNumber':
        return self._coerce(other) / self

    def __pow__(self, n: int) -> 'PadicNumber':
        if self.is_zero:
            if n <= 0:
                raise PrecisionError("0과 구별되지 않는 값의 0 이하 거듭제곱입니다.")
            return PadicNumber.zero(self.p, self.absprec * n)
        mod = self.p ** self.N
        return PadicNumber(self.p, self.N, self.v * n, pow(self.unit, n, mod))

    def is_congruent(self, other) -> bool:
        """공통 정밀도에서 같은 값인지"""
        return (self - other).is_zero

    def __repr__(self) -> str:
        if self.is_zero:
            return f"PadicNumber(0 mod {self.p}^{self.N})"
        return f"PadicNumber({self.p}^{self.v}·{self.unit} mod {self.p}^{self.absprec})"


def rational_reconstruct(x: PadicNumber) -> Fraction:
    """
    x와 합동인 높이가 가장 작은 유리수 (반 확장 유클리드)
    분자와 분모 모두 sqrt(p^N / 2) 이하일 때만 유일
    """
    if x.is_zero:
        return Fraction(0)
    mod = x.p ** x.N
    bound = isqrt(mod // 2)
    r0, r1 = mod, x.unit
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        raise ValueError(f"유리수 복원 실패: 정밀도 {x.p}^{x.N} 가 부족합니다.")
    return Fraction(r1, s1) * Fraction(x.p) ** x.v


@lru_cache(maxsize=4096)
def teichmuller_int(p: int, N: int, a: int) -> int:
    """ω(a) mod p^N, a ↦ a^p 반복이 안정될 때까지"""
    if a % p == 0:
        raise ValueError(f"Teichmüller 리프트는 단원에만 정의됩니다: {a}")
    mod = p ** N
    x = a % mod
    for _ in range(N + 1):
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y
    return x


def teichmuller(p: int, N: int, a: int) -> PadicNumber:
    """Teichmüller 대표 ω(a)"""
    if N < 1:
        raise ValueError(f"정밀도는 1 이상이어야 합니다: {N}")
    return PadicNumber(p, N, 0, teichmuller_int(p, N, a % p))


def delta_gamma_split(x: PadicNumber) -> Tuple[PadicNumber, PadicNumber]:
    """Z_p^* = Δ × Γ 분해: (ω(x), ω(x)^{-1} x)"""
    if x.is_zero or x.v != 0:
        raise ValueError("Δ × Γ 분해는 단원에만 정의됩니다.")
    omega = teichmuller(x.p, x.N, x.unit % x.p)
    return omega, x / omega


def gamma_power(p: int, N: int, s: Union[int, PadicNumber]) -> PadicNumber:
    """γ^s = (1+p)^s mod p^N"""
    if isinstance(s, PadicNumber):
        if not s.is_zero and s.v < 0:
            raise ValueError("지수 s는 Z_p 원소여야 합니다.")
        N = min(N, s.absprec + 1)
        s = s.to_integer()
    return PadicNumber.with_absprec(p, pow(1 + p, s, p ** N), N)


def gamma_log_int(p: int, u: int, n: int) -> int:
    """γ^s ≡ u mod p^n 인 s mod p^(n-1), 자릿수 단위로 결정"""
    mod = p ** n
    if u % p != 1 % p:
        raise ValueError(f"Γ 원소가 아닙니다 (u ≢ 1 mod p): {u}")
    gamma_inv = pow(1 + p, -1, mod)
    s = 0
    y = u % mod
    for k in range(n - 1):
        # y = u·γ^{-s} ≡ 1 mod p^{k+1}
        d = ((y - 1) // p ** (k + 1)) % p
        if d:
            s += d * p ** k
            y = y * pow(gamma_inv, d * p ** k, mod) % mod
    return s


def gamma_log(x: PadicNumber) -> PadicNumber:
    """γ^s = x 인 s ∈ Z_p, x의 정밀도보다 한 자리 적게"""
    if x.is_zero or x.v != 0:
        raise ValueError("gamma_log 입력은 1 + pZ_p 단원이어야 합니다.")
    s = gamma_log_int(x.p, x.unit, x.N)
    return PadicNumber.with_absprec(x.p, s, x.N - 1)
