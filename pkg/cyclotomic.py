"""
원분체 Q_p(ζ_{p^t}) 산술 모듈
π = ζ - 1 에 대한 아이젠슈타인 표현으로 값을 저장하여 지수(valuation)를 정확히 읽어냄
"""
import os
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from padic import (
    AbsValue, PadicNumber, PrecisionError, Rational, int_valuation, rational_valuation,
)

logger = logging.getLogger(__name__)

_cache_dir = os.getenv('EISENSTEIN_CACHE_DIR', os.path.join('.cache', 'cyclotomic'))
_minpoly_memo: Dict[Tuple[int, int], Tuple[int, ...]] = {}


class NotRationalError(ValueError):
    """π 성분이 정밀도 안에서 사라지지 않는 원소"""

    def __init__(self, message: str, valuation: int):
        super().__init__(message)
        self.valuation = valuation


def set_cache_dir(path: Optional[str]) -> None:
    """최소다항식 캐시 디렉토리 변경"""
    global _cache_dir
    if path:
        _cache_dir = path


def ramification_index(p: int, t: int) -> int:
    """e = [Q_p(ζ_{p^t}) : Q_p]"""
    return 1 if t == 0 else (p - 1) * p ** (t - 1)


def _compute_minimal_polynomial(p: int, t: int) -> Tuple[int, ...]:
    if t == 0:
        return (0,)
    q = p ** (t - 1)
    e = ramification_index(p, t)
    # Φ_{p^t}(1+π) = Σ_k (1+π)^{kq}
    return tuple(sum(comb(k * q, i) for k in range(p)) for i in range(e))


def _cache_path(cache_dir: str, p: int, t: int) -> str:
    return os.path.join(cache_dir, f"minpoly_{p}_{t}.txt")


def _read_cached(path: str, p: int, t: int) -> Optional[Tuple[int, ...]]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = [line.strip() for line in f if line.strip()]
    except OSError:
        return None
    e = ramification_index(p, t)
    if not lines or lines[0] != f"# {p} {t}" or len(lines) != e + 2:
        logger.warning(f"캐시 형식 불일치, 재생성: {path}")
        return None
    try:
        values = [int(x) for x in lines[1:]]
    except ValueError:
        return None
    if values[-1] != 1:
        return None
    return tuple(values[:-1])


def minimal_polynomial(p: int, t: int, cache_dir: Optional[str] = None) -> Tuple[int, ...]:
    """
    π의 최소다항식 하위 계수 (c_0, ..., c_{e-1}), 최고차 계수 1은 생략
    디스크 캐시 형식: 첫 줄 "# p t", 이후 c_0 ... c_{e-1}, 1 을 한 줄에 하나씩 십진수로
    """
    key = (p, t)
    if key in _minpoly_memo:
        return _minpoly_memo[key]
    if t == 0:
        _minpoly_memo[key] = (0,)
        return (0,)
    directory = cache_dir or _cache_dir
    path = _cache_path(directory, p, t)
    coeffs = _read_cached(path, p, t)
    if coeffs is None:
        coeffs = _compute_minimal_polynomial(p, t)
        try:
            os.makedirs(directory, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                f.write(f"# {p} {t}\n")
                for c in coeffs:
                    f.write(f"{c}\n")
                f.write("1\n")
            logger.info(f"최소다항식 캐시 저장: {path}")
        except OSError as e:
            logger.warning(f"최소다항식 캐시 저장 실패: {e}")
    _minpoly_memo[key] = coeffs
    return coeffs


# ---- 계수열 연산 ----

def _reduce(values: List[int], c: Sequence[int], e: int, mod: Optional[int]) -> List[int]:
    r = list(values) + [0] * max(0, e - len(values))
    for n in range(len(r) - 1, e - 1, -1):
        top = r[n] % mod if mod else r[n]
        if top:
            base = n - e
            for i, ci in enumerate(c):
                if ci:
                    r[base + i] -= top * ci
    out = r[:e]
    return [x % mod for x in out] if mod else out


def _mul(a: Sequence[int], b: Sequence[int], c: Sequence[int], e: int, mod: Optional[int]) -> List[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    return _reduce(prod, c, e, mod)


def _one(e: int) -> List[int]:
    return [1] + [0] * (e - 1)


def _pow(a: Sequence[int], n: int, c: Sequence[int], e: int, mod: int) -> List[int]:
    result, base = _one(e), list(a)
    while n:
        if n & 1:
            result = _mul(result, base, c, e, mod)
        base = _mul(base, base, c, e, mod)
        n >>= 1
    return result


def _horner(coeffs: Sequence[int], image: Sequence[int], c: Sequence[int], e: int, mod: int) -> List[int]:
    r = [0] * e
    for a in reversed(coeffs):
        r = _mul(r, image, c, e, mod)
        r[0] = (r[0] + a) % mod
    return r


@lru_cache(maxsize=256)
def zeta_powers(p: int, t: int, N: int) -> Tuple[Tuple[int, ...], ...]:
    """ζ^r (0 ≤ r < p^t) 의 π 계수, mod p^N"""
    e = ramification_index(p, t)
    if t == 0:
        return ((1,),)
    c = minimal_polynomial(p, t)
    mod = p ** N
    rows, cur = [], _one(e)
    for _ in range(p ** t):
        rows.append(tuple(cur))
        # (1+π)·cur
        nxt = [cur[0]] + [cur[i] + cur[i - 1] for i in range(1, e)] + [cur[e - 1]]
        cur = _reduce(nxt, c, e, mod)
    return tuple(rows)


def _ramanujan(p: int, t: int, n: int) -> int:
    q = p ** t
    if n % q == 0:
        return (p - 1) * p ** (t - 1)
    if n % (q // p) == 0:
        return -(q // p)
    return 0


@lru_cache(maxsize=64)
def trace_matrix(p: int, t: int) -> Tuple[Tuple[int, ...], ...]:
    """Tr(ζ^r π^i) 표, 행 r (0 ≤ r < p^t), 열 i (0 ≤ i < e)"""
    if t == 0:
        return ((1,),)
    e = ramification_index(p, t)
    q = p ** t
    ram = [_ramanujan(p, t, n) for n in range(q + e)]
    binom = [[comb(i, l) * (-1) ** (i - l) for l in range(i + 1)] for i in range(e)]
    rows = []
    for r in range(q):
        rows.append(tuple(sum(b * ram[(r + l) % q] for l, b in enumerate(binom[i])) for i in range(e)))
    return tuple(rows)


@lru_cache(maxsize=256)
def _pi_image(p: int, t: int, u: int, t_target: int, N: int) -> Tuple[int, ...]:
    """(1+π')^(u·p^(t_target-t)) - 1 의 계수, 레벨 t_target"""
    e = ramification_index(p, t_target)
    c = minimal_polynomial(p, t_target)
    mod = p ** N
    zeta = [1, 1] + [0] * (e - 2) if e > 1 else [1]
    img = _pow(zeta, u * p ** (t_target - t), c, e, mod)
    img[0] = (img[0] - 1) % mod
    return tuple(img)


@dataclass(frozen=True)
class CycloElement:
    """
    Q_p(ζ_{p^t}) 원소: p^shift · Σ a_i π^i, 계수는 mod p^N
    0은 N = 0, shift = 절대 정밀도로 표현
    """
    p: int
    t: int
    N: int
    shift: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != ramification_index(self.p, self.t):
            raise ValueError(f"계수 길이가 e={ramification_index(self.p, self.t)} 와 다릅니다: {len(self.coeffs)}")

    # ---- 생성자 ----

    @classmethod
    def make(cls, p: int, t: int, coeffs: Sequence[int], N: int, shift: int = 0) -> 'CycloElement':
        """계수를 mod p^N 으로 줄이고 공통 p 인수를 shift 로 빼낸 정규형"""
        e = ramification_index(p, t)
        if N <= 0:
            return cls.zero(p, t, shift + N)
        mod = p ** N
        cs = [x % mod for x in coeffs] + [0] * (e - len(coeffs))
        if not any(cs):
            return cls.zero(p, t, shift + N)
        while all(x % p == 0 for x in cs):
            cs = [x // p for x in cs]
            shift += 1
            N -= 1
        return cls(p, t, N, shift, tuple(cs))

    @classmethod
    def zero(cls, p: int, t: int, absprec: int) -> 'CycloElement':
        return cls(p, t, 0, absprec, (0,) * ramification_index(p, t))

    @classmethod
    def from_rational(cls, p: int, t: int, x: Rational, N: int) -> 'CycloElement':
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, t, N)
        return cls.from_padic(PadicNumber.from_rational(p, x, N), t)

    @classmethod
    def from_padic(cls, x: PadicNumber, t: int = 0) -> 'CycloElement':
        e = ramification_index(x.p, t)
        if x.is_zero:
            return cls.zero(x.p, t, x.absprec)
        return cls(x.p, t, x.N, x.v, (x.unit,) + (0,) * (e - 1))

    @classmethod
    def one(cls, p: int, t: int, N: int) -> 'CycloElement':
        return cls.from_rational(p, t, 1, N)

    @classmethod
    def pi(cls, p: int, t: int, N: int) -> 'CycloElement':
        """π = ζ - 1"""
        if t == 0:
            return cls.zero(p, 0, N)
        e = ramification_index(p, t)
        return cls.make(p, t, [0, 1] + [0] * (e - 2), N)

    @classmethod
    def zeta_power(cls, p: int, t: int, r: int, N: int) -> 'CycloElement':
        """ζ_{p^t}^r"""
        return cls.make(p, t, zeta_powers(p, t, N)[r % p ** t], N)

    # ---- 속성 ----

    @property
    def e(self) -> int:
        return ramification_index(self.p, self.t)

    @property
    def is_zero(self) -> bool:
        return self.N == 0 or not any(self.coeffs)

    @property
    def absprec(self) -> int:
        return self.shift + self.N

    @property
    def unit_index(self) -> int:
        """단원 계수를 갖는 첫 번째 π 지수 (정규형에서 지수를 결정)"""
        for i, a in enumerate(self.coeffs):
            if a % self.p:
                return i
        raise PrecisionError("0과 구별되지 않는 원소입니다 (indistinguishable from zero)")

    def valuation(self) -> AbsValue:
        """|x| = p^(-(shift + j/e))"""
        if self.is_zero:
            return AbsValue(self.p, None)
        return AbsValue(self.p, Fraction(self.shift * self.e + self.unit_index, self.e))

    def _minpoly(self) -> Tuple[int, ...]:
        return minimal_polynomial(self.p, self.t)

    # ---- 산술 ----

    def _align(self, other) -> Tuple['CycloElement', 'CycloElement']:
        if isinstance(other, (int, Fraction)):
            v = rational_valuation(other, self.p) or 0
            other = CycloElement.from_rational(self.p, self.t, other, max(self.absprec - v, 1))
        elif isinstance(other, PadicNumber):
            other = CycloElement.from_padic(other, 0)
        if not isinstance(other, CycloElement):
            raise TypeError(f"CycloElement 와 연산할 수 없는 값입니다: {type(other)}")
        if other.p != self.p:
            raise ValueError(f"서로 다른 소수의 원소입니다: {self.p}, {other.p}")
        if other.t < self.t:
            other = other.raise_level(self.t)
        elif other.t > self.t:
            return self.raise_level(other.t), other
        return self, other

    def __add__(self, other) -> 'CycloElement':
        x, y = self._align(other)
        absprec = min(x.absprec, y.absprec)
        if x.is_zero:
            return CycloElement.make(y.p, y.t, y.coeffs, absprec - y.shift, y.shift)
        if y.is_zero:
            return CycloElement.make(x.p, x.t, x.coeffs, absprec - x.shift, x.shift)
        s = min(x.shift, y.shift)
        fx, fy = x.p ** (x.shift - s), x.p ** (y.shift - s)
        coeffs = [a * fx + b * fy for a, b in zip(x.coeffs, y.coeffs)]
        return CycloElement.make(x.p, x.t, coeffs, absprec - s, s)

    __radd__ = __add__

    def __neg__(self) -> 'CycloElement':
        if self.is_zero:
            return self
        mod = self.p ** self.N
        return CycloElement(self.p, self.t, self.N, self.shift, tuple((-a) % mod for a in self.coeffs))

    def __sub__(self, other) -> 'CycloElement':
        x, y = self._align(other)
        return x + (-y)

    def __rsub__(self, other) -> 'CycloElement':
        return (-self) + other

    def __mul__(self, other) -> 'CycloElement':
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        x, y = self._align(other)
        if x.is_zero or y.is_zero:
            if x.is_zero and y.is_zero:
                return CycloElement.zero(x.p, x.t, x.absprec + y.absprec)
            z, w = (x, y) if x.is_zero else (y, x)
            return CycloElement.zero(x.p, x.t, z.absprec + w.shift)
        N = min(x.N, y.N)
        coeffs = _mul(x.coeffs, y.coeffs, x._minpoly(), x.e, x.p ** N)
        return CycloElement.make(x.p, x.t, coeffs, N, x.shift + y.shift)

    __rmul__ = __mul__

    def scale(self, r: Rational) -> 'CycloElement':
        """유리수 배"""
        r = Fraction(r)
        if r == 0:
            return CycloElement.zero(self.p, self.t, self.absprec)
        if self.is_zero:
            return CycloElement.zero(self.p, self.t, self.absprec + rational_valuation(r, self.p))
        u = PadicNumber.from_rational(self.p, r, self.N)
        mod = self.p ** self.N
        return CycloElement(self.p, self.t, self.N, self.shift + u.v,
                            tuple(a * u.unit % mod for a in self.coeffs))

    def mul_pi(self) -> 'CycloElement':
        """π 곱"""
        if self.t == 0:
            return CycloElement.zero(self.p, 0, self.absprec)
        if self.is_zero:
            return self
        shifted = [0] + list(self.coeffs)
        coeffs = _reduce(shifted, self._minpoly(), self.e, self.p ** self.N)
        return CycloElement.make(self.p, self.t, coeffs, self.N, self.shift)

    def inverse(self) -> 'CycloElement':
        """
        x = p^s π^j U 로 쓰고 U 는 Newton 반복 y ← y(2 - Uy) 로 역원을 구함
        π^{-1} = -Q/p, Q = (π^e + ... + c_1 π)/π
        """
        if self.is_zero:
            raise PrecisionError(f"역원 계산 실패: mod p^{self.absprec} 에서 0과 구별되지 않습니다 "
                                 f"(indistinguishable from zero)")
        p, e, N = self.p, self.e, self.N
        if self.t == 0:
            mod = p ** N
            return CycloElement(p, 0, N, -self.shift, (pow(self.coeffs[0], -1, mod),))
        c = self._minpoly()
        j = self.unit_index
        if j == 0:
            return CycloElement.make(p, self.t, _unit_inverse(self.coeffs, c, e, p, N), N, -self.shift)
        neg_q = [-c[i + 1] for i in range(e - 1)] + [-1]
        work = p ** (N + 2 * j + 1)
        y = list(self.coeffs)
        for _ in range(j):
            y = _mul(y, neg_q, c, e, work)
        if any(a % p ** j for a in y):
            raise PrecisionError("π 나눗셈이 정확하지 않습니다 (정밀도 부족)")
        unit = [a // p ** j for a in y]
        w = _unit_inverse(unit, c, e, p, N + j)
        r = w
        for _ in range(j):
            r = _mul(r, neg_q, c, e, p ** (N + j))
        n_r = N + j - (2 if 2 * j >= e else 1)
        return CycloElement.make(p, self.t, r, n_r, -self.shift - j)

    def __truediv__(self, other) -> 'CycloElement':
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        x, y = self._align(other)
        return x * y.inverse()

    def __rtruediv__(self, other) -> 'CycloElement':
        return self.inverse() * other

    def __pow__(self, n: int) -> 'CycloElement':
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloElement.one(self.p, self.t, max(self.N, 1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_congruent(self, other) -> bool:
        return (self - other).is_zero

    # ---- 체 연산 ----

    def raise_level(self, t_target: int) -> 'CycloElement':
        """ζ_{p^t} = ζ_{p^T}^{p^(T-t)} 로 상위 레벨에 내장"""
        if t_target == self.t:
            return self
        if t_target < self.t:
            raise ValueError(f"하위 레벨로 내릴 수 없습니다: {self.t} → {t_target}")
        e2 = ramification_index(self.p, t_target)
        if self.is_zero:
            return CycloElement.zero(self.p, t_target, self.absprec)
        if self.t == 0:
            return CycloElement(self.p, t_target, self.N, self.shift, (self.coeffs[0],) + (0,) * (e2 - 1))
        image = _pi_image(self.p, self.t, 1, t_target, self.N)
        coeffs = _horner(self.coeffs, image, minimal_polynomial(self.p, t_target), e2, self.p ** self.N)
        return CycloElement.make(self.p, t_target, coeffs, self.N, self.shift)

    def galois_conjugate(self, u: int) -> 'CycloElement':
        """σ_u: ζ ↦ ζ^u"""
        if u % self.p == 0:
            raise ValueError(f"Galois 작용의 지수는 p와 서로소여야 합니다: {u}")
        if self.t == 0 or self.is_zero:
            return self
        u = u % self.p ** self.t
        if u == 1:
            return self
        image = _pi_image(self.p, self.t, u, self.t, self.N)
        coeffs = _horner(self.coeffs, image, self._minpoly(), self.e, self.p ** self.N)
        return CycloElement.make(self.p, self.t, coeffs, self.N, self.shift)

    def rational_part(self) -> PadicNumber:
        """Q_p 값 추출, π 성분이 남아 있으면 NotRationalError"""
        if self.is_zero:
            return PadicNumber.zero(self.p, self.absprec)
        for a in self.coeffs[1:]:
            if a:
                v = self.shift + int_valuation(a, self.p)
                raise NotRationalError(f"정밀도 안에서 유리(Q_p) 원소가 아닙니다: π 성분 지수 {v}", v)
        return PadicNumber.with_absprec(self.p, self.coeffs[0], self.absprec, self.shift)

    def twisted_traces(self) -> Tuple[int, List[int]]:
        """(shift, [Tr(ζ^r · x) / p^shift mod p^N for r]) 대각합 표"""
        mod = self.p ** self.N if self.N > 0 else 1
        rows = trace_matrix(self.p, self.t)
        return self.shift, [sum(a * m for a, m in zip(self.coeffs, row)) % mod for row in rows]

    def trace(self) -> PadicNumber:
        """Tr_{Q_p(ζ)/Q_p}(x)"""
        shift, values = self.twisted_traces()
        return PadicNumber.with_absprec(self.p, values[0], self.absprec, shift)

    def to_dict(self) -> Dict:
        def digits(a: int) -> list:
            out = []
            for _ in range(self.N):
                out.append(a % self.p)
                a //= self.p
            return out
        return {'p': self.p, 't': self.t, 'shift': self.shift, 'N': self.N,
                'coeffs': [digits(a) for a in self.coeffs]}

    def __repr__(self) -> str:
        if self.is_zero:
            return f"CycloElement(0 mod {self.p}^{self.absprec}, t={self.t})"
        return f"CycloElement(p={self.p}, t={self.t}, shift={self.shift}, N={self.N}, coeffs={list(self.coeffs)})"


def _unit_inverse(unit: Sequence[int], c: Sequence[int], e: int, p: int, prec: int) -> List[int]:
    """상수항이 단원인 원소의 역원, mod p^prec"""
    mod = p ** prec
    y = [pow(unit[0] % mod, -1, mod)] + [0] * (e - 1)
    limit = (e * prec).bit_length() + 2
    for _ in range(limit):
        err = _mul(unit, y, c, e, mod)
        err[0] = (err[0] - 1) % mod
        if not any(err):
            return y
        correction = _mul(y, err, c, e, mod)
        y = [(a - b) % mod for a, b in zip(y, correction)]
    err = _mul(unit, y, c, e, mod)
    err[0] = (err[0] - 1) % mod
    if any(err):
        raise PrecisionError("단원 역원 Newton 반복이 수렴하지 않았습니다.")
    return y
