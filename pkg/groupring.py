"""
유한 레벨 군환 Q_p[(Z/p^m)^*] 모듈
합성곱, 지표 준동형, 멱등원, 레벨 사영, 멜린 역변환, 패리티 성분별 역원
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from padic import PadicNumber, PrecisionError, Rational, int_valuation
from cyclotomic import CycloElement, minimal_polynomial, ramification_index, zeta_powers, _mul
from characters import (
    DirichletChar, evaluate, gamma_logs, teichmuller_powers, unit_index, units,
)
from bernoulli import mazur_value

logger = logging.getLogger(__name__)


class SingularComponentError(ArithmeticError):
    """패리티 성분에서 고유값이 0인 원소"""

    def __init__(self, message: str, character: DirichletChar):
        super().__init__(message)
        self.character = character


def group_order(p: int, m: int) -> int:
    """#(Z/p^m)^* = φ(p^m)"""
    return (p - 1) * p ** (m - 1)


@dataclass(frozen=True)
class GroupRingElement:
    """Σ a_b [b], b 는 (Z/p^m)^* 를 정수 오름차순으로 나열"""
    p: int
    m: int
    coeffs: Tuple[CycloElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != group_order(self.p, self.m):
            raise ValueError(f"계수 개수가 φ(p^m) = {group_order(self.p, self.m)} 와 다릅니다: {len(self.coeffs)}")

    # ---- 생성자 ----

    @classmethod
    def from_values(cls, p: int, m: int, values: Sequence[Rational], N: int) -> 'GroupRingElement':
        """유리수 계수 (units(p, m) 순서)"""
        return cls(p, m, tuple(CycloElement.from_rational(p, 0, x, N) for x in values))

    @classmethod
    def from_padics(cls, p: int, m: int, values: Sequence[PadicNumber]) -> 'GroupRingElement':
        return cls(p, m, tuple(CycloElement.from_padic(x, 0) for x in values))

    # ---- 조회 ----

    @property
    def units(self) -> Tuple[int, ...]:
        return units(self.p, self.m)

    @property
    def is_rational_valued(self) -> bool:
        return all(c.t == 0 for c in self.coeffs)

    def coefficient(self, b: int) -> CycloElement:
        return self.coeffs[unit_index(self.p, self.m)[b % self.p ** self.m]]

    def rational_coefficients(self) -> List[PadicNumber]:
        """모든 계수의 Q_p 값, 하나라도 유리가 아니면 NotRationalError"""
        return [c.rational_part() for c in self.coeffs]

    def is_rational(self) -> bool:
        from cyclotomic import NotRationalError
        try:
            self.rational_coefficients()
            return True
        except NotRationalError:
            return False

    # ---- 산술 ----

    def _check(self, other: 'GroupRingElement') -> None:
        if (self.p, self.m) != (other.p, other.m):
            raise ValueError(f"레벨 불일치: (p, m) = ({self.p}, {self.m}) vs ({other.p}, {other.m})")

    def __add__(self, other: 'GroupRingElement') -> 'GroupRingElement':
        self._check(other)
        return GroupRingElement(self.p, self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: 'GroupRingElement') -> 'GroupRingElement':
        self._check(other)
        return GroupRingElement(self.p, self.m, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, r: Rational) -> 'GroupRingElement':
        return GroupRingElement(self.p, self.m, tuple(c.scale(r) for c in self.coeffs))

    def conjugate(self, u: int) -> 'GroupRingElement':
        """계수별 Galois 작용"""
        return GroupRingElement(self.p, self.m, tuple(c.galois_conjugate(u) for c in self.coeffs))

    def is_congruent(self, other: 'GroupRingElement') -> bool:
        self._check(other)
        return all(a.is_congruent(b) for a, b in zip(self.coeffs, other.coeffs))

    def to_dict(self) -> Dict:
        rows = []
        for b, c in zip(self.units, self.coeffs):
            value = c.rational_part().to_dict() if c.t == 0 else c.to_dict()
            rows.append({'b': b, 'value': value})
        return {'p': self.p, 'm': self.m, 'coeffs': rows}


def _rational_ints(theta: GroupRingElement) -> Tuple[int, int, List[int]]:
    """(S, N, [A_b]): a_b = p^S · A_b mod p^(S+N)"""
    values = theta.rational_coefficients()
    absprec = min(x.absprec for x in values)
    nonzero = [x.v for x in values if not x.is_zero]
    S = min(nonzero) if nonzero else absprec
    N = absprec - S
    if N <= 0:
        return S, 0, [0] * len(values)
    mod = theta.p ** N
    ints = [0 if x.is_zero else x.unit * theta.p ** (x.v - S) % mod for x in values]
    return S, N, ints


def delta(p: int, m: int, b: int, N: int) -> GroupRingElement:
    """점질량 [b]"""
    idx = unit_index(p, m)[b % p ** m]
    values = [0] * group_order(p, m)
    values[idx] = 1
    return GroupRingElement.from_values(p, m, values, N)


def haar_element(p: int, m: int, N: int) -> GroupRingElement:
    """각 계수 p^(-m)"""
    return GroupRingElement.from_values(p, m, [Fraction(1, p ** m)] * group_order(p, m), N)


def mazur_element(p: int, k: int, c: int, m: int, N: int) -> GroupRingElement:
    """θ_{k,c} = Σ μ_{k,c}(b + p^m Z_p) [b]"""
    return GroupRingElement.from_values(p, m, [mazur_value(p, k, c, b, m) for b in units(p, m)], N)


def convolve(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    """(x*y)_g = Σ_h x_h y_{h^{-1} g}"""
    x._check(y)
    p, m = x.p, x.m
    q = p ** m
    us = units(p, m)
    idx = unit_index(p, m)
    n = len(us)
    if x.is_rational_valued and y.is_rational_valued:
        sx, nx, ax = _rational_ints(x)
        sy, ny, ay = _rational_ints(y)
        N = min(nx, ny)
        if N <= 0:
            zero = CycloElement.zero(p, 0, min(sx + ny, sy + nx))
            return GroupRingElement(p, m, (zero,) * n)
        mod = p ** N
        out = [0] * n
        for h1, a in zip(us, ax):
            if a:
                for h2, b in zip(us, ay):
                    if b:
                        out[idx[h1 * h2 % q]] += a * b
        return GroupRingElement(p, m, tuple(CycloElement.make(p, 0, [v % mod], N, sx + sy) for v in out))
    acc: List[Optional[CycloElement]] = [None] * n
    for h1, a in zip(us, x.coeffs):
        for h2, b in zip(us, y.coeffs):
            k = idx[h1 * h2 % q]
            prod = a * b
            acc[k] = prod if acc[k] is None else acc[k] + prod
    return GroupRingElement(p, m, tuple(acc))


def apply_character(theta: GroupRingElement, chi: DirichletChar) -> CycloElement:
    """χ(θ) = Σ a_g χ(g)"""
    if chi.p != theta.p:
        raise ValueError(f"소수 불일치: {chi.p} vs {theta.p}")
    if chi.m < theta.m:
        chi = chi.lift(theta.m)
    elif chi.m > theta.m:
        raise ValueError(f"지표 레벨 {chi.m} 이 원소 레벨 {theta.m} 보다 높습니다.")
    p, m, t = theta.p, theta.m, chi.level
    if theta.is_rational_valued:
        S, N, ints = _rational_ints(theta)
        if N <= 0:
            return CycloElement.zero(p, t, S + N)
        mod = p ** N
        size = p ** (m - 1)
        omega = teichmuller_powers(p, N, chi.i)
        logs = gamma_logs(p, m)
        buckets = [0] * size
        for g, a in zip(units(p, m), ints):
            if a:
                s = logs[g] * chi.j % size
                buckets[s] = (buckets[s] + a * omega[g % p]) % mod
        zetas = zeta_powers(p, t, N)
        e = ramification_index(p, t)
        coeffs = [0] * e
        for r, value in enumerate(buckets):
            if value:
                row = zetas[r]
                for n in range(e):
                    coeffs[n] += value * row[n]
        return CycloElement.make(p, t, coeffs, N, S)
    precision = max(c.N for c in theta.coeffs) or 1
    total = CycloElement.zero(p, t, min(c.absprec for c in theta.coeffs))
    first = True
    for g, a in zip(units(p, m), theta.coeffs):
        term = a * evaluate(chi, g, precision)
        total = term if first else total + term
        first = False
    return total


def idempotent(chi: DirichletChar, N: int) -> GroupRingElement:
    """e_χ = (1/#G) Σ χ^{-1}(g) [g]"""
    p, m = chi.p, chi.m
    inv = chi.inverse()
    order = group_order(p, m)
    return GroupRingElement(p, m, tuple(evaluate(inv, g, N).scale(Fraction(1, order)) for g in units(p, m)))


def parity_idempotent(p: int, m: int, parity: int, N: int) -> GroupRingElement:
    """e_± = ([1] ± [-1]) / 2"""
    values = [Fraction(0)] * group_order(p, m)
    idx = unit_index(p, m)
    values[idx[1]] += Fraction(1, 2)
    values[idx[p ** m - 1]] += Fraction(parity, 2)
    return GroupRingElement.from_values(p, m, values, N)


def mellin_invert(p: int, m: int, eigenvalues: Mapping[DirichletChar, CycloElement]) -> GroupRingElement:
    """
    a_g = (1/#G) Σ_χ χ^{-1}(g) λ_χ
    빠진 지표의 고유값은 0으로 취급
    """
    t = m - 1
    size = p ** t
    e = ramification_index(p, t)
    c = minimal_polynomial(p, t)
    lams = []
    for chi, lam in eigenvalues.items():
        if (chi.p, chi.m) != (p, m):
            raise ValueError(f"지표 레벨 불일치: {chi}")
        if lam.t > t:
            raise ValueError(f"고유값 레벨 {lam.t} 이 원소 레벨 {m} 의 Q_p(ζ_(p^{t})) 보다 높습니다: {chi}")
        if lam.t < t:
            lam = lam.raise_level(t)
        lams.append((chi, lam))
    if not lams:
        raise ValueError("고유값이 비어 있습니다.")
    absprec = min(lam.absprec for _, lam in lams)
    nonzero = [lam.shift for _, lam in lams if not lam.is_zero]
    S = min(nonzero) if nonzero else absprec
    N = absprec - S
    if N <= 0:
        raise PrecisionError(f"멜린 역변환: 고유값이 모두 mod p^{absprec} 에서 0입니다.")
    mod = p ** N
    zetas = zeta_powers(p, t, N)
    prepared = []
    for chi, lam in lams:
        if lam.is_zero:
            continue
        base = [a * p ** (lam.shift - S) % mod for a in lam.coeffs]
        rotated = [_mul(base, zetas[r], c, e, mod) for r in range(size)]
        prepared.append((chi, teichmuller_powers(p, N, (-chi.i) % (p - 1)), rotated))
    logs = gamma_logs(p, m)
    order = group_order(p, m)
    coeffs = []
    for g in units(p, m):
        acc = [0] * e
        for chi, omega, rotated in prepared:
            w = omega[g % p]
            row = rotated[(-chi.j * logs[g]) % size]
            for n in range(e):
                acc[n] += w * row[n]
        coeffs.append(CycloElement.make(p, t, acc, N, S).scale(Fraction(1, order)))
    return GroupRingElement(p, m, tuple(coeffs))


def _orbit_key(chi: DirichletChar) -> Tuple[int, int]:
    return chi.i, chi.gamma_order_exponent


def mellin_invert_galois(p: int, m: int, eigen_fn: Callable[[DirichletChar], CycloElement],
                         chars: Iterable[DirichletChar]) -> GroupRingElement:
    """
    Galois 동변 고유값족의 멜린 역변환, 궤도 대표에서만 eigen_fn 을 호출
    궤도 합 = Tr(χ^{-1}(g) λ_χ) / [K_t : K_v]
    """
    t = m - 1
    size = p ** t
    orbits: Dict[Tuple[int, int], int] = {}
    for chi in chars:
        if (chi.p, chi.m) != (p, m):
            raise ValueError(f"지표 레벨 불일치: {chi}")
        key = _orbit_key(chi)
        orbits[key] = orbits.get(key, 0) + 1
    if not orbits:
        raise ValueError("지표 집합이 비어 있습니다.")
    entries = []
    for (i, v), count in sorted(orbits.items()):
        expected = 1 if v == 0 else (p - 1) * p ** (v - 1)
        if count != expected:
            raise ValueError(f"Galois 안정 집합이 아닙니다: ω^{i}, 위수 p^{v} 궤도 {count}/{expected}")
        rep = DirichletChar(p, m, i, p ** (m - 1 - v) % size)
        lam = eigen_fn(rep)
        if lam.t < t:
            lam = lam.raise_level(t)
        shift, traces = lam.twisted_traces()
        # [K_t : K_v] 또는 자명 궤도에서 φ(p^t)
        if t == 0:
            ratio_v, ratio_unit = 0, 1
        elif v == 0:
            ratio_v, ratio_unit = t - 1, p - 1
        else:
            ratio_v, ratio_unit = t - v, 1
        entries.append((i, rep.j, shift - ratio_v, lam.absprec - ratio_v, ratio_unit, lam.N, traces))
    absprec = min(en[3] for en in entries)
    S = min(en[2] for en in entries if en[5] > 0) if any(en[5] > 0 for en in entries) else absprec
    N = absprec - S
    if N <= 0:
        raise PrecisionError(f"멜린 역변환: 고유값이 모두 mod p^{absprec} 에서 0입니다.")
    mod = p ** N
    scaled = []
    for i, j, shift, _, ratio_unit, n_lam, traces in entries:
        if n_lam == 0:
            continue
        factor = pow(ratio_unit, -1, mod) * p ** (shift - S) % mod
        scaled.append((j, teichmuller_powers(p, N, (-i) % (p - 1)), [x * factor % mod for x in traces]))
    logs = gamma_logs(p, m)
    inv_order_unit = pow(p - 1, -1, mod)
    coeffs = []
    for g in units(p, m):
        acc = 0
        for j, omega, table in scaled:
            acc += omega[g % p] * table[(-j * logs[g]) % size]
        coeffs.append(CycloElement.make(p, 0, [acc * inv_order_unit % mod], N, S - (m - 1)))
    return GroupRingElement(p, m, tuple(coeffs))


def involution(theta: GroupRingElement) -> GroupRingElement:
    """[g] ↦ [g^{-1}], χ(ι θ) = χ^{-1}(θ)"""
    q = theta.p ** theta.m
    return GroupRingElement(theta.p, theta.m, tuple(theta.coefficient(pow(b, -1, q)) for b in theta.units))


def project_level(theta: GroupRingElement) -> GroupRingElement:
    """ρ: G_{m+1} → G_m, b 의 계수는 p 개 원상의 계수 합"""
    if theta.m < 2:
        raise ValueError("레벨 1 원소는 더 내릴 수 없습니다.")
    p, m = theta.p, theta.m - 1
    q = p ** m
    idx = unit_index(p, m)
    acc: List[Optional[CycloElement]] = [None] * group_order(p, m)
    for b, a in zip(theta.units, theta.coeffs):
        k = idx[b % q]
        acc[k] = a if acc[k] is None else acc[k] + a
    return GroupRingElement(p, m, tuple(acc))


def gamma_branch(theta: GroupRingElement, i: int) -> Tuple[int, int, List[int]]:
    """
    e_{ω^i} θ 의 Γ_m 좌표: c_s = Σ_{s(g)=s} ω(g)^i a_g
    반환 (S, N, [c_s]), 값은 p^S · c_s mod p^(S+N)
    """
    p, m = theta.p, theta.m
    S, N, ints = _rational_ints(theta)
    size = p ** (m - 1)
    if N <= 0:
        return S, 0, [0] * size
    mod = p ** N
    omega = teichmuller_powers(p, N, i % (p - 1))
    logs = gamma_logs(p, m)
    out = [0] * size
    for g, a in zip(units(p, m), ints):
        if a:
            out[logs[g]] = (out[logs[g]] + a * omega[g % p]) % mod
    return S, N, out


def _cyclic_mul(a: Sequence[int], b: Sequence[int], mod: int) -> List[int]:
    n = len(a)
    out = [0] * n
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % n] += x * y
    return [v % mod for v in out]


def _group_unit_inverse(u: Sequence[int], p: int, prec: int) -> List[int]:
    """Z_p[Γ_m] 단원의 역원, x ← x(2 - ux), 초기값은 첨가사상 역원"""
    mod = p ** prec
    n = len(u)
    aug = sum(u) % mod
    if aug % p == 0:
        raise PrecisionError("군환 원소가 단원이 아닙니다 (첨가사상이 p로 나누어짐)")
    x = [pow(aug, -1, mod)] + [0] * (n - 1)
    limit = (n * prec).bit_length() + 3
    for _ in range(limit):
        err = _cyclic_mul(u, x, mod)
        err[0] = (err[0] - 1) % mod
        if not any(err):
            return x
        corr = _cyclic_mul(x, err, mod)
        x = [(a - b) % mod for a, b in zip(x, corr)]
    raise PrecisionError("군환 Newton 반복이 수렴하지 않았습니다.")


def _invert_branch(p: int, m: int, i: int, S: int, N: int,
                   c: List[int]) -> Optional[Tuple[int, int, List[int]]]:
    """
    Q_p[γ]/(γ^P - 1) 에서 branch 역원, 반환 (shift, N, 계수)
    λ ≥ 2 이면 None (호출측에서 멜린 역변환으로 처리)
    """
    from iwasawa import PowerSeries, UnsupportedInvariantsError, gamma_to_t_basis, weierstrass_prepare
    P = p ** (m - 1)
    F = PowerSeries(p, N, tuple(gamma_to_t_basis(c, p ** N)), shift=S, modulus_level=m)
    try:
        W = weierstrass_prepare(F)
    except UnsupportedInvariantsError:
        return None
    if W.lam >= 2:
        return None
    drop = W.mu - S
    nw = N - drop
    if nw <= 0:
        raise PrecisionError(f"ω^{i} 성분: 정밀도 부족 (μ = {W.mu})")
    mod = p ** nw
    cu = [x // p ** drop % mod for x in c]
    if W.lam == 0:
        return -W.mu, nw, _group_unit_inverse(cu, p, nw)
    beta = (-W.distinguished[0]) % mod
    a = (1 + beta) % mod
    # 합성 나눗셈 C(γ) = (γ - a) Q(γ)
    q = [0] * P
    carry = 0
    for k in range(P - 1, 0, -1):
        carry = (cu[k] + a * carry) % mod if k < P - 1 else cu[k]
        q[k - 1] = carry
    x = _group_unit_inverse(q, p, nw)
    denom = (1 - pow(a, P, mod)) % mod
    if denom == 0:
        raise SingularComponentError(f"ω^{i} 성분의 자명 Γ 지표 고유값이 0입니다.", DirichletChar(p, m, i, 0))
    w = int_valuation(denom, p)
    geo = [pow(a, P - 1 - n, mod) for n in range(P)]
    h = _cyclic_mul(x, geo, mod)
    unit_inv = pow(denom // p ** w, -1, mod)
    h = [v * unit_inv % mod for v in h]
    return -W.mu - w, max(nw - w - 1, 1), h


def _mellin_branch_inverse(theta: GroupRingElement, i: int) -> Tuple[int, int, List[int]]:
    """ω^i 성분의 Γ 지표 고유값 역수를 Galois 궤도별로 역변환한 branch 역원"""
    p, m = theta.p, theta.m
    P = p ** (m - 1)
    chars = [DirichletChar(p, m, i, j) for j in range(P)]
    psi = mellin_invert_galois(p, m, lambda chi: apply_character(theta, chi).inverse(), chars)
    S, N, h = gamma_branch(psi, i)
    if N <= 0:
        raise PrecisionError(f"ω^{i} 성분: 멜린 역원의 정밀도가 남지 않았습니다.")
    return S, N, h


def parity_newton_inverse(theta: GroupRingElement, parity: int) -> GroupRingElement:
    """
    θ ψ = e_± 인 ψ, Teichmüller 성분별로 Weierstrass 단원 부분은 Newton 으로,
    차수 1 구별다항식은 γ 의 기하급수로 역원을 구해 다시 조립
    λ ≥ 2 성분은 Γ 지표 고유값의 역수를 멜린 역변환
    """
    from iwasawa import PowerSeries, evaluate_at_zeta, gamma_to_t_basis
    if parity not in (1, -1):
        raise ValueError(f"패리티는 ±1 이어야 합니다: {parity}")
    p, m = theta.p, theta.m
    P = p ** (m - 1)
    branches = {}
    for i in range(p - 1):
        if (-1) ** i != parity:
            continue
        S, N, c = gamma_branch(theta, i)
        if N <= 0:
            raise SingularComponentError(f"ω^{i} 성분이 정밀도 안에서 0입니다.", DirichletChar(p, m, i, 0))
        F = PowerSeries(p, N, tuple(gamma_to_t_basis(c, p ** N)), shift=S, modulus_level=m)
        for t in range(m):
            if evaluate_at_zeta(F, t).is_zero:
                chi = DirichletChar(p, m, i, p ** (m - 1 - t) % P)
                raise SingularComponentError(f"고유값이 0인 지표: (i, j) = ({chi.i}, {chi.j})", chi)
        inverse = _invert_branch(p, m, i, S, N, c)
        if inverse is None:
            logger.debug(f"ω^{i} 성분: λ ≥ 2, 멜린 역변환으로 역원 계산")
            inverse = _mellin_branch_inverse(theta, i)
        branches[i] = inverse
        logger.debug(f"ω^{i} 성분 역원 완료")
    absprec = min(shift + n for shift, n, _ in branches.values())
    S = min(shift for shift, _, _ in branches.values())
    N = absprec - S
    mod = p ** N
    logs = gamma_logs(p, m)
    prepared = []
    for i, (shift, _, h) in branches.items():
        factor = p ** (shift - S)
        prepared.append((teichmuller_powers(p, N, (-i) % (p - 1)), [v * factor % mod for v in h]))
    inv = pow(p - 1, -1, mod)
    coeffs = []
    for g in units(p, m):
        acc = sum(omega[g % p] * h[logs[g]] for omega, h in prepared)
        coeffs.append(CycloElement.make(p, 0, [acc * inv % mod], N, S))
    return GroupRingElement(p, m, tuple(coeffs))
