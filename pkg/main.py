"""
Eisenstein 분포 계산 실행 스크립트
서브커맨드별로 계산하고 결과를 JSON/CSV 로 출력
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from dotenv import load_dotenv
from sympy import isprime

from config_manager import ConfigManager, get_config_manager
from padic import PrecisionError
from cyclotomic import NotRationalError, set_cache_dir
from characters import enumerate_characters, is_primitive_root_mod_p2, units
from bernoulli import l_value_table, mazur_transform, mazur_value
from groupring import SingularComponentError, apply_character, mazur_element
from iwasawa import (
    TruncationError, UnsupportedInvariantsError, binomial_estimate, d_p, default_auxiliary,
    pole_branch_check,
)
from eisenstein import (
    CostGuardError, archimedean_estimate, check_cost, eigenvalue_bounds, exact_mu_star,
    mu_star_element_newton, mu_star_table, scan_irregular, t_m, ultrametric_check, verify_theorem,
)
from report_writer import write_report

logger = logging.getLogger(__name__)

COMMANDS = (
    'scan-irregular', 'mu-star', 'mazur', 'l-value', 'mellin-check', 'iwasawa',
    'verify-theorem', 'archimedean-check', 'pole-check', 'bounds',
)

# 군환 역원(보조 정수 c 가 법 p^2 원시근이어야 함)을 쓰는 명령
INVERSION_COMMANDS = ('iwasawa', 'verify-theorem')


def setup_logging(log_file: str) -> None:
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file, encoding='utf-8'),
            logging.StreamHandler()
        ]
    )


@dataclass
class RunConfig:
    """설정 파일 + 명령행 인수로 조립한 실행 설정"""
    command: str
    p: Optional[int] = None
    k: int = 2
    m: int = 1
    m_max: int = 2
    precision: int = 30
    truncation: int = 64
    cutoff: int = 1000000
    c: Optional[int] = None
    b: Optional[int] = None
    max_p: int = 150
    method: str = 'mellin'
    output_format: str = 'json'
    output: Optional[str] = None
    workers: int = 1
    max_group_order: int = 2000

    @property
    def needs_inversion(self) -> bool:
        return self.command in INVERSION_COMMANDS or (self.command == 'mu-star' and self.method == 'newton')

    def validate(self) -> List[str]:
        """오류 메시지 목록 (비어 있으면 유효)"""
        errors = []
        if self.command not in COMMANDS:
            errors.append(f"알 수 없는 명령입니다: {self.command}")
        if self.command != 'scan-irregular':
            if self.p is None:
                errors.append("--p 가 필요합니다.")
            elif self.p < 3 or not isprime(self.p):
                errors.append(f"p 는 홀수 소수여야 합니다: {self.p}")
        if self.k < 1:
            errors.append(f"k 는 1 이상이어야 합니다: {self.k}")
        if self.m < 1 or self.m_max < 1:
            errors.append("레벨 m 은 1 이상이어야 합니다.")
        level = max(self.m, self.m_max) if self.command == 'verify-theorem' else self.m
        if self.precision < level + self.k + 10:
            errors.append(f"정밀도 부족: N = {self.precision} < m + k + 10 = {level + self.k + 10} "
                          f"(raise --precision)")
        if self.truncation < 2:
            errors.append("절단 차수는 2 이상이어야 합니다.")
        if self.output_format not in ('json', 'csv'):
            errors.append(f"출력 형식은 json 또는 csv 여야 합니다: {self.output_format}")
        if self.c is not None and self.p is not None and not errors:
            if self.c <= 0 or self.c % self.p == 0:
                errors.append(f"c 는 p 와 서로소인 양의 정수여야 합니다: {self.c}")
            elif self.needs_inversion and not is_primitive_root_mod_p2(self.c, self.p):
                errors.append(f"c = {self.c} 는 법 {self.p}^2 의 원시근이 아닙니다.")
        if self.command == 'archimedean-check':
            if self.k < 2:
                errors.append("archimedean-check 는 k ≥ 2 만 지원합니다.")
            if self.p is not None and self.cutoff < self.p:
                errors.append("cutoff 는 p 이상이어야 합니다.")
        return errors

    def auxiliary(self) -> int:
        return self.c if self.c is not None else default_auxiliary(self.p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Eisenstein 분포와 p진 L-함수 계산")
    sub = parser.add_subparsers(dest='command', required=True)

    def common(name: str, help_text: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument('--format', dest='output_format', choices=['json', 'csv'])
        cmd.add_argument('--precision', type=int)
        cmd.add_argument('--truncation', type=int)
        cmd.add_argument('--output')
        cmd.add_argument('--workers', type=int)
        return cmd

    cmd = common('scan-irregular', '비정칙 소수 탐색')
    cmd.add_argument('--max-p', type=int, default=150)

    cmd = common('mu-star', 'μ*_k 값 표와 t_m')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=2)
    cmd.add_argument('--m', type=int, default=1)
    cmd.add_argument('--method', choices=['mellin', 'newton'], default='mellin')
    cmd.add_argument('--c', type=int)

    cmd = common('mazur', 'Mazur 측도 값')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=2)
    cmd.add_argument('--m', type=int, default=1)
    cmd.add_argument('--c', type=int)

    cmd = common('l-value', 'L(1-k, χ) 값 표')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=2)
    cmd.add_argument('--m', type=int, default=1)

    cmd = common('mellin-check', 'Mazur 측도 멜린 항등식 확인')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=2)
    cmd.add_argument('--m', type=int, default=1)
    cmd.add_argument('--c', type=int)

    cmd = common('iwasawa', '성분별 λ, μ, 영점, d_p(k)')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=2)
    cmd.add_argument('--level', dest='m', type=int, default=2)
    cmd.add_argument('--c', type=int)

    cmd = common('verify-theorem', 't_m 성장 검증')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=2)
    cmd.add_argument('--m-max', type=int, default=2)
    cmd.add_argument('--c', type=int)

    cmd = common('archimedean-check', '실수 근사와 정확값 비교')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=4)
    cmd.add_argument('--m', type=int, default=1)
    cmd.add_argument('--b', type=int)
    cmd.add_argument('--cutoff', type=int)

    cmd = common('pole-check', '극 성분 소멸 확인')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=2)
    cmd.add_argument('--m', type=int, default=2)

    cmd = common('bounds', '고유값 상하한과 초거리 부등식')
    cmd.add_argument('--p', type=int, required=True)
    cmd.add_argument('--k', type=int, default=2)
    cmd.add_argument('--m', type=int, default=1)

    cmd = sub.add_parser('config', help='설정 조회와 변경')
    cmd.add_argument('action', choices=['show', 'set', 'reset'])
    cmd.add_argument('pairs', nargs='*', metavar='KEY=VALUE')
    return parser


def build_config(args: argparse.Namespace, settings: ConfigManager) -> RunConfig:
    def pick(name: str, key: str):
        value = getattr(args, name, None)
        return settings.get(key) if value is None else value

    m = getattr(args, 'm', 1)
    return RunConfig(
        command=args.command,
        p=getattr(args, 'p', None),
        k=getattr(args, 'k', 2),
        m=m,
        m_max=getattr(args, 'm_max', m),
        precision=pick('precision', 'precision'),
        truncation=pick('truncation', 'truncation'),
        cutoff=pick('cutoff', 'archimedean_cutoff'),
        c=getattr(args, 'c', None),
        b=getattr(args, 'b', None),
        max_p=getattr(args, 'max_p', None) or 150,
        method=getattr(args, 'method', None) or 'mellin',
        output_format=pick('output_format', 'output_format'),
        output=args.output,
        workers=pick('workers', 'workers'),
        max_group_order=settings.get('max_group_order', 2000),
    )


# ---- 서브커맨드 ----

def cmd_scan_irregular(cfg: RunConfig) -> Dict:
    reports = scan_irregular(cfg.max_p)
    rows = [{'p': r.p, 'regular': r.regular, 'indices': ' '.join(map(str, r.indices))} for r in reports]
    return {'max_p': cfg.max_p, 'irregular': [r.p for r in reports if not r.regular], 'rows': rows}


def cmd_mu_star(cfg: RunConfig) -> Dict:
    N = cfg.precision
    if cfg.method == 'newton':
        element = mu_star_element_newton(cfg.p, cfg.k, cfg.m, N, cfg.auxiliary())
        rows = [{'b': b, **c.rational_part().to_dict(), 'abs': c.valuation().to_string()}
                for b, c in zip(element.units, element.coeffs)]
        return {'p': cfg.p, 'k': cfg.k, 'm': cfg.m, 'method': 'newton', 'rows': rows}
    check_cost(cfg.p, cfg.m, cfg.max_group_order)
    table = mu_star_table(cfg.p, cfg.k, cfg.m, N, cfg.workers)
    summary = t_m(cfg.p, cfg.k, cfg.m, N, cfg.workers)
    return {'p': cfg.p, 'k': cfg.k, 'm': cfg.m, 'method': 'mellin',
            'rows': [r.to_dict() for r in table],
            't_m': summary['t_m'], 'attaining_b': summary['attaining_b']}


def cmd_mazur(cfg: RunConfig) -> Dict:
    c = cfg.auxiliary()
    rows = []
    for b in units(cfg.p, cfg.m):
        value = mazur_value(cfg.p, cfg.k, c, b, cfg.m)
        rows.append({'b': b, 'value': f"{value.numerator}/{value.denominator}"})
    return {'p': cfg.p, 'k': cfg.k, 'm': cfg.m, 'c': c, 'rows': rows}


def cmd_l_value(cfg: RunConfig) -> Dict:
    return {'p': cfg.p, 'm': cfg.m, 'rows': l_value_table(cfg.p, cfg.m, [cfg.k], cfg.precision)}


def cmd_mellin_check(cfg: RunConfig) -> Dict:
    c = cfg.auxiliary()
    N = cfg.precision
    theta = mazur_element(cfg.p, cfg.k, c, cfg.m, N)
    rows = []
    for chi in enumerate_characters(cfg.p, cfg.m):
        lhs = apply_character(theta, chi)
        rhs = mazur_transform(cfg.k, c, chi, N)
        diff = lhs - rhs
        rows.append({'i': chi.i, 'j': chi.j, 'pass': diff.is_zero, 'agreement': diff.absprec})
    return {'p': cfg.p, 'k': cfg.k, 'm': cfg.m, 'c': c,
            'passed': all(r['pass'] for r in rows), 'rows': rows}


def cmd_iwasawa(cfg: RunConfig) -> Dict:
    report = d_p(cfg.p, cfg.k, cfg.m, cfg.precision, cfg.auxiliary(), cfg.truncation)
    out = report.to_dict()
    if report.has_zeros:
        out['binomial'] = binomial_estimate(report.beta, 6)
    return out


def cmd_verify_theorem(cfg: RunConfig) -> Dict:
    report = verify_theorem(cfg.p, cfg.k, cfg.m_max, cfg.precision, cfg.auxiliary(),
                            cfg.workers, cfg.max_group_order)
    return report.to_dict()


def cmd_archimedean(cfg: RunConfig) -> Dict:
    bs = [cfg.b] if cfg.b is not None else list(units(cfg.p, cfg.m))
    rows = []
    for b in bs:
        row = archimedean_estimate(cfg.p, cfg.k, cfg.m, b, cfg.cutoff)
        if cfg.m == 1:
            exact = exact_mu_star(cfg.p, cfg.k, b, max(cfg.precision, 60))
            row['exact'] = f"{exact.numerator}/{exact.denominator}"
            row['relative_error'] = abs(row['value'] - float(exact)) / abs(float(exact)) if exact else None
        rows.append(row)
    return {'p': cfg.p, 'k': cfg.k, 'm': cfg.m, 'cutoff': cfg.cutoff, 'rows': rows}


def cmd_pole_check(cfg: RunConfig) -> Dict:
    return pole_branch_check(cfg.p, cfg.k, cfg.m, cfg.precision)


def cmd_bounds(cfg: RunConfig) -> Dict:
    check_cost(cfg.p, cfg.m, cfg.max_group_order)
    report = eigenvalue_bounds(cfg.p, cfg.k, cfg.m, cfg.precision, cfg.workers)
    report['ultrametric'] = ultrametric_check(cfg.p, cfg.k, cfg.m, cfg.precision, cfg.workers)
    return report


def parse_settings(pairs: Sequence[str], settings: ConfigManager) -> Dict:
    """KEY=VALUE 목록, 값은 JSON 으로 읽고 실패하면 문자열"""
    updates = {}
    for pair in pairs:
        key, sep, raw = pair.partition('=')
        if not sep or key not in settings.default_config:
            raise ValueError(f"알 수 없는 설정 항목입니다: {pair}")
        try:
            updates[key] = json.loads(raw)
        except json.JSONDecodeError:
            updates[key] = raw
    return updates


def cmd_config(args: argparse.Namespace, settings: ConfigManager) -> int:
    """config show | set KEY=VALUE ... | reset"""
    if args.action == 'reset':
        if not settings.reset_to_default():
            return 1
    elif args.action == 'set':
        try:
            updates = parse_settings(args.pairs, settings)
        except ValueError as e:
            print(f"오류: {e}", file=sys.stderr)
            return 2
        if not updates:
            print("오류: 변경할 KEY=VALUE 가 없습니다.", file=sys.stderr)
            return 2
        previous = settings.config
        settings.config = {**previous, **updates}
        try:
            ok, problems = settings.validate_config()
        except TypeError as e:
            ok, problems = False, [f"설정값 형식이 올바르지 않습니다: {e}"]
        finally:
            settings.config = previous
        if not ok:
            for problem in problems:
                print(f"오류: {problem}", file=sys.stderr)
            return 2
        if len(updates) == 1:
            saved = settings.set(*next(iter(updates.items())))
        else:
            saved = settings.update_multiple(updates)
        if not saved:
            return 1
    print(write_report(settings.get_all_settings(), 'json'))
    return 0


HANDLERS = {
    'scan-irregular': cmd_scan_irregular,
    'mu-star': cmd_mu_star,
    'mazur': cmd_mazur,
    'l-value': cmd_l_value,
    'mellin-check': cmd_mellin_check,
    'iwasawa': cmd_iwasawa,
    'verify-theorem': cmd_verify_theorem,
    'archimedean-check': cmd_archimedean,
    'pole-check': cmd_pole_check,
    'bounds': cmd_bounds,
}


def run(argv: Sequence[str], settings: Optional[ConfigManager] = None) -> int:
    """명령 실행, 종료 코드 반환"""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return int(e.code or 0)
    settings = settings or get_config_manager()
    if args.command == 'config':
        return cmd_config(args, settings)
    ok, problems = settings.validate_config()
    if not ok:
        for problem in problems:
            logger.error(f"설정 오류: {problem}")
        return 2
    set_cache_dir(settings.get('cache_dir'))
    cfg = build_config(args, settings)
    errors = cfg.validate()
    if errors:
        for error in errors:
            logger.error(error)
            print(f"오류: {error}", file=sys.stderr)
        return 2
    try:
        report = HANDLERS[cfg.command](cfg)
    except TruncationError as e:
        logger.error(f"절단 차수 부족: {e}")
        print(f"오류: {e} (raise --truncation)", file=sys.stderr)
        return 3
    except (PrecisionError, NotRationalError) as e:
        logger.error(f"정밀도 부족: {e}")
        print(f"오류: {e} (raise --precision)", file=sys.stderr)
        return 3
    except (SingularComponentError, UnsupportedInvariantsError, CostGuardError) as e:
        logger.error(f"계산 불가: {e}")
        print(f"오류: {e}", file=sys.stderr)
        return 4
    except ValueError as e:
        logger.error(f"입력 오류: {e}")
        print(f"오류: {e}", file=sys.stderr)
        return 2
    text = write_report(report, cfg.output_format, cfg.output)
    if not cfg.output:
        print(text)
    logger.info(f"✅ {cfg.command} 완료")
    return 0


def main():
    """메인 실행 함수"""
    load_dotenv()
    settings = get_config_manager()
    setup_logging(settings.get('log_file', 'eisenstein.log'))
    sys.exit(run(sys.argv[1:], settings))


if __name__ == "__main__":
    main()
