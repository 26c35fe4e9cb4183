"""
계산 결과 출력 모듈
JSON 은 기계용, CSV 는 표 형태 (pandas)
"""
import io
import json
import logging
from typing import Dict, List, Optional

import pandas as pd

logger = logging.getLogger(__name__)


def _flatten(value) -> str:
    """CSV 셀 값: 리스트/딕셔너리는 JSON 문자열로"""
    if isinstance(value, (list, dict)):
        return json.dumps(value, ensure_ascii=False, sort_keys=True)
    return value


def table_rows(report: Dict) -> List[Dict]:
    """보고서에서 표로 쓸 행 목록 ('rows', 'branches', 'records' 순으로 찾음)"""
    for key in ('rows', 'branches', 'records'):
        if isinstance(report.get(key), list):
            scalars = {k: v for k, v in report.items() if not isinstance(v, (list, dict))}
            return [{**scalars, **row} for row in report[key]]
    return [report]


def to_json(report: Dict) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True, default=str)


def to_csv(report: Dict) -> str:
    rows = [{k: _flatten(v) for k, v in row.items()} for row in table_rows(report)]
    df = pd.DataFrame(rows)
    buffer = io.StringIO()
    df.to_csv(buffer, index=False)
    return buffer.getvalue()


def render(report: Dict, output_format: str) -> str:
    if output_format == 'json':
        return to_json(report)
    if output_format == 'csv':
        return to_csv(report)
    raise ValueError(f"지원하지 않는 출력 형식입니다: {output_format}")


def write_report(report: Dict, output_format: str, path: Optional[str] = None) -> str:
    """보고서를 문자열로 만들고 path 가 있으면 파일에 저장"""
    text = render(report, output_format)
    if path:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info(f"결과 저장 완료: {path}")
    return text


def read_csv_report(path: str) -> pd.DataFrame:
    """저장된 CSV 표 읽기"""
    return pd.read_csv(path)
