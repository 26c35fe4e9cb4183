"""
결과 출력 테스트
"""
import json

import pytest

from report_writer import read_csv_report, render, table_rows, write_report

REPORT = {
    'p': 5,
    'k': 2,
    'rows': [
        {'b': 1, 'digits': [3, 2]},
        {'b': 2, 'digits': [1]},
    ],
}


def test_table_rows_merge_scalars():
    rows = table_rows(REPORT)
    assert rows[0] == {'p': 5, 'k': 2, 'b': 1, 'digits': [3, 2]}


def test_table_rows_without_list():
    assert table_rows({'p': 5, 'passed': True}) == [{'p': 5, 'passed': True}]


def test_json_is_sorted():
    text = render(REPORT, 'json')
    assert json.loads(text) == REPORT
    assert text.index('"k"') < text.index('"p"')


def test_csv_round_trip_through_file(tmp_path):
    path = tmp_path / "mu_star.csv"
    write_report(REPORT, 'csv', str(path))
    df = read_csv_report(str(path))
    assert list(df.columns) == ['p', 'k', 'b', 'digits']
    assert df['b'].tolist() == [1, 2]
    assert json.loads(df['digits'][0]) == [3, 2]


def test_unknown_format():
    with pytest.raises(ValueError):
        render(REPORT, 'xml')
