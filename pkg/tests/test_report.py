import math

import pytest

from grandmorrey.report import CSV_HEADER, CheckResult, Report, emit_report, parse_report
from grandmorrey.errors import UnsupportedFormat


def sample():
    checks = [CheckResult("a", 1.0, 2.0), CheckResult("b", 0.1 + 0.2, 0.3, 1.0),
              CheckResult("c", 5.0, 1.0, 4.0, witness={"x": 3, "eps": 0.25})]
    return Report({"task": "verify", "params": {"p": 2.0}}, "0.1.0",
                  {"sup_ratio": 1 / 3, "list": [1.0, 2.5], "n": 7}, checks, wall_time=1.5)


def test_pass_rule():
    assert CheckResult("x", 1.0, 1.0).passed
    assert CheckResult("x", 0.1 + 0.2, 0.3).passed  # within the 1e-12 slack
    assert not CheckResult("x", 1.1, 1.0).passed
    assert CheckResult("x", 3.9, 1.0, 4.0).passed
    assert CheckResult("x", 2.0, 0.5).kappa_needed == 4.0
    assert CheckResult("x", 1.0, 0.0).kappa_needed == math.inf
    assert not sample().passed


def test_csv_layout():
    text = emit_report(sample(), "csv").decode()
    lines = text.splitlines()
    assert lines[0] == "name,lhs,rhs,kappa,pass" == ",".join(CSV_HEADER)
    assert lines[1] == "a,1,2,1,true"
    assert lines[2].startswith("b,0.30000000000000004,0.29999999999999999,")
    assert lines[3].endswith(",false")


def test_json_round_trip():
    data = emit_report(sample(), "json")
    assert emit_report(parse_report(data), "json") == data
    assert b"wall_time" not in data
    timed = emit_report(sample(), "json", include_timing=True)
    assert b"wall_time" in timed
    assert emit_report(parse_report(timed), "json", include_timing=True) == timed


def test_seventeen_digits():
    data = emit_report(sample(), "json").decode()
    assert "0.33333333333333331" in data


def test_unsupported_format():
    with pytest.raises(UnsupportedFormat):
        emit_report(sample(), "xml")
