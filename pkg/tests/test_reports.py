import io
import json
import math

import pandas as pd
import pytest

from polylog_lipschitz.commons import ConfigError, parse_complex
from polylog_lipschitz.reports import (
    CSV_COLUMNS,
    DefectReport,
    records_to_frame,
    render,
    sort_records,
    summarize,
    to_csv,
    to_jsonl,
    to_pretty,
    write_records,
)


def report(n=1, lhs=1.0 + 1e-9j, rhs=1.0 + 0j, tolerance=1e-8, **kwargs):
    return DefectReport("lipschitz", n, lhs, rhs, tolerance, **kwargs)


def test_defects_are_recomputed_from_the_sides():
    r = report(lhs=3 + 4j, rhs=0j, tolerance=1.0)
    assert r.abs_defect == 5.0
    # zero right side: the relative defect falls back to the absolute one
    assert r.rel_defect == 5.0
    r = report(lhs=2.5, rhs=2.0)
    assert r.rel_defect == pytest.approx(0.25)


def test_pass_rule_uses_the_smaller_defect():
    # large values: abs defect 1e-6 but relative 1e-12
    assert report(lhs=1e6 + 1e-6, rhs=1e6, tolerance=1e-10).passed
    # small values: relative defect 1 but absolute 1e-12
    assert report(lhs=2e-12, rhs=1e-12, tolerance=1e-10).passed
    assert not report(lhs=1.1, rhs=1.0, tolerance=1e-3).passed
    assert not report(lhs=complex(math.nan, 0), rhs=1.0).passed


def test_to_json():
    data = report(tau=0.25 + 1j, K=1000, parameters={"z": 1, "a": 2}).to_json()
    assert data["abs_defect"] == pytest.approx(1e-9)
    assert data["passed"] is True
    assert list(data["parameters"]) == ["a", "z"]
    text = to_jsonl([report(tau=0.25 + 1j)])
    line = json.loads(text)
    assert parse_complex(line["tau"]) == 0.25 + 1j
    assert parse_complex(line["lhs"]) == 1.0 + 1e-9j


def test_json_floats_round_trip_exactly():
    # a repr shorter than 17 digits still names the same double
    lhs = 0.1 + 0.2
    r = report(lhs=lhs, rhs=0.3, tail_estimate=1 / 3, tolerance=1e-300)
    line = json.loads(to_jsonl([r]))
    assert line["abs_defect"] == r.abs_defect
    assert line["tail_estimate"] == 1 / 3
    assert line["tolerance"] == 1e-300
    assert parse_complex(line["lhs"]) == lhs
    assert float(f"{r.abs_defect:.17g}") == line["abs_defect"]


def test_sorting_by_parameters():
    records = [report(n=2), report(n=-1, tau=1j), report(n=-1, tau=-1j), report(n=0)]
    ordered = sort_records(records)
    assert [(r.n, r.tau) for r in ordered] == [(-1, -1j), (-1, 1j), (0, None), (2, None)]


def test_csv_columns():
    records = [report(tau=1j, K=10, tail_estimate=1e-4, parameters={"sign_case": "P"})]
    frame = pd.read_csv(io.StringIO(to_csv(records)))
    assert list(frame.columns[: len(CSV_COLUMNS)]) == CSV_COLUMNS
    assert frame.loc[0, "im_tau"] == 1.0
    assert frame.loc[0, "sign_case"] == "P"
    assert math.isnan(records_to_frame([report()]).loc[0, "re_tau"])


def test_plain_rows_and_empty_input():
    rows = [{"kind": "appell", "n": 0, "polynomial": "1"}]
    assert json.loads(to_jsonl(rows)) == rows[0]
    assert to_jsonl([]) == ""
    assert list(records_to_frame([]).columns) == CSV_COLUMNS
    assert to_pretty([]) == "(no rows)\n"
    assert "appell" in to_pretty(rows)


def test_render_rejects_unknown_formats():
    with pytest.raises(ConfigError):
        render([report()], "xml")


def test_write_records(tmp_path, capsys):
    path = write_records([report()], "csv", tmp_path / "nested" / "out.csv")
    assert path.exists()
    assert path.read_text().startswith(",".join(CSV_COLUMNS))
    assert write_records([report()], "json") is None
    assert json.loads(capsys.readouterr().out)["identity"] == "lipschitz"


def test_summarize():
    records = [report(), report(lhs=2.0), report(lhs=1.0)]
    assert summarize(records) == {"total": 3, "passed": 2, "failed": 1}
    assert summarize([{"kind": "phi"}]) == {"total": 1, "passed": 1, "failed": 0}
