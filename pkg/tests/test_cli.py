import json
import math
from pathlib import Path

import pytest

from polylog_lipschitz.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, RunConfig, build_parser, main
from polylog_lipschitz.commons import TOLERANCE_ENV_VAR, parse_complex


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(TOLERANCE_ENV_VAR, raising=False)
    return tmp_path


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_appell_r_poly(capsys):
    assert main(["appell", "--desc", "bernoulli", "--max", "6", "--emit", "r-poly"]) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    assert [r["n"] for r in rows] == [1, 2, 3, 4, 5, 6]
    assert rows[0]["polynomial"] == "1"
    assert rows[1]["polynomial"] == "x - 1/2"
    assert rows[5]["coefficients"] == ["-7/120", "-13/60", "1/2", "4/3", "-5/2", "1"]


def test_appell_a_seq(capsys):
    assert main(["appell", "--desc", "a-seq", "--max", "4"]) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    polys = [r for r in rows if r["kind"] == "appell"]
    assert polys[4]["coefficients"] == ["23/30", "-2", "3", "-2", "1"]
    phi = [r for r in rows if r["kind"] == "phi"]
    assert [r["value"] for r in phi] == ["1", "0", "1", "0"]
    assert {r["parity_class"] for r in phi} == {"even-vanishing"}


def test_appell_degree_zero(capsys):
    assert main(["appell", "--max", "0"]) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    assert rows == [{"kind": "appell", "n": 0, "polynomial": "1", "coefficients": ["1"]}]


def test_appell_rejects_bad_input(capsys):
    assert main(["appell", "--desc", "nope"]) == EXIT_CONFIG
    assert main(["appell", "--max", "99"]) == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_eval(capsys):
    assert main(["eval", "--fn", "delta", "--n", "-1", "--q", "0.5"]) == EXIT_OK
    (row,) = json_lines(capsys.readouterr().out)
    assert parse_complex(row["value"]) == pytest.approx(math.log(2))
    assert row["method"] == "series"


def test_eval_reports_excluded_points(capsys):
    assert main(["eval", "--n", "1", "--q", "1,0.5"]) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    pole = [r for r in rows if r["error"]]
    assert len(pole) == 1
    assert pole[0]["error"] == "pole at q=1"
    assert pole[0]["value"] is None


def test_eval_csv(workdir):
    out = workdir / "values.csv"
    args = ["eval", "--n=-2..-1", "--grid", "0.5:0.5:1@0.25:0.75:3", "--format", "csv", "--out", str(out)]
    assert main(args) == EXIT_OK
    lines = out.read_text().splitlines()
    assert {"fn", "n", "re_q", "im_q", "re_value", "method"} <= set(lines[0].split(","))
    assert len(lines) == 1 + 6


def test_verify_classical(workdir):
    args = ["verify", "--suite", "classical-lipschitz", "--k", "2..6", "--z", "i", "--tol", "1e-8"]
    assert main(args) == EXIT_OK
    report = workdir / "reports" / "verify_classical-lipschitz.jsonl"
    rows = json_lines(report.read_text())
    assert len(rows) == 5
    assert all(r["passed"] for r in rows)


def test_verify_congruences(workdir):
    assert main(["verify", "--suite", "congruences", "--max-n", "10", "--format", "csv"]) == EXIT_OK
    assert (workdir / "reports" / "verify_congruences.csv").exists()


def test_verify_congruences_at_a_descriptor(workdir):
    assert main(["verify", "--suite", "congruences", "--max-n", "8", "--desc", "a-seq"]) == EXIT_OK
    rows = json_lines((workdir / "reports" / "verify_congruences.jsonl").read_text())
    identities = {r["congruence"] for r in rows}
    assert {"US1", "US1[a-seq]", "US2[a-seq]", "UK[a-seq]"} <= identities
    assert all(r["holds"] or not r["applicable"] for r in rows)


@pytest.mark.slow
def test_verify_congruences_full_range():
    assert main(["verify", "--suite", "congruences", "--max-n", "14"]) == EXIT_OK


# K = 10 leaves a tail of about 2/(10π) in the translate sum
SHORT_LIPSCHITZ = ["verify", "--suite", "lipschitz", "--n=-1", "--tau", "i", "--K", "10"]


def test_verify_failure_still_writes_the_report(workdir):
    assert main(SHORT_LIPSCHITZ + ["--tol", "1e-12"]) == EXIT_FAILED
    report = workdir / "reports" / "verify_lipschitz.jsonl"
    (row,) = json_lines(report.read_text())
    assert row["passed"] is False
    assert row["abs_defect"] > 1e-3
    assert main(SHORT_LIPSCHITZ + ["--tol", "0.5"]) == EXIT_OK


def test_verify_tolerance_from_environment(monkeypatch):
    monkeypatch.setenv(TOLERANCE_ENV_VAR, "1e-12")
    assert main(SHORT_LIPSCHITZ) == EXIT_FAILED
    monkeypatch.setenv(TOLERANCE_ENV_VAR, "0.5")
    assert main(SHORT_LIPSCHITZ) == EXIT_OK
    monkeypatch.setenv(TOLERANCE_ENV_VAR, "zero")
    assert main(SHORT_LIPSCHITZ) == EXIT_CONFIG


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--suite", "inversion", "--grid", "empty"],
        ["verify", "--suite", "inversion", "--desc", "unknown"],
        ["verify", "--suite", "classical-lipschitz", "--k", "1..3"],
        ["verify", "--suite", "boundary", "--x", "1.5"],
        ["verify", "--suite", "lipschitz", "--K", "0"],
        ["verify", "--suite", "inversion", "--tol", "-1"],
        ["verify", "--suite", "inversion", "--registry", "missing.json"],
    ],
)
def test_verify_configuration_errors(args):
    assert main(args) == EXIT_CONFIG


def test_verify_is_deterministic_across_jobs(workdir):
    base = ["verify", "--suite", "inversion", "--n=-1..1", "--grid", "0.5:0.5:1@0.2:0.8:3"]
    assert main(base + ["--out", "serial.jsonl"]) == EXIT_OK
    assert main(base + ["--jobs", "2", "--out", "parallel.jsonl"]) == EXIT_OK
    assert Path("serial.jsonl").read_text() == Path("parallel.jsonl").read_text()


def test_custom_registry(workdir, capsys):
    entry = {"label": "even", "g_coefficients": ["1", "0", "1/2", "0", "0", "0", "0", "0"], "max_degree": 6}
    (workdir / "registry.json").write_text(json.dumps([entry]))
    args = ["appell", "--registry", "registry.json", "--desc", "even", "--max", "2", "--emit", "polys"]
    assert main(args) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    assert rows[2]["coefficients"] == ["-5/6", "-1", "1"]


def test_formal_group(capsys):
    assert main(["formal-group", "--order", "4", "--law"]) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    kinds = {r["kind"] for r in rows}
    assert {"F", "G", "law", "axiom"} <= kinds
    assert all(r["coefficient"] == "True" for r in rows if r["kind"] == "axiom")


@pytest.mark.parametrize(
    "target, expected",
    [
        ("classical", ["1", "-1/2", "1/6", "0", "-1/30"]),
        ("a-seq", ["1", "-1/2", "1/2", "-1/2", "23/30"]),
    ],
)
def test_formal_group_specialization(capsys, target, expected):
    assert main(["formal-group", "--order", "4", "--bernoulli", "4", "--specialize", target]) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    values = [r["coefficient"] for r in rows if r["kind"] == f"bernoulli[{target}]"]
    assert values == expected
    assert len([r for r in rows if r["kind"] == "universal-bernoulli"]) == 5


def test_run_config_defaults():
    config = RunConfig("verify")
    assert config.resolved_tolerance("inversion") == 1e-10
    assert config.resolved_tolerance("congruences") == 1e-8
    assert RunConfig("verify", tolerance=1e-5).resolved_tolerance("inversion") == 1e-5
    assert config.report_path("all") == Path("reports") / "verify_all.jsonl"
    assert RunConfig("verify", fmt="pretty").report_path("boundary").suffix == ".txt"


def test_negative_n_needs_the_equals_form():
    args = build_parser().parse_args(["eval", "--n=-3..3", "--q", "0.5"])
    assert args.n == "-3..3"
