import json
import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from polylog_lipschitz.commons import (
    TOLERANCE_ENV_VAR,
    ConfigError,
    DomainError,
    PolylogLipschitzError,
    custom_encoder,
    default_tolerance,
    ensure_finite,
    format_complex,
    format_rational,
    open_json,
    parse_axis,
    parse_complex,
    parse_int_range,
    parse_polar_grid,
    parse_rational,
    save_dict_as_json,
    setup_logging,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("0.5", 0.5 + 0j),
        ("i", 1j),
        ("-i", -1j),
        ("2i", 2j),
        ("0.3+0.7i", complex(0.3, 0.7)),
        ("1/4+i", complex(0.25, 1.0)),
        ("1/2-2i", complex(0.5, -2.0)),
        ("-1e-3+2.5e1j", complex(-1e-3, 25.0)),
        (" 1 + i ", complex(1, 1)),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["", "empty", "1+", "i i", "2*i", "1/0"])
def test_parse_complex_rejects_garbage(text):
    with pytest.raises(ConfigError):
        parse_complex(text)


def test_format_complex_round_trips_through_the_parser():
    for value in (complex(0.1, -0.2), complex(-3.5, 0.0), complex(1 / 3, 2 / 7)):
        assert parse_complex(format_complex(value)) == value


def test_format_rational_is_exact():
    assert format_rational(Fraction(-1, 30)) == "-1/30"
    assert format_rational(Fraction(6, 3)) == "2"
    assert parse_rational("-1/30") == Fraction(-1, 30)
    with pytest.raises(ConfigError):
        parse_rational("one third")


def test_parse_axis_and_polar_grid():
    axis = parse_axis("0:1:5")
    assert np.allclose(axis, [0, 0.25, 0.5, 0.75, 1])
    grid = parse_polar_grid("0.5:0.5:1@0.25:0.5:2")
    assert grid[0] == pytest.approx(0.5j)
    assert grid[1] == pytest.approx(-0.5)
    with pytest.raises(ConfigError):
        parse_axis("0:1:0")
    with pytest.raises(ConfigError):
        parse_polar_grid("0.5:0.7:3")


def test_parse_int_range():
    assert parse_int_range("-3..3") == [-3, -2, -1, 0, 1, 2, 3]
    assert parse_int_range("4") == [4]
    assert parse_int_range("2,5,7") == [2, 5, 7]
    for bad in ("3..1", "a..b", "empty"):
        with pytest.raises(ConfigError):
            parse_int_range(bad)


def test_error_hierarchy():
    e = DomainError("pole at q=1", "q=1")
    assert isinstance(e, PolylogLipschitzError)
    assert isinstance(e, ValueError)
    assert e.reason == "pole at q=1"
    assert "q=1" in str(e)


def test_default_tolerance_from_environment(monkeypatch):
    monkeypatch.delenv(TOLERANCE_ENV_VAR, raising=False)
    assert default_tolerance() == 1e-8
    monkeypatch.setenv(TOLERANCE_ENV_VAR, "1e-5")
    assert default_tolerance() == 1e-5
    monkeypatch.setenv(TOLERANCE_ENV_VAR, "-1")
    with pytest.raises(ConfigError):
        default_tolerance()


def test_ensure_finite():
    assert ensure_finite(1 + 2j) == 1 + 2j
    with pytest.raises(DomainError):
        ensure_finite(complex(math.inf, 0))


def test_json_helpers(tmp_path):
    data = {"b": Fraction(1, 6), "z": 1 - 2j, "x": np.float64(0.5), "k": np.int64(3)}
    path = tmp_path / "sub" / "data.json"
    save_dict_as_json(data, path)
    loaded = open_json(path)
    assert loaded == {"b": "1/6", "z": "1-2i", "x": 0.5, "k": 3}
    with pytest.raises(TypeError):
        json.dumps(object(), default=custom_encoder)

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        open_json(broken)
    with pytest.raises(FileNotFoundError):
        open_json(tmp_path / "missing.json")


def test_setup_logging_writes_file(tmp_path):
    log_file = tmp_path / "run.log"
    setup_logging(str(log_file), "DEBUG")
    logging.debug("hello from the test")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert "hello from the test" in log_file.read_text()
    setup_logging()
