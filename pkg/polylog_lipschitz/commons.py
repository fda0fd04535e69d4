import json
import logging
import math
import os
import re
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

TOLERANCE_ENV_VAR = "POLYLOG_LIPSCHITZ_TOL"
DEFAULT_TOLERANCE = 1e-8


class PolylogLipschitzError(RuntimeError):
    pass


class RingMismatchError(PolylogLipschitzError, ValueError):
    pass


class NonUnitError(PolylogLipschitzError, ZeroDivisionError):
    pass


class CompositionError(PolylogLipschitzError, ValueError):
    pass


class OrderGuardError(PolylogLipschitzError, ValueError):
    pass


class ConsistencyError(PolylogLipschitzError, AssertionError):
    pass


class ConfigError(PolylogLipschitzError, ValueError):
    pass


class DomainError(PolylogLipschitzError, ValueError):
    """Evaluation point on a pole, a cut, or outside every convergence region."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


def open_json(path) -> object:
    """Open a JSON file and return its content."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"File not found: {path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in {path}: {e}") from e


def format_rational(value) -> str:
    """Exact "num/den" form, den omitted when 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"Invalid rational '{text}'") from e


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def format_complex(value: complex) -> str:
    value = complex(value)
    sign = "-" if math.copysign(1.0, value.imag) < 0 else "+"
    return f"{format_float(value.real)}{sign}{format_float(abs(value.imag))}i"


_TERM_RE = re.compile(
    r"([+-]?)((?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)?([ij]?)"
)


def parse_complex(text: str) -> complex:
    """
    Parse "a+bi" style strings: "0.5", "i", "-i", "2i", "0.3+0.7i", "1/4+i".
    """
    raw = str(text).strip().replace(" ", "")
    if not raw:
        raise ConfigError("Empty complex value")
    value = 0j
    pos = 0
    while pos < len(raw):
        match = _TERM_RE.match(raw, pos)
        sign, number, unit = match.groups()
        if match.end() == pos or not (number or unit) or (pos > 0 and not sign):
            raise ConfigError(f"Invalid complex value '{text}'")
        magnitude = float(parse_rational(number)) if number else 1.0
        term = -magnitude if sign == "-" else magnitude
        value += complex(0.0, term) if unit else complex(term, 0.0)
        pos = match.end()
    return value


def parse_axis(spec: str) -> np.ndarray:
    """Parse a "start:stop:count" axis (inclusive endpoints)."""
    parts = str(spec).split(":")
    if len(parts) != 3:
        raise ConfigError(f"Invalid axis '{spec}', expected start:stop:count")
    try:
        start, stop = float(parse_rational(parts[0])), float(parse_rational(parts[1]))
        count = int(parts[2])
    except ValueError as e:
        raise ConfigError(f"Invalid axis '{spec}'") from e
    if count < 1:
        raise ConfigError(f"Axis '{spec}' is empty")
    return np.linspace(start, stop, count)


def parse_polar_grid(spec: str) -> List[complex]:
    """
    Parse "r0:r1:nr@t0:t1:nt" into points r·e^{2πi t} (angles in turns).
    """
    if "@" not in str(spec):
        raise ConfigError(f"Invalid polar grid '{spec}', expected RADII@TURNS")
    radii_spec, turns_spec = str(spec).split("@", 1)
    radii = parse_axis(radii_spec)
    turns = parse_axis(turns_spec)
    return [complex(r * np.exp(2j * np.pi * t)) for r in radii for t in turns]


def parse_int_range(spec: str) -> List[int]:
    """Parse "a..b" (inclusive), a single integer, or a comma list."""
    text = str(spec).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ConfigError(f"Empty integer range '{spec}'")
            return list(range(lo, hi + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"Invalid integer range '{spec}'") from e


def custom_encoder(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, complex):
        return format_complex(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"Object of type {obj.__class__.__name__} is not JSON serializable")


def dumps(data, indent: Optional[int] = 2) -> str:
    return json.dumps(data, indent=indent, default=custom_encoder, sort_keys=False)


def save_dict_as_json(data, filepath):
    """
    Save a dictionary (or list) as a JSON file.

    Args:
        data: The data to be saved.
        filepath: The JSON file where the data will be saved.
    """
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    with open(filepath, "w", encoding="utf-8") as json_file:
        json.dump(data, json_file, indent=2, default=custom_encoder)
        json_file.write("\n")


def setup_logging(log_file: Optional[str] = None, level: str = "INFO"):
    """Configure logging to stderr and, optionally, to a file."""
    handlers: Sequence[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers = [logging.FileHandler(log_file, mode="w"), *handlers]
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=list(handlers),
        force=True,
    )


def default_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOLERANCE
    try:
        value = float(raw)
    except ValueError as e:
        raise ConfigError(f"{TOLERANCE_ENV_VAR}='{raw}' is not a number") from e
    if not value > 0:
        raise ConfigError(f"{TOLERANCE_ENV_VAR} must be positive, got {raw}")
    return value


def ensure_finite(value: complex, what: str = "value") -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError("non-finite input", f"{what}={value}")
    return value
