"""
Defect reports and their serialization (JSON lines, CSV, pretty tables).

Any record with ``to_json()``, ``to_row()`` and ``sort_key()`` can be
emitted; DefectReport is the one produced by the numerical identities.
"""

from __future__ import annotations

import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from .commons import ConfigError, custom_encoder, format_complex

FORMATS = ("json", "csv", "pretty")

CSV_COLUMNS = [
    "identity",
    "n",
    "re_tau",
    "im_tau",
    "K",
    "abs_defect",
    "rel_defect",
    "tail_estimate",
]


@dataclass(frozen=True)
class DefectReport:
    identity: str
    n: int
    lhs: complex
    rhs: complex
    tolerance: float
    K: int = 0
    tau: Optional[complex] = None
    q: Optional[complex] = None
    tail_estimate: float = 0.0
    descriptor: str = "bernoulli"
    parameters: Dict[str, object] = field(default_factory=dict)

    @property
    def abs_defect(self) -> float:
        return abs(complex(self.lhs) - complex(self.rhs))

    @property
    def rel_defect(self) -> float:
        scale = abs(complex(self.rhs))
        if scale == 0:
            return self.abs_defect
        return self.abs_defect / scale

    @property
    def passed(self) -> bool:
        if not (math.isfinite(self.abs_defect)):
            return False
        return min(self.abs_defect, self.rel_defect) <= self.tolerance

    def sort_key(self):
        tau = complex(self.tau) if self.tau is not None else 0j
        q = complex(self.q) if self.q is not None else 0j
        extra = json.dumps(self.parameters, sort_keys=True, default=custom_encoder)
        return (
            self.identity,
            self.descriptor,
            self.n,
            tau.real,
            tau.imag,
            q.real,
            q.imag,
            self.K,
            extra,
        )

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "descriptor": self.descriptor,
            "n": self.n,
            "tau": self.tau,
            "q": self.q,
            "K": self.K,
            "lhs": complex(self.lhs),
            "rhs": complex(self.rhs),
            "abs_defect": self.abs_defect,
            "rel_defect": self.rel_defect,
            "tail_estimate": self.tail_estimate,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "parameters": dict(sorted(self.parameters.items())),
        }

    def to_row(self) -> dict:
        tau = complex(self.tau) if self.tau is not None else None
        q = complex(self.q) if self.q is not None else None
        row = {
            "identity": self.identity,
            "n": self.n,
            "re_tau": tau.real if tau is not None else math.nan,
            "im_tau": tau.imag if tau is not None else math.nan,
            "K": self.K,
            "abs_defect": self.abs_defect,
            "rel_defect": self.rel_defect,
            "tail_estimate": self.tail_estimate,
            "descriptor": self.descriptor,
            "re_q": q.real if q is not None else math.nan,
            "im_q": q.imag if q is not None else math.nan,
            "lhs": format_complex(self.lhs),
            "rhs": format_complex(self.rhs),
            "passed": self.passed,
        }
        for key, value in sorted(self.parameters.items()):
            row[key] = json.dumps(value, default=custom_encoder) if isinstance(value, (list, dict)) else value
        return row


def sort_records(records: Iterable) -> List:
    return sorted(records, key=lambda r: r.sort_key())


def records_to_frame(records: Sequence) -> pd.DataFrame:
    rows = [r.to_row() if hasattr(r, "to_row") else dict(r) for r in records]
    frame = pd.DataFrame(rows)
    if frame.empty:
        return pd.DataFrame(columns=CSV_COLUMNS)
    leading = [c for c in CSV_COLUMNS if c in frame.columns]
    rest = [c for c in frame.columns if c not in leading]
    return frame[leading + rest]


def to_jsonl(records: Sequence) -> str:
    lines = [
        json.dumps(r.to_json() if hasattr(r, "to_json") else r, default=custom_encoder)
        for r in records
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def to_csv(records: Sequence) -> str:
    return records_to_frame(records).to_csv(index=False, float_format="%.17g")


def to_pretty(records: Sequence) -> str:
    frame = records_to_frame(records)
    if frame.empty:
        return "(no rows)\n"
    return frame.to_string(index=False) + "\n"


def render(records: Sequence, fmt: str) -> str:
    if fmt == "json":
        return to_jsonl(records)
    if fmt == "csv":
        return to_csv(records)
    if fmt == "pretty":
        return to_pretty(records)
    raise ConfigError(f"Unknown output format '{fmt}' (expected one of {', '.join(FORMATS)})")


def write_records(records: Sequence, fmt: str, out=None) -> Optional[Path]:
    """Write rendered records to ``out`` (a path) or to stdout when out is None."""
    text = render(records, fmt)
    if out is None:
        sys.stdout.write(text)
        return None
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logging.info(f"Wrote {len(records)} row(s) to {path}")
    return path


def summarize(records: Sequence) -> Dict[str, int]:
    passed = sum(1 for r in records if getattr(r, "passed", True))
    return {"total": len(records), "passed": passed, "failed": len(records) - passed}
