"""Verification records and their CSV / JSON-lines serialisation."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Iterable

import mpmath

SIG_DIGITS = 30


def fmt(value: Any) -> Any:
    """Stable text form: ints exact, multiprecision reals at 30 digits."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (mpmath.mpf, float)):
        return mpmath.nstr(mpmath.mpf(value), SIG_DIGITS, min_fixed=-5, max_fixed=SIG_DIGITS)
    if isinstance(value, mpmath.mpc):
        return f"{fmt(value.real)}{'+' if value.imag >= 0 else '-'}{fmt(abs(value.imag))}j"
    if isinstance(value, (tuple, list)):
        return " ".join(str(fmt(v)) for v in value)
    return str(value)


@dataclass
class BoundReport:
    """Outcome of checking one claim over a finite range.

    ``worst_margin`` is min(bound - actual) over the range; ``passed`` holds
    exactly when every individual check in the range held.
    """

    claim_id: str
    range: tuple[int, int]
    worst_margin: Any
    worst_location: Any
    passed: bool
    rows: list[dict] = field(default_factory=list)
    columns: tuple[str, ...] = ()
    notes: str = ""
    failures: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "range": f"{self.range[0]}..{self.range[1]}",
            "worst_margin": fmt(self.worst_margin),
            "worst_location": fmt(self.worst_location),
            "pass": self.passed,
            "notes": self.notes,
        }


def write_csv(rows: Iterable[dict], columns: Iterable[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n",
                            extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: fmt(v) for k, v in row.items()})
    return buf.getvalue()


def write_jsonl(rows: Iterable[dict]) -> str:
    return "".join(json.dumps({k: fmt(v) for k, v in row.items()}) + "\n" for row in rows)
