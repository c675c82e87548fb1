#!/usr/bin/env python3
"""
Report Export Module
Verification reports as pandas DataFrames, exported as CSV or structured JSON.

Reports never carry timestamps: identical invocations must give
byte-identical output.
"""

import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'structured')


@dataclass
class CheckReport:
    """Rows of a verification run; a 'FAIL' row fails the report, a 'SKIPPED' row leaves it unverified."""
    name: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    experimental: bool = False

    def add_row(self, **row):
        self.rows.append(row)
        return row

    @property
    def failures(self) -> List[Dict[str, Any]]:
        return [row for row in self.rows if row.get('verdict') == 'FAIL']

    @property
    def skipped(self) -> List[Dict[str, Any]]:
        return [row for row in self.rows if row.get('verdict') == 'SKIPPED']

    @property
    def status(self) -> str:
        if self.failures:
            return 'FAIL'
        return 'SKIPPED' if self.skipped else 'PASS'

    @property
    def passed(self) -> bool:
        return self.status == 'PASS'

    def to_frame(self, columns: Optional[List[str]] = None) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows)
        if columns is not None:
            frame = frame.reindex(columns=columns)
        return frame

    def to_dict(self) -> Dict[str, Any]:
        return {
            'report': self.name,
            'status': self.status,
            'experimental': self.experimental,
            'details': self.details,
            'rows': self.rows,
        }


def _clean(value):
    """JSON-safe copy: tuples to lists, non-finite floats to strings."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def to_structured(payload: Any) -> str:
    if hasattr(payload, 'to_dict'):
        payload = payload.to_dict()
    return json.dumps(_clean(payload), indent=2, default=str) + '\n'


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator='\n')


def summary_frame(reports: Iterable[CheckReport]) -> pd.DataFrame:
    """One line per report, like the scenario summary export."""
    return pd.DataFrame([
        {
            'report': r.name,
            'status': r.status,
            'rows': len(r.rows),
            'failed': len(r.failures),
            'experimental': r.experimental,
        }
        for r in reports
    ])


def render(frame: pd.DataFrame, payload: Any, fmt: str) -> str:
    if fmt == 'csv':
        return to_csv(frame)
    if fmt == 'structured':
        return to_structured(payload)
    raise ValueError(f"Unknown output format '{fmt}' (expected one of {', '.join(FORMATS)})")


def write_output(text: str, out: Optional[str] = None, stream=None):
    """Write to `out` if given, else to `stream` (stdout by default)."""
    if out:
        Path(out).write_text(text, encoding='utf-8')
        logger.info(f"✅ Report written to {out}")
        return
    (stream or sys.stdout).write(text)
