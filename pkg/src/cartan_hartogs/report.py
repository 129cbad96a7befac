"""Structured key-value reports and delimited tables.

Reports are plain text: a header block of `key = value` lines, one
`[check NAME]` section per verification record, and optional comma-separated
tables.  All floats are printed with 17 significant digits so identical runs
are byte-identical (the timestamp line can be suppressed).
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field
from typing import Iterable


def fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, complex):
        return f"({value.real:.17g},{value.imag:.17g})"
    return str(value)


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one verification check."""

    name: str
    points: int
    max_residual: float
    tolerance: float
    passed: bool
    note: str = ""


@dataclass
class RunReport:
    """Config echo plus per-check records; passes iff every check passes."""

    command: str
    config: dict = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self, timestamp: bool = True) -> str:
        lines = [f"command = {self.command}"]
        if timestamp:
            now = datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0)
            lines.append(f"timestamp = {now.isoformat()}")
        lines.append(f"status = {'pass' if self.passed else 'fail'}")
        for key, value in self.config.items():
            lines.append(f"{key} = {fmt(value)}")
        for check in self.checks:
            lines.append("")
            lines.append(f"[check {check.name}]")
            lines.append(f"points = {check.points}")
            lines.append(f"max_residual = {fmt(check.max_residual)}")
            lines.append(f"tolerance = {fmt(check.tolerance)}")
            lines.append(f"status = {'pass' if check.passed else 'fail'}")
            if check.note:
                lines.append(f"note = {check.note}")
        lines.append("")
        return "\n".join(lines)


def render_table(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    """Comma-separated table with 17-significant-digit numbers."""
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(fmt(cell) for cell in row))
    out.append("")
    return "\n".join(out)
