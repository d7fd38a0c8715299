"""Structured check reports with deterministic serialization.

A report is a list of rows (check id, location, value, tolerance, verdict)
plus a provenance block echoing the run configuration; two runs with the
same configuration and seed serialize to identical bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckRow:
    check: str
    location: str
    value: float
    tolerance: float
    passed: bool


@dataclass
class CheckReport:
    rows: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def add(self, check: str, location: str, value: float, tolerance: float,
            passed: bool | None = None) -> CheckRow:
        """Append a row; default verdict is |value| <= tolerance."""
        if passed is None:
            passed = abs(value) <= tolerance
        row = CheckRow(check=check, location=location, value=float(value),
                       tolerance=float(tolerance), passed=bool(passed))
        self.rows.append(row)
        return row

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def summary(self) -> str:
        n_fail = sum(1 for r in self.rows if not r.passed)
        verdict = "PASS" if n_fail == 0 else "FAIL"
        return f"{verdict} ({len(self.rows) - n_fail}/{len(self.rows)} checks)"


def _fmt_value(v: float) -> str:
    return f"{v:.9e}"


def _fmt_tol(t: float) -> str:
    return repr(float(t))


def _emit_table(report: CheckReport) -> str:
    lines = []
    for key in sorted(report.provenance):
        lines.append(f"# {key} = {report.provenance[key]}")
    header = f"{'check':<28} {'location':<26} {'value':>16} {'tolerance':>12} verdict"
    lines.append(header)
    lines.append("-" * len(header))
    for r in report.rows:
        lines.append(f"{r.check:<28} {r.location:<26} {_fmt_value(r.value):>16} "
                     f"{_fmt_tol(r.tolerance):>12} {'pass' if r.passed else 'FAIL'}")
    lines.append(f"summary: {report.summary}")
    return "\n".join(lines) + "\n"


def _emit_records(report: CheckReport) -> str:
    lines = [json.dumps({"type": "provenance", **report.provenance}, sort_keys=True)]
    for r in report.rows:
        lines.append(json.dumps({
            "type": "row", "check": r.check, "location": r.location,
            "value": _fmt_value(r.value), "tolerance": _fmt_tol(r.tolerance),
            "passed": r.passed,
        }, sort_keys=True))
    lines.append(json.dumps({"type": "summary", "passed": report.passed,
                             "text": report.summary}, sort_keys=True))
    return "\n".join(lines) + "\n"


def _emit_csv(report: CheckReport) -> str:
    lines = ["check,location,value,tolerance,verdict"]
    for r in report.rows:
        location = r.location.replace(",", ";")
        lines.append(f"{r.check},{location},{_fmt_value(r.value)},"
                     f"{_fmt_tol(r.tolerance)},{'pass' if r.passed else 'FAIL'}")
    lines.append(f"summary,,,,{'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


FORMATS = ("table", "records", "csv")


def emit_report(report: CheckReport, fmt: str = "table") -> bytes:
    if fmt == "table":
        text = _emit_table(report)
    elif fmt == "records":
        text = _emit_records(report)
    elif fmt == "csv":
        text = _emit_csv(report)
    else:
        raise ValueError(f"unknown output format: {fmt!r}")
    return text.encode("utf-8")
