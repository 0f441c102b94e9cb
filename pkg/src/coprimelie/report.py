"""Structured verification reports and their serialisation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

PASS = "pass"
FAIL = "fail"
ABSTAIN = "abstain"
SKIP = "skip"
STATUSES = (PASS, FAIL, ABSTAIN, SKIP)


@dataclass
class CheckRecord:
    name: str
    status: str
    witnesses: dict[str, Any] = field(default_factory=dict)
    observed: dict[str, Any] = field(default_factory=dict)
    note: str = ""
    role: str = "check"  # "hypothesis", "conclusion" or plain "check"

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and not self.witnesses:
            raise ValueError(f"failed check {self.name!r} must carry a witness")
        if self.status == ABSTAIN and not self.note:
            raise ValueError(f"abstaining check {self.name!r} must explain its cap")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "role": self.role,
            "witnesses": _jsonable(self.witnesses),
            "observed": _jsonable(self.observed),
            "note": self.note,
        }


@dataclass
class ScenarioReport:
    title: str
    config: dict[str, Any] = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, name: str, status: str, **kw) -> CheckRecord:
        rec = CheckRecord(name, status, **kw)
        self.checks.append(rec)
        return rec

    def check(self, name: str, ok: bool, witnesses=None, **kw) -> CheckRecord:
        """Record a pass or a fail; a fail must come with ``witnesses``."""
        return self.add(name, PASS if ok else FAIL, witnesses={} if ok else (witnesses or {}), **kw)

    def extend(self, other: "ScenarioReport", prefix: str = "") -> None:
        for rec in other.checks:
            self.checks.append(
                CheckRecord(prefix + rec.name, rec.status, rec.witnesses, rec.observed, rec.note, rec.role)
            )

    def __getitem__(self, name: str) -> CheckRecord:
        for rec in self.checks:
            if rec.name == name:
                return rec
        raise KeyError(name)

    def names(self) -> list[str]:
        return [r.name for r in self.checks]

    @property
    def status(self) -> str:
        states = {r.status for r in self.checks}
        if FAIL in states:
            return FAIL
        if ABSTAIN in states:
            return ABSTAIN
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "title": self.title,
            "config": _jsonable(self.config),
            "status": self.status,
            "checks": [r.to_dict() for r in self.checks],
        }
        if include_timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return obj.item()
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def overall_status(reports: Iterable[ScenarioReport]) -> str:
    states = {r.status for r in reports}
    if FAIL in states:
        return FAIL
    if ABSTAIN in states:
        return ABSTAIN
    return PASS


def emit_report(reports, fmt: str = "json", include_timing: bool = False) -> bytes:
    """Serialise one report or a list of them.

    JSON output has sorted keys; text output is tab-delimited, one line per
    check.  Timing is left out by default so identical inputs give identical
    bytes.
    """
    if isinstance(reports, ScenarioReport):
        reports = [reports]
    reports = list(reports)
    if fmt == "json":
        doc = {
            "status": overall_status(reports),
            "reports": [r.to_dict(include_timing) for r in reports],
        }
        return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()
    if fmt == "text":
        lines = [f"# status\t{overall_status(reports)}"]
        for rep in reports:
            lines.append(f"## {rep.title}\t{rep.status}")
            for rec in rep.checks:
                obs = json.dumps(_jsonable(rec.observed), sort_keys=True)
                wit = json.dumps(_jsonable(rec.witnesses), sort_keys=True)
                lines.append("\t".join([rec.name, rec.role, rec.status, obs, wit, rec.note]))
            if include_timing:
                lines.append(f"wall_time\t{rep.wall_time:.6f}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def exit_code(reports) -> int:
    """0 all pass, 1 any fail, 2 abstentions only."""
    if isinstance(reports, ScenarioReport):
        reports = [reports]
    return {PASS: 0, FAIL: 1, ABSTAIN: 2}[overall_status(reports)]
