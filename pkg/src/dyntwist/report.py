"""Structured pass/fail reports for verification routines.

Every check_* function returns a Report: an overall status plus one entry per
individual check, each with a machine-stable name and a human-readable
detail.  Rendering is deterministic so repeated runs are byte-identical.
"""

from __future__ import annotations

import json


class Report:
    def __init__(self, title: str):
        self.title = title
        self.checks: list[dict] = []
        self.extras: dict = {}

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append({"name": name, "ok": bool(ok), "detail": detail})

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def failures(self) -> list[dict]:
        return [c for c in self.checks if not c["ok"]]

    def first_failure(self) -> dict | None:
        fails = self.failures()
        return fails[0] if fails else None

    def to_text(self) -> str:
        lines = [f"== {self.title}: {'CERTIFIED' if self.ok else 'FAILED'} =="]
        for c in self.checks:
            mark = "ok " if c["ok"] else "FAIL"
            detail = f"  {c['detail']}" if c["detail"] else ""
            lines.append(f"[{mark}] {c['name']}{detail}")
        for k in sorted(self.extras):
            lines.append(f"-- {k}: {self.extras[k]}")
        return "\n".join(lines)

    def to_machine(self) -> str:
        payload = {
            "title": self.title,
            "status": "certified" if self.ok else "failed",
            "checks": self.checks,
            "extras": {k: str(v) for k, v in sorted(self.extras.items())},
        }
        return json.dumps(payload, sort_keys=True)

    def __repr__(self):
        return f"<Report {self.title!r} ok={self.ok} checks={len(self.checks)}>"
