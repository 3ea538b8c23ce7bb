"""Pass/fail records shared by the structure checks and the command line."""

from __future__ import annotations

import json
import time
import traceback
from dataclasses import dataclass, field
from typing import Callable

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


@dataclass
class Check:
    check_id: str
    status: str
    detail: str = ""
    elapsed_ms: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {"id": self.check_id, "status": self.status, "detail": self.detail}
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def overall(self) -> str:
        return FAIL if any(c.status == FAIL for c in self.checks) else PASS

    @property
    def passed(self) -> bool:
        return self.overall == PASS

    def add(self, check_id: str, status: str, detail: str = "", elapsed_ms: float = 0.0) -> Check:
        if status not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"bad status {status!r}")
        check = Check(check_id, status, detail, elapsed_ms)
        self.checks.append(check)
        return check

    def record(self, check_id: str, ok: bool, detail: str = "", elapsed_ms: float = 0.0) -> Check:
        return self.add(check_id, PASS if ok else FAIL, detail, elapsed_ms)

    def skip(self, check_id: str, detail: str = "") -> Check:
        return self.add(check_id, SKIPPED, detail)

    def run(self, check_id: str, fn: Callable[[], object]) -> Check:
        """Time ``fn``; a truthy result or a (bool, detail) pair decides the status.

        Exceptions become FAIL entries carrying the exception text.
        """
        start = time.perf_counter()
        try:
            result = fn()
        except Exception as exc:  # a crashing check is a failed check
            elapsed = (time.perf_counter() - start) * 1000
            last = traceback.format_exception_only(type(exc), exc)[-1].strip()
            return self.add(check_id, FAIL, last, elapsed)
        elapsed = (time.perf_counter() - start) * 1000
        if isinstance(result, tuple):
            ok, detail = result
        else:
            ok, detail = bool(result), ""
        if ok is None:
            return self.add(check_id, SKIPPED, detail, elapsed)
        return self.record(check_id, ok, detail, elapsed)

    def extend(self, other: VerificationReport, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.check_id, c.status, c.detail, c.elapsed_ms))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_json(self, timing: bool = True) -> dict:
        return {
            "suite": self.suite,
            "overall": self.overall,
            "checks": [c.to_json(timing) for c in self.checks],
        }

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=1, sort_keys=True) + "\n"

    def to_text(self, timing: bool = True) -> str:
        lines = [f"suite {self.suite}"]
        for c in self.checks:
            line = f"{c.status:7} {c.check_id}"
            if c.detail:
                line += f"  {c.detail}"
            if timing:
                line += f"  [{c.elapsed_ms:.0f} ms]"
            lines.append(line)
        lines.append(f"overall {self.overall}")
        return "\n".join(lines) + "\n"
