"""Verification reports shared by the library and the command line."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

PASS = "pass"
FAIL = "fail"
REDUCED = "reduced-to-ideal"
# a mismatch recorded at a parameter point where the identity is not claimed
NONGENERIC = "non-generic"


@dataclass
class Check:
    ident: str
    status: str
    residual: str = ""
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    input_digest: str = ""

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def status(self) -> str:
        return PASS if self.ok else FAIL

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_dict(self, timing: bool = True) -> dict:
        from . import __version__

        checks = []
        for c in self.checks:
            d = asdict(c)
            if not timing:
                d.pop("seconds")
            checks.append(d)
        return {
            "schema": "qhred.report/1",
            "suite": self.suite,
            "status": self.status,
            "version": __version__,
            "input_digest": self.input_digest,
            "info": self.info,
            "checks": checks,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.suite}: {self.status}"]
        for k, v in sorted(self.info.items()):
            lines.append(f"  {k}: {v}")
        for c in self.checks:
            lines.append(f"  [{c.status}] {c.ident}")
            if c.residual:
                lines.append(f"      residual: {c.residual}")
        return "\n".join(lines)


def digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return h.hexdigest()[:16]
