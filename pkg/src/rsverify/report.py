"""CheckReport: the machine-readable outcome of one verification."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
FINDING = "finding"


@dataclass
class CheckReport:
    check: str
    params: dict = field(default_factory=dict)
    status: str = PASS
    residual: str = "0"
    elapsed_ms: int = 0
    paper_ref: str = ""
    details: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def fail(self, residual: str, **details) -> "CheckReport":
        self.status = FAIL
        self.residual = residual
        self.details.update(details)
        return self

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "residual": self.residual,
            "elapsed_ms": int(self.elapsed_ms) if timing else 0,
            "paper_ref": self.paper_ref,
        }
        if self.details:
            d["details"] = self.details
        if self.artifacts:
            d["artifacts"] = list(self.artifacts)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(_plain(self.to_dict(timing)), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(
            check=d["check"], params=d.get("params", {}), status=d["status"],
            residual=d.get("residual", ""), elapsed_ms=int(d.get("elapsed_ms", 0)),
            paper_ref=d.get("paper_ref", ""), details=d.get("details", {}),
            artifacts=d.get("artifacts", []),
        )


def _plain(obj: Any):
    """JSON-safe copy: tuples to lists, Fractions and complex numbers to strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    return str(obj)


@contextmanager
def timed(report: CheckReport):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed_ms = int(round((time.perf_counter() - t0) * 1000))
