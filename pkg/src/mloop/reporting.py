"""Check-result container shared by the verification bridges and the CLI."""

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    witness: Optional[Any] = None
    millis: int = 0

    @property
    def passed(self):
        return self.status == "pass"

    def as_dict(self):
        return {
            "name": self.name,
            "status": self.status,
            "witness": self.witness,
            "millis": self.millis,
        }
