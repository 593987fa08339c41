from typing import Any, Optional

from pydantic import BaseModel, Field

from src.core.enums.anchors import CheckAnchor


class CheckReport(BaseModel):
    name: str
    anchor: CheckAnchor
    lhs: float = 0.0
    rhs: float = 0.0
    margin: float = 0.0
    passed: bool = True
    skipped: bool = False
    informational: bool = False
    note: str = ""
    details: dict[str, Any] = Field(default_factory=dict)

    class Config:
        extra = "forbid"

    @classmethod
    def inequality(
        cls,
        name: str,
        anchor: CheckAnchor,
        lhs: float,
        rhs: float,
        tolerance: float,
        note: str = "",
        details: Optional[dict[str, Any]] = None,
    ) -> "CheckReport":
        """Report for ``lhs <= rhs`` accepted up to ``tolerance``."""
        return cls(
            name=name,
            anchor=anchor,
            lhs=float(lhs),
            rhs=float(rhs),
            margin=float(rhs - lhs),
            passed=bool(lhs <= rhs + tolerance),
            note=note,
            details=details or {},
        )

    @classmethod
    def skip(
        cls, name: str, anchor: CheckAnchor, note: str, **details: Any
    ) -> "CheckReport":
        return cls(name=name, anchor=anchor, skipped=True, note=note, details=details)

    @property
    def failed(self) -> bool:
        return not (self.passed or self.skipped or self.informational)

    def as_row(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "check": self.anchor.value,
            "anchor": self.anchor.citation,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "pass": self.passed,
            "skipped": self.skipped,
            "note": self.note,
        }
