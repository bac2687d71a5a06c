"""Reduction trace: an ordered log of KZ-rule applications."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["TraceRecord", "ReductionTrace", "KZ_RULES"]

# "stokes" belongs to the vocabulary but no stage of this pipeline uses it.
KZ_RULES = ("sum-by-domain", "sum-by-integrand", "change-of-variables", "stokes")


@dataclass
class TraceRecord:
    step: int
    kz_rule: str
    description: str
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kz_rule not in KZ_RULES:
            raise ValueError(f"unknown KZ rule {self.kz_rule!r}")

    def text_payload(self) -> dict:
        """The printable part of the payload (strings, numbers, lists of them)."""
        out = {}
        for k, v in self.payload.items():
            if isinstance(v, (str, int, float)) or v is None:
                out[k] = v
            elif isinstance(v, (list, tuple)) and all(isinstance(x, (str, int, float)) for x in v):
                out[k] = list(v)
            elif isinstance(v, dict) and all(isinstance(x, str) for x in v.values()):
                out[k] = dict(v)
        return out

    def format(self) -> str:
        parts = [f"step={self.step}", f"rule={self.kz_rule}", f"what={self.description}"]
        for k, v in self.text_payload().items():
            if isinstance(v, list):
                v = "; ".join(str(x) for x in v)
            elif isinstance(v, dict):
                v = ", ".join(f"{a} <- {b}" for a, b in v.items())
            parts.append(f"{k}={v}")
        return " | ".join(parts)


class ReductionTrace:
    def __init__(self):
        self.records: list[TraceRecord] = []
        self.warnings: list[str] = []

    def add(self, kz_rule: str, description: str, **payload) -> TraceRecord:
        rec = TraceRecord(len(self.records) + 1, kz_rule, description, payload)
        self.records.append(rec)
        return rec

    def warn(self, message: str):
        self.warnings.append(message)

    def by_rule(self, kz_rule: str) -> list[TraceRecord]:
        return [r for r in self.records if r.kz_rule == kz_rule]

    def find(self, stage: str) -> list[TraceRecord]:
        return [r for r in self.records if r.payload.get("stage") == stage]

    def lines(self) -> list[str]:
        out = [r.format() for r in self.records]
        out.extend(f"warning: {w}" for w in self.warnings)
        return out

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)
