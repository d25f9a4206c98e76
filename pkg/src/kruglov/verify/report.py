"""Structured pass/fail/inconclusive records for the claim checks."""

from __future__ import annotations

import csv
import json
import math
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

_OPS = {"<=": operator.le, "<": operator.lt, "==": operator.eq, ">=": operator.ge}


def to_jsonable(x: Any):
    """Fractions become "p/q" strings, non-finite floats become strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


@dataclass
class EvidenceRow:
    """One checked relation ``lhs op rhs`` relaxed by ``slack``.

    For ``<=`` and ``<`` the slack is added to the right-hand side; for ``==``
    it bounds ``|lhs - rhs|``; for ``>=`` it is subtracted from the right.
    """

    input: str
    lhs: Any
    rhs: Any
    slack: Any = 0
    op: str = "<="

    def holds(self) -> bool:
        if self.op == "==":
            return abs(self.lhs - self.rhs) <= self.slack
        if self.op == ">=":
            return self.lhs >= self.rhs - self.slack
        return _OPS[self.op](self.lhs, self.rhs + self.slack)

    def to_json(self) -> dict:
        return {
            "input": self.input,
            "lhs": to_jsonable(self.lhs),
            "op": self.op,
            "rhs": to_jsonable(self.rhs),
            "slack": to_jsonable(self.slack),
            "holds": self.holds(),
        }


@dataclass
class VerificationReport:
    claim_id: str
    paper_anchor: str
    parameters: dict
    verdict: str = INCONCLUSIVE
    evidence: list = field(default_factory=list)
    runtime_ms: int = 0
    summary: dict = field(default_factory=dict)

    def add(self, input, lhs, rhs, slack=0, op="<=") -> EvidenceRow:
        row = EvidenceRow(str(input), lhs, rhs, slack, op)
        self.evidence.append(row)
        return row

    @property
    def violations(self) -> list:
        return [r for r in self.evidence if not r.holds()]

    def finalize(self, inconclusive: bool = False) -> "VerificationReport":
        """fail iff a row is violated; otherwise inconclusive if flagged, else pass."""
        if self.violations:
            self.verdict = FAIL
        elif inconclusive:
            self.verdict = INCONCLUSIVE
        else:
            self.verdict = PASS
        self.evidence.sort(key=lambda r: r.input)
        return self

    def to_json(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "paper_anchor": self.paper_anchor,
            "parameters": to_jsonable(self.parameters),
            "verdict": self.verdict,
            "evidence": [r.to_json() for r in self.evidence],
            "runtime_ms": self.runtime_ms,
            "summary": to_jsonable(self.summary),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def write_csv(self, path) -> None:
        write_csv([self], path)


def write_csv(reports, path) -> None:
    """Evidence rows of several reports in one CSV file."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["claim_id", "input", "lhs", "op", "rhs", "slack", "holds"])
        for rep in reports:
            for r in rep.evidence:
                j = r.to_json()
                w.writerow([rep.claim_id, j["input"], j["lhs"], j["op"], j["rhs"], j["slack"], j["holds"]])


def exit_code(reports) -> int:
    verdicts = {r.verdict for r in reports}
    if FAIL in verdicts:
        return 1
    if INCONCLUSIVE in verdicts:
        return 2
    return 0
