"""Suite reports and certificates, plus their deterministic JSON encoding."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator

SCHEMA_VERSION = "1.0"


def fmt_rat(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


def jsonable(obj: Any) -> Any:
    """Convert nested values to plain JSON types; rationals become "p/q"."""
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return fmt_rat(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class Fact:
    desc: str
    ok: bool
    data: Any = None

    def to_json(self) -> dict:
        return {"desc": self.desc, "ok": bool(self.ok), "data": jsonable(self.data)}


@dataclass
class Certificate:
    """A finite list of checked facts; the conclusion is their conjunction."""

    claim: str
    facts: list[Fact] = field(default_factory=list)

    def add(self, desc: str, ok: bool, data: Any = None) -> bool:
        self.facts.append(Fact(desc, bool(ok), data))
        return bool(ok)

    @property
    def conclusion(self) -> bool:
        return bool(self.facts) and all(f.ok for f in self.facts)

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "facts": [f.to_json() for f in self.facts],
            "conclusion": self.conclusion,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        cert = cls(data["claim"], [Fact(f["desc"], f["ok"], f.get("data")) for f in data["facts"]])
        if cert.conclusion != data["conclusion"]:
            raise ValueError(f"certificate {cert.claim!r}: stored conclusion disagrees with its facts")
        return cert


@dataclass
class Report:
    suite: str
    params: dict[str, Any]
    instances_checked: int = 0
    hypothesis_not_met: int = 0
    violations: list[Any] = field(default_factory=list)
    certificates: list[Certificate] = field(default_factory=list)
    diagnostics: dict[str, Any] = field(default_factory=dict)
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations and all(c.conclusion for c in self.certificates)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "params": jsonable(self.params),
            "instances_checked": self.instances_checked,
            "hypothesis_not_met": self.hypothesis_not_met,
            "violations": jsonable(self.violations),
            "certificates": [c.to_json() for c in self.certificates],
            "diagnostics": jsonable(self.diagnostics),
        }
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True) + "\n"

    @contextmanager
    def timed(self) -> Iterator["Report"]:
        start = time.perf_counter()
        try:
            yield self
        finally:
            self.elapsed_ms = int((time.perf_counter() - start) * 1000)
