"""Exact piecewise-linear oscillator standing in for sin(1/x) on [0, 1].

z(0) = 0 and z(1/k) = (-1)^k with linear interpolation between consecutive
nodes. Like sin(1/x), z oscillates between -1 and 1 infinitely often near 0, so
the image of every interval [0, h] is [-1, 1]; unlike sin(1/x) it is exactly
rational at rational inputs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .report import Report, fmt_rat, parse_rat

Rat = Fraction
ZERO, ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"interval has lo {self.lo} > hi {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise DomainError("a degenerate interval must be closed")

    @classmethod
    def closed(cls, lo, hi) -> "RatInterval":
        return cls(Fraction(lo), Fraction(hi), True, True)

    @classmethod
    def open(cls, lo, hi) -> "RatInterval":
        return cls(Fraction(lo), Fraction(hi), False, False)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def contains_interval(self, other: "RatInterval") -> bool:
        if other.lo < self.lo or (other.lo == self.lo and other.lo_closed and not self.lo_closed):
            return False
        if other.hi > self.hi or (other.hi == self.hi and other.hi_closed and not self.hi_closed):
            return False
        return True

    def interior_points(self, count: int) -> list[Fraction]:
        """``count`` evenly spaced points strictly between the endpoints."""
        if self.degenerate:
            return [self.lo] * count
        return [self.lo + self.width * j / (count + 1) for j in range(1, count + 1)]

    def to_json(self) -> dict:
        return {
            "lo": fmt_rat(self.lo),
            "hi": fmt_rat(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RatInterval":
        return cls(parse_rat(data["lo"]), parse_rat(data["hi"]), data["lo_closed"], data["hi_closed"])

    def __repr__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


UNIT = RatInterval.closed(0, 1)
FULL_RANGE = RatInterval.closed(-1, 1)


def node_value(k: int) -> Fraction:
    return ONE if k % 2 == 0 else -ONE


def zig_eval(x) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} lies outside [0, 1]")
    if x == 0:
        return ZERO
    k = math.floor(1 / x)  # 1/(k+1) < x <= 1/k
    left, right = Fraction(1, k + 1), Fraction(1, k)
    if x == right:
        return node_value(k)
    zl, zr = node_value(k + 1), node_value(k)
    return zl + (zr - zl) * (x - left) / (right - left)


def nodes_in(i: RatInterval) -> list[int]:
    """Indices k with 1/k in ``i``; ``i`` must have a positive left end."""
    if i.lo <= 0:
        raise DomainError("infinitely many nodes accumulate at 0")
    k_min = max(1, math.ceil(1 / i.hi))
    k_max = math.floor(1 / i.lo)
    return [k for k in range(k_min, k_max + 1) if Fraction(1, k) in i]


def zig_image(i: RatInterval) -> RatInterval:
    """Exact image z(i) as an interval, with attained endpoints closed."""
    if not UNIT.contains_interval(i):
        raise DomainError(f"{i} is not inside [0, 1]")
    if i.degenerate:
        v = zig_eval(i.lo)
        return RatInterval.closed(v, v)
    if i.lo == 0:
        return FULL_RANGE
    # z is strictly monotone between nodes, so extrema sit at nodes or ends.
    cands = [(zig_eval(i.lo), i.lo_closed), (zig_eval(i.hi), i.hi_closed)]
    cands += [(node_value(k), True) for k in nodes_in(i)]
    lo = min(v for v, _ in cands)
    hi = max(v for v, _ in cands)
    return RatInterval(
        lo,
        hi,
        any(att for v, att in cands if v == lo),
        any(att for v, att in cands if v == hi),
    )


def hull_image(i: RatInterval) -> tuple[Fraction, Fraction]:
    """Closed hull of z over the endpoints of ``i`` and the nodes inside it."""
    if i.lo == 0 and i.hi > 0:
        return -ONE, ONE
    vals = [zig_eval(i.lo), zig_eval(i.hi)]
    if i.lo > 0:
        vals += [node_value(k) for k in nodes_in(RatInterval.closed(i.lo, i.hi))]
    return min(vals), max(vals)


def random_interval(rng: random.Random, max_den: int = 997) -> RatInterval:
    roll = rng.random()
    if roll < 0.05:
        a = Fraction(rng.randint(0, max_den), max_den)
        return RatInterval.closed(a, a)
    a = Fraction(rng.randint(0, max_den - 1), rng.randint(1, max_den))
    b = Fraction(rng.randint(1, max_den), rng.randint(1, max_den))
    a, b = sorted((min(a, ONE), min(b, ONE)))
    if roll < 0.2:
        a = ZERO
    if a == b:
        return RatInterval.closed(a, a)
    return RatInterval(a, b, rng.random() < 0.5, rng.random() < 0.5)


def check_interval_preservation(samples: int = 200, seed: int = 0) -> Report:
    """Images of random rational intervals are intervals containing the values
    at 16 interior points and at every closed endpoint."""
    report = Report("zigzag", {"samples": samples, "seed": seed})
    rng = random.Random(seed)
    with report.timed():
        for _ in range(samples):
            i = random_interval(rng)
            report.instances_checked += 1
            try:
                img = zig_image(i)
            except DomainError as exc:
                report.violations.append({"interval": i, "error": str(exc)})
                continue
            probes = i.interior_points(16)
            probes += [x for x in (i.lo, i.hi) if x in i]
            outside = [x for x in probes if zig_eval(x) not in img]
            if outside:
                report.violations.append({"interval": i, "image": img, "outside": outside})
    return report
