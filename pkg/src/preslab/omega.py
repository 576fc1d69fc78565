"""The convergent sequence space omega+1 and its finite powers.

Subsets are finitely presented: an ``OmegaSet`` is a finite set of naturals, an
optional arithmetic tail and a flag for the limit point; a ``ProductOmegaSet``
in (omega+1)^d is a finite union of boxes of such sets, explicit points and
sequence families. Closure and compactness are decidable on both. Self maps
of omega+1 are a finite table followed by a constant or identity tail.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import DomainError
from .report import Report


class _Omega:
    """The limit point omega: larger than every natural number."""

    _instance: "_Omega | None" = None

    def __new__(cls) -> "_Omega":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Omega, ())

    def __repr__(self) -> str:
        return "omega"

    def __hash__(self) -> int:
        return hash("omega")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if isinstance(other, (int, _Omega)):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, int):
            return True
        if isinstance(other, _Omega):
            return False
        return NotImplemented

    def __le__(self, other: object) -> bool:
        return not self.__gt__(other)

    def __ge__(self, other: object) -> bool:
        return True

    def to_json(self) -> str:
        return "omega"


OMEGA = _Omega()
OrdPoint = Union[int, _Omega]


def check_point(p: object) -> OrdPoint:
    if p is OMEGA or (isinstance(p, int) and not isinstance(p, bool) and p >= 0):
        return p  # type: ignore[return-value]
    raise DomainError(f"{p!r} is not a point of omega+1")


def point_from_json(v: object) -> OrdPoint:
    return OMEGA if v == "omega" else check_point(v)


def _sort_key(p: OrdPoint) -> tuple[int, int]:
    return (1, 0) if p is OMEGA else (0, p)  # type: ignore[return-value]


# -- subsets of omega+1 -----------------------------------------------------


@dataclass(frozen=True)
class OmegaSet:
    """``explicit`` ∪ {tail_from + k*tail_step : k >= 0} ∪ ({omega} if has_omega)."""

    explicit: frozenset[int] = frozenset()
    tail_from: int | None = None
    has_omega: bool = False
    tail_step: int = 1

    def __post_init__(self) -> None:
        explicit = frozenset(self.explicit)
        if any(not isinstance(x, int) or x < 0 for x in explicit):
            raise DomainError("explicit members must be naturals")
        t, s = self.tail_from, self.tail_step
        if s < 1:
            raise DomainError("tail step must be positive")
        if t is None:
            s = 1
        else:
            if t < 0:
                raise DomainError("tail must start at a natural")
            explicit = frozenset(x for x in explicit if x < t or (x - t) % s)
            while t - s >= 0 and t - s in explicit:
                explicit -= {t - s}
                t -= s
        object.__setattr__(self, "explicit", explicit)
        object.__setattr__(self, "tail_from", t)
        object.__setattr__(self, "tail_step", s)

    @classmethod
    def finite(cls, points: Iterable[OrdPoint]) -> "OmegaSet":
        pts = list(points)
        return cls(frozenset(p for p in pts if p is not OMEGA), None, any(p is OMEGA for p in pts))

    @classmethod
    def everything(cls) -> "OmegaSet":
        return cls(frozenset(), 0, True)

    @property
    def is_finite(self) -> bool:
        return self.tail_from is None

    @property
    def is_empty(self) -> bool:
        return not self.explicit and self.tail_from is None and not self.has_omega

    def __contains__(self, p: object) -> bool:
        if p is OMEGA:
            return self.has_omega
        if not isinstance(p, int):
            return False
        if p in self.explicit:
            return True
        t = self.tail_from
        return t is not None and p >= t and (p - t) % self.tail_step == 0

    def naturals_below(self, bound: int) -> Iterator[int]:
        return (n for n in range(bound) if n in self)

    def constants(self) -> list[int]:
        out = list(self.explicit)
        if self.tail_from is not None:
            out.append(self.tail_from)
        return out

    def with_points(self, points: Iterable[OrdPoint]) -> "OmegaSet":
        pts = list(points)
        return OmegaSet(
            self.explicit | {p for p in pts if p is not OMEGA},
            self.tail_from,
            self.has_omega or any(p is OMEGA for p in pts),
            self.tail_step,
        )

    def issubset(self, other: "OmegaSet") -> bool:
        if self.has_omega and not other.has_omega:
            return False
        if any(x not in other for x in self.explicit):
            return False
        t = self.tail_from
        if t is None:
            return True
        s = self.tail_step
        if other.tail_from is None:
            return False
        # Below other's tail the members are checked one by one; beyond it the
        # residue classes must nest.
        limit = max([t, other.tail_from, *other.explicit])
        for x in range(t, limit + 1, s):
            if x not in other:
                return False
        first = t + ((limit - t + s - 1) // s) * s
        return s % other.tail_step == 0 and (first - other.tail_from) % other.tail_step == 0

    def to_json(self) -> dict:
        out = {
            "explicit": sorted(self.explicit),
            "tail_from": self.tail_from,
            "omega": self.has_omega,
        }
        if self.tail_step != 1:
            out["tail_step"] = self.tail_step
        return out

    @classmethod
    def from_json(cls, data: dict) -> "OmegaSet":
        return cls(frozenset(data["explicit"]), data["tail_from"], bool(data["omega"]), data.get("tail_step", 1))

    def __repr__(self) -> str:
        parts = [str(x) for x in sorted(self.explicit)]
        if self.tail_from is not None:
            step = "" if self.tail_step == 1 else f" step {self.tail_step}"
            parts.append(f"[{self.tail_from},..){step}")
        if self.has_omega:
            parts.append("omega")
        return "{" + ", ".join(parts) + "}"


# -- subsets of (omega+1)^d -------------------------------------------------


@dataclass(frozen=True)
class Const:
    c: int

    def at(self, k: int) -> OrdPoint:
        return self.c

    def limit(self) -> OrdPoint:
        return self.c

    def to_json(self) -> dict:
        return {"const": self.c}


@dataclass(frozen=True)
class Affine:
    """The coordinate a*k + b along the family index k."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a not in (0, 1) or self.b < 0:
            raise DomainError("affine rules need a in {0, 1} and b >= 0")

    def at(self, k: int) -> OrdPoint:
        return self.a * k + self.b

    def limit(self) -> OrdPoint:
        return OMEGA if self.a else self.b

    def to_json(self) -> dict:
        return {"affine": [self.a, self.b]}


@dataclass(frozen=True)
class OmegaConst:
    def at(self, k: int) -> OrdPoint:
        return OMEGA

    def limit(self) -> OrdPoint:
        return OMEGA

    def to_json(self) -> str:
        return "omega"


Rule = Union[Const, Affine, OmegaConst]


@dataclass(frozen=True)
class SequenceFamily:
    """The points (r_1(k), ..., r_d(k)) for every k >= start."""

    rules: tuple[Rule, ...]
    start: int = 0

    @property
    def is_infinite(self) -> bool:
        return any(isinstance(r, Affine) and r.a == 1 for r in self.rules)

    def at(self, k: int) -> tuple[OrdPoint, ...]:
        if k < self.start:
            raise DomainError("index precedes the family's start")
        return tuple(r.at(k) for r in self.rules)

    def limit(self) -> tuple[OrdPoint, ...]:
        return tuple(r.limit() for r in self.rules)

    def __contains__(self, p: tuple) -> bool:
        k = None
        for r, x in zip(self.rules, p):
            if isinstance(r, Affine) and r.a == 1:
                if x is OMEGA or x < r.b:
                    return False
                if k is not None and x - r.b != k:
                    return False
                k = x - r.b
            elif r.at(0) != x:
                return False
        return k is None or k >= self.start

    def to_json(self) -> dict:
        return {"rules": [r.to_json() for r in self.rules], "start": self.start}


@dataclass(frozen=True)
class ProductOmegaSet:
    d: int
    rectangles: tuple[tuple[OmegaSet, ...], ...] = ()
    points: tuple[tuple[OrdPoint, ...], ...] = ()
    sequences: tuple[SequenceFamily, ...] = ()

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError("dimension must be at least 1")
        for r in self.rectangles:
            if len(r) != self.d:
                raise DomainError("rectangle has the wrong dimension")
        for p in self.points:
            if len(p) != self.d:
                raise DomainError("point has the wrong dimension")
            for x in p:
                check_point(x)
        for s in self.sequences:
            if len(s.rules) != self.d:
                raise DomainError("sequence family has the wrong dimension")
        pts = tuple(sorted(set(self.points), key=lambda p: tuple(_sort_key(x) for x in p)))
        object.__setattr__(self, "points", pts)

    def __contains__(self, p: tuple) -> bool:
        p = tuple(p)
        if p in self.points:
            return True
        if any(all(x in c for x, c in zip(p, r)) for r in self.rectangles):
            return True
        return any(p in s for s in self.sequences)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "rectangles": [[c.to_json() for c in r] for r in self.rectangles],
            "points": [[x if x is not OMEGA else "omega" for x in p] for p in self.points],
            "sequences": [s.to_json() for s in self.sequences],
        }


def closure(s):
    """Topological closure in omega+1 or (omega+1)^d."""
    if isinstance(s, OmegaSet):
        if s.is_finite or s.has_omega:
            return s
        return OmegaSet(s.explicit, s.tail_from, True, s.tail_step)
    if isinstance(s, ProductOmegaSet):
        rects = tuple(tuple(closure(c) for c in r) for r in s.rectangles)
        limits = tuple(seq.limit() for seq in s.sequences if seq.is_infinite)
        return ProductOmegaSet(s.d, rects, s.points + limits, s.sequences)
    raise TypeError(f"no closure for {type(s).__name__}")


def is_compact(s) -> bool:
    """Compact iff closed, since (omega+1)^d is compact Hausdorff."""
    if isinstance(s, OmegaSet):
        return closure(s).issubset(s)
    if isinstance(s, ProductOmegaSet):
        c = closure(s)
        return all(rect_subset(r, s) for r in c.rectangles) and all(p in s for p in c.points)
    raise TypeError(f"no compactness test for {type(s).__name__}")


def missing_limit_points(s: ProductOmegaSet) -> list[tuple[OrdPoint, ...]]:
    """Limit points of the sequence families that ``s`` omits."""
    return [seq.limit() for seq in s.sequences if seq.is_infinite and seq.limit() not in s]


def rect_subset(box: tuple[OmegaSet, ...], s: ProductOmegaSet) -> bool:
    """Decide ``box ⊆ s`` by testing a finite grid of representative points.

    Past a threshold M every coordinate set is periodic with period dividing L,
    so large coordinates can be moved to any value with the same residue. Each
    coordinate gets its own slot of large values, spaced so that no sequence
    family with two unbounded coordinates can pass through the moved point.
    """
    if any(c.is_empty for c in box):
        return True
    consts: list[int] = [0]
    steps = [1]
    for c in box:
        consts += c.constants()
        steps.append(c.tail_step)
    for r in s.rectangles:
        for c in r:
            consts += c.constants()
            steps.append(c.tail_step)
    for p in s.points:
        consts += [x for x in p if x is not OMEGA]
    offsets = [0]
    for seq in s.sequences:
        for rule in seq.rules:
            if isinstance(rule, Const):
                consts.append(rule.c)
            elif isinstance(rule, Affine):
                consts.append(rule.b)
                offsets.append(rule.b)
                if rule.a:
                    consts.append(seq.start + rule.b)
    m = max(consts) + 1
    period = math.lcm(*steps)
    spread = max(offsets) - min(offsets)
    candidates = []
    for t, c in enumerate(box):
        base = 2 * m + t * period * (spread + 2)
        values: list[OrdPoint] = list(range(m)) + [base + r for r in range(period)] + [OMEGA]
        candidates.append([v for v in values if v in c])
    return all(p in s for p in itertools.product(*candidates))


# -- self maps of omega+1 -----------------------------------------------------


@dataclass(frozen=True)
class Constant:
    c: OrdPoint

    def to_json(self) -> dict:
        return {"constant": self.c.to_json() if self.c is OMEGA else self.c}


@dataclass(frozen=True)
class Identity:
    def to_json(self) -> str:
        return "identity"


Tail = Union[Constant, Identity]


@dataclass(frozen=True)
class OmegaMap:
    """n -> exceptions[n] for n < len(exceptions), then the tail rule; omega -> at_omega."""

    exceptions: tuple[OrdPoint, ...] = ()
    tail: Tail = field(default_factory=Identity)
    at_omega: OrdPoint = OMEGA

    def __post_init__(self) -> None:
        for v in self.exceptions:
            check_point(v)
        check_point(self.at_omega)
        if isinstance(self.tail, Constant):
            check_point(self.tail.c)

    @property
    def m(self) -> int:
        return len(self.exceptions)

    def __call__(self, p: OrdPoint) -> OrdPoint:
        if p is OMEGA:
            return self.at_omega
        if p < self.m:
            return self.exceptions[p]
        return self.tail.c if isinstance(self.tail, Constant) else p

    def image(self, k: OmegaSet) -> OmegaSet:
        pts = [self(x) for x in k.explicit]
        if k.has_omega:
            pts.append(self.at_omega)
        tail_from = None
        step = k.tail_step
        if k.tail_from is not None:
            t = k.tail_from
            pts += [self(x) for x in range(t, self.m, step)]
            first = t if t >= self.m else t + ((self.m - t + step - 1) // step) * step
            if isinstance(self.tail, Constant):
                pts.append(self.tail.c)
            else:
                tail_from = first
        return OmegaSet(frozenset(), tail_from, False, step).with_points(pts)

    def range_set(self) -> OmegaSet:
        return self.image(OmegaSet.everything())

    def fiber(self, y: OrdPoint) -> OmegaSet:
        pts = [n for n, v in enumerate(self.exceptions) if v == y]
        if self.at_omega == y:
            pts.append(OMEGA)
        if isinstance(self.tail, Constant):
            tail = self.m if self.tail.c == y else None
        else:
            tail = None
            if y is not OMEGA and y >= self.m:
                pts.append(y)
        return OmegaSet(frozenset(), tail, False).with_points(pts)

    def to_json(self) -> dict:
        return {
            "exceptions": [v.to_json() if v is OMEGA else v for v in self.exceptions],
            "tail": self.tail.to_json(),
            "at_omega": self.at_omega.to_json() if self.at_omega is OMEGA else self.at_omega,
        }


def is_continuous(f: OmegaMap) -> bool:
    # Only omega is non-isolated; continuity there means f(n) -> f(omega).
    if isinstance(f.tail, Constant):
        return f.at_omega == f.tail.c
    return f.at_omega is OMEGA


def has_compact_fibers(f: OmegaMap) -> bool:
    # Only a constant tail produces an infinite fiber.
    if isinstance(f.tail, Constant):
        return f.at_omega == f.tail.c
    return True


def has_compact_fibers_brute(f: OmegaMap) -> bool:
    """Oracle: build every fiber over the range and test it with ``is_compact``."""
    rng = f.range_set()
    values: list[OrdPoint] = sorted(rng.explicit) + ([OMEGA] if rng.has_omega else [])
    if rng.tail_from is not None:
        values += list(range(rng.tail_from, rng.tail_from + f.m + 2))
    return all(is_compact(f.fiber(y)) for y in values)


def is_compactness_preserving(f: OmegaMap) -> bool:
    if isinstance(f.tail, Constant):
        return True  # finite range
    return f.at_omega is OMEGA


def sample_compacta(param: int = 6) -> list[OmegaSet]:
    """Compact subsets of omega+1 used by the brute-force oracle.

    Finite sets of at most two naturals <= param (with and without omega), and
    {omega} ∪ E ∪ tail for tails starting at t <= param with step 1 or 2 and E
    at most one natural <= param.
    """
    nats = range(param + 1)
    out = []
    for size in range(3):
        for e in itertools.combinations(nats, size):
            out.append(OmegaSet(frozenset(e)))
            out.append(OmegaSet(frozenset(e), None, True))
    for t in nats:
        for step in (1, 2):
            for e in [()] + [(x,) for x in nats]:
                out.append(OmegaSet(frozenset(e), t, True, step))
    return out


def is_compactness_preserving_brute(f: OmegaMap, compacta: list[OmegaSet] | None = None) -> bool:
    compacta = sample_compacta() if compacta is None else compacta
    return all(is_compact(f.image(k)) for k in compacta)


def enumerate_maps(max_exceptions: int, max_value: int) -> Iterator[OmegaMap]:
    """All presentations with at most ``max_exceptions`` table entries and
    values in {0..max_value, omega}."""
    values: list[OrdPoint] = list(range(max_value + 1)) + [OMEGA]
    tails: list[Tail] = [Constant(v) for v in values] + [Identity()]
    for m in range(max_exceptions + 1):
        for table in itertools.product(values, repeat=m):
            for tail in tails:
                for w in values:
                    yield OmegaMap(tuple(table), tail, w)


WITNESS_SAMPLE = 25


def verify_fiber_theorem(max_exceptions: int = 3, max_value: int = 4) -> Report:
    """Compactness preserving with compact fibers implies continuous.

    Also records the necessity witnesses (compactness preserving, discontinuous,
    with a non-compact fiber) and checks the closed-form decisions against the
    brute-force oracles; any disagreement is a violation.
    """
    report = Report("omega-fiber", {"max_exceptions": max_exceptions, "max_value": max_value})
    witnesses = []
    counts = dict.fromkeys(["compactness_preserving", "continuous", "compact_fibers"], 0)
    compacta = sample_compacta()
    assert all(is_compact(k) for k in compacta)
    with report.timed():
        for f in enumerate_maps(max_exceptions, max_value):
            report.instances_checked += 1
            cp = is_compactness_preserving(f)
            cont = is_continuous(f)
            fibers = has_compact_fibers(f)
            counts["compactness_preserving"] += cp
            counts["continuous"] += cont
            counts["compact_fibers"] += fibers
            if cp != is_compactness_preserving_brute(f, compacta):
                report.violations.append({"kind": "oracle-mismatch:compactness-preserving", "map": f})
            if fibers != has_compact_fibers_brute(f):
                report.violations.append({"kind": "oracle-mismatch:compact-fibers", "map": f})
            if cont and not cp:
                report.violations.append({"kind": "continuous-not-preserving", "map": f})
            if cp and fibers and not cont:
                report.violations.append({"kind": "theorem", "map": f})
            elif cp and not cont and not fibers:
                witnesses.append(f)
        report.diagnostics.update(counts)
        report.diagnostics["witness_count"] = len(witnesses)
        # Finite range, non-compact fiber, discontinuous: Constant(0) tail with f(omega) = omega.
        report.diagnostics["constant_tail_witness"] = OmegaMap((), Constant(0), OMEGA) in witnesses
        report.diagnostics["witnesses"] = witnesses[:WITNESS_SAMPLE]
    return report
