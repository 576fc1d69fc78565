"""Affine copies of the middle-thirds Cantor set with exact rational arithmetic.

A ``CantorPiece`` with hull [a, b] is the set a + (b - a) * C. Membership of a
rational is decided from its eventually periodic ternary expansion, the
surjection onto [0, 1] is the Cantor function, and dyadic values have finite
ternary preimages.

A ``CantorLedger`` allocates pairwise disjoint pieces on demand: one inside
every requested interval, each tagged with the index of an enumerated open
rational interval (r_n, s_n) that contains it. Points the caller has evaluated
outside every piece are reserved, and later pieces avoid them, so a value
computed as "not in any piece" stays correct as the ledger grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import DomainError, PreslabError
from .report import fmt_rat, parse_rat
from .zigzag import RatInterval

THIRD, TWO_THIRDS = Fraction(1, 3), Fraction(2, 3)
MAX_GAP_DEPTH = 400


# -- the standard Cantor set ---------------------------------------------------


def in_standard_cantor(y: Fraction) -> bool:
    """Whether y has a ternary expansion using only the digits 0 and 2."""
    y = Fraction(y)
    if not 0 <= y <= 1:
        return False
    # y = n/d; shifting a ternary digit off keeps the denominator d.
    n, d = y.numerator, y.denominator
    seen = set()
    while n not in seen:
        if n == 0 or n == d:
            return True
        seen.add(n)
        t = 3 * n
        if t < d:
            n = t
        elif t > 2 * d:
            n = t - 2 * d
        else:
            return t == d or t == 2 * d  # 1/3 = 0.0222..., 2/3 = 0.2
    return True  # periodic in {0, 2}


def cantor_function(y: Fraction) -> Fraction:
    """The Cantor function: ternary digits halved, read in binary."""
    y = Fraction(y)
    if not 0 <= y <= 1:
        raise DomainError(f"{y} lies outside [0, 1]")
    # Invariant: F(y0) = (bits + F(n/d)) / 2^k.
    n, d = y.numerator, y.denominator
    bits = k = 0
    states: dict[int, tuple[int, int]] = {}
    while True:
        if n == 0:
            return Fraction(bits, 1 << k)
        if n == d:
            return Fraction(bits + 1, 1 << k)
        if n in states:
            bits0, k0 = states[n]
            period = k - k0
            block = bits - (bits0 << period)
            return Fraction(bits0, 1 << k0) + Fraction(block, ((1 << period) - 1) << k0)
        states[n] = (bits, k)
        t = 3 * n
        if t < d:
            n, bits, k = t, bits << 1, k + 1
        elif t > 2 * d:
            n, bits, k = t - 2 * d, (bits << 1) | 1, k + 1
        else:
            return Fraction(2 * bits + 1, 1 << (k + 1))


def is_dyadic(t: Fraction) -> bool:
    d = Fraction(t).denominator
    return d & (d - 1) == 0


def dyadic_to_ternary(t: Fraction) -> Fraction:
    """The Cantor point whose binary digits of t are doubled into ternary."""
    t = Fraction(t)
    if not 0 <= t <= 1 or not is_dyadic(t):
        raise DomainError(f"{t} is not a dyadic rational in [0, 1]")
    if t == 1:
        return Fraction(1)
    y = Fraction(0)
    place = Fraction(1, 3)
    while t:
        t *= 2
        if t >= 1:
            y += 2 * place
            t -= 1
        place /= 3
    return y


def ternary_digits(y: Fraction, count: int) -> list[int]:
    out = []
    for _ in range(count):
        y *= 3
        d = math.floor(y)
        d = min(d, 2)
        out.append(d)
        y -= d
    return out


# -- enumeration of rational intervals ----------------------------------------


def stern_brocot_unrank(m: int) -> Fraction:
    """The m-th rational of (0, 1) in breadth-first Stern-Brocot order from 1/2."""
    if m < 0:
        raise DomainError("index must be nonnegative")
    depth = (m + 1).bit_length() - 1
    path = m + 1 - (1 << depth)
    lo_n, lo_d, hi_n, hi_d = 0, 1, 1, 1
    for j in range(depth - 1, -1, -1):
        med_n, med_d = lo_n + hi_n, lo_d + hi_d
        if path >> j & 1:
            lo_n, lo_d = med_n, med_d
        else:
            hi_n, hi_d = med_n, med_d
    return Fraction(lo_n + hi_n, lo_d + hi_d)


def stern_brocot_rank(q: Fraction) -> int:
    """Inverse of ``stern_brocot_unrank``, computed from the continued fraction."""
    q = Fraction(q)
    if not 0 < q < 1:
        raise DomainError(f"{q} is not in (0, 1)")
    terms = []
    p, r = q.denominator, q.numerator  # 1/q = p/r
    while r:
        a, rem = divmod(p, r)
        terms.append(a)
        p, r = r, rem
    # From 1/1 the path is L^{a1} R^{a2} ... with the last run one shorter;
    # the subtree at 1/2 drops the first L.
    terms[-1] -= 1
    terms[0] -= 1
    depth = path = 0
    for j, run in enumerate(terms):
        if run:
            path = (path << run) | (((1 << run) - 1) if j % 2 else 0)
            depth += run
    return (1 << depth) + path - 1


def interval_unrank(k: int) -> RatInterval:
    """The k-th open interval: pairs i < j of rationals ordered by (j, i)."""
    if k < 0:
        raise DomainError("index must be nonnegative")
    j = (1 + math.isqrt(1 + 8 * k)) // 2
    while j * (j - 1) // 2 > k:
        j -= 1
    while (j + 1) * j // 2 <= k:
        j += 1
    i = k - j * (j - 1) // 2
    a, b = stern_brocot_unrank(i), stern_brocot_unrank(j)
    return RatInterval.open(min(a, b), max(a, b))


def enumerate_rational_intervals(k: int) -> RatInterval:
    return interval_unrank(k)


def simplest_between(lo: Fraction, hi: Fraction | None) -> Fraction:
    """The rational of least denominator in the open interval (lo, hi), with
    0 <= lo and ``hi=None`` meaning infinity. It is the shallowest
    Stern-Brocot node in the interval, so its rank is as small as possible."""
    n = math.floor(lo) + 1
    if hi is None or n < hi:
        return Fraction(n)
    a = math.floor(lo)
    # a <= lo < hi <= a + 1; t -> a + 1/t maps (1/(hi-a), 1/(lo-a)) onto (lo, hi).
    return a + 1 / simplest_between(1 / (hi - a), None if lo == a else 1 / (lo - a))


def interval_rank(r: Fraction, s: Fraction) -> int:
    if not 0 < r < s < 1:
        raise DomainError(f"({r}, {s}) is not a nontrivial open subinterval of (0, 1)")
    i, j = sorted((stern_brocot_rank(r), stern_brocot_rank(s)))
    return j * (j - 1) // 2 + i


# -- pieces ------------------------------------------------------------------


@dataclass(frozen=True)
class CantorPiece:
    index: int
    lo: Fraction
    hi: Fraction
    interval_index: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not 0 <= self.lo < self.hi <= 1:
            raise DomainError(f"hull [{self.lo}, {self.hi}] must be a nondegenerate subset of [0, 1]")

    @property
    def hull(self) -> RatInterval:
        return RatInterval.closed(self.lo, self.hi)

    def pull(self, x) -> Fraction:
        return (Fraction(x) - self.lo) / (self.hi - self.lo)

    def push(self, y) -> Fraction:
        return self.lo + (self.hi - self.lo) * Fraction(y)

    def level_intervals(self, depth: int, window: RatInterval | None = None) -> list[tuple[Fraction, Fraction]]:
        """The closed intervals of construction stage ``depth`` (ternary units),
        restricted to those meeting ``window``."""
        out = []
        stack = [(self.lo, self.hi, 0)]
        while stack:
            a, b, d = stack.pop()
            if window is not None and (b < window.lo or a > window.hi):
                continue
            if d == depth:
                out.append((a, b))
                continue
            w = (b - a) / 3
            stack.append((b - w, b, d + 1))
            stack.append((a, a + w, d + 1))
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "hull": {"lo": fmt_rat(self.lo), "hi": fmt_rat(self.hi)},
            "interval": self.interval_index,
        }


# The standard set C itself; ledger pieces always sit strictly inside (0, 1).
STANDARD = CantorPiece(-1, Fraction(0), Fraction(1))


def cantor_membership(p: CantorPiece, x) -> bool:
    x = Fraction(x)
    if not p.lo <= x <= p.hi:
        return False
    return in_standard_cantor(p.pull(x))


def cantor_value(p: CantorPiece, x) -> Fraction:
    if not cantor_membership(p, x):
        raise DomainError(f"{x} is not in piece {p.index}")
    return cantor_function(p.pull(x))


def dyadic_preimage(p: CantorPiece, t) -> Fraction:
    return p.push(dyadic_to_ternary(Fraction(t)))


def gap_containing(p: CantorPiece, lo: Fraction, hi: Fraction) -> tuple[int, Fraction, Fraction] | None:
    """The removed open middle third of ``p`` containing [lo, hi], as
    (stage, gap_lo, gap_hi); None when [lo, hi] meets the closed hull's set."""
    a, b = p.lo, p.hi
    if hi < a or lo > b:
        return None
    depth = 0
    while True:
        w = (b - a) / 3
        if lo < a or hi > b:
            return None
        if a + w < lo and hi < b - w:
            return depth + 1, a + w, b - w
        if hi <= a + w:
            b = a + w
        elif lo >= b - w:
            a = b - w
        else:
            return None
        depth += 1


@dataclass(frozen=True)
class DisjointnessProof:
    """Piece ``inner``'s hull lies in a removed gap of piece ``outer``."""

    inner: int
    outer: int
    stage: int
    gap_lo: Fraction
    gap_hi: Fraction

    def to_json(self) -> dict:
        return {
            "inner": self.inner,
            "outer": self.outer,
            "stage": self.stage,
            "gap": {"lo": fmt_rat(self.gap_lo), "hi": fmt_rat(self.gap_hi)},
        }


@dataclass(frozen=True)
class Evaluation:
    value: Fraction
    definitive: bool
    piece: int | None = None

    @property
    def tag(self) -> str:
        return "definitive" if self.definitive else "provisional"


class AllocatorError(PreslabError):
    """The gap search produced a piece that breaks a ledger invariant."""


@dataclass
class CantorLedger:
    pieces: list[CantorPiece] = field(default_factory=list)
    interval_enum_cursor: int = 0
    reserved: set[Fraction] = field(default_factory=set)
    proofs: list[DisjointnessProof] = field(default_factory=list)

    def lookup(self, x) -> CantorPiece | None:
        x = Fraction(x)
        for p in self.pieces:
            if cantor_membership(p, x):
                return p
        return None

    def reserve(self, x) -> None:
        x = Fraction(x)
        if self.lookup(x) is None:
            self.reserved.add(x)

    def used_intervals(self) -> set[int]:
        return {p.interval_index for p in self.pieces if p.interval_index is not None}

    def find_slot(self, target: RatInterval) -> tuple[Fraction, Fraction]:
        """Leftmost free open interval inside ``target`` at the shallowest
        construction stage, avoiding every piece and reserved point."""
        for depth in range(MAX_GAP_DEPTH):
            blocked: list[tuple[Fraction, Fraction]] = []
            for p in self.pieces:
                blocked += p.level_intervals(depth, target)
            blocked += [(x, x) for x in self.reserved if target.lo <= x <= target.hi]
            blocked.sort()
            cursor = target.lo
            for a, b in blocked + [(target.hi, target.hi)]:
                if a > cursor:
                    return cursor, a
                cursor = max(cursor, b)
        raise AllocatorError(f"no free gap in {target} within {MAX_GAP_DEPTH} stages")

    def allocate_in(self, target: RatInterval, interval_index: int | None = None) -> int:
        _check_target(target)
        a, b = self.find_slot(target)
        w = b - a
        lo, hi = a + w / 3, b - w / 3
        if interval_index is None:
            # Tag the piece with the simplest enumerated interval around it,
            # moving inward past indices already taken.
            used = self.used_intervals()
            r, s = simplest_between(a, lo), simplest_between(hi, b)
            while (interval_index := interval_rank(r, s)) in used:
                r, s = simplest_between(r, lo), simplest_between(hi, s)
        piece = CantorPiece(len(self.pieces), lo, hi, interval_index)
        self._admit(piece)
        return piece.index

    def _admit(self, piece: CantorPiece) -> None:
        if not (0 < piece.lo and piece.hi < 1):
            raise AllocatorError(f"piece {piece.index} is not inside (0, 1)")
        if piece.interval_index is not None:
            enclosing = interval_unrank(piece.interval_index)
            if not (enclosing.lo < piece.lo and piece.hi < enclosing.hi):
                raise AllocatorError(f"piece {piece.index} escapes its interval {enclosing}")
        for x in self.reserved:
            if cantor_membership(piece, x):
                raise AllocatorError(f"piece {piece.index} contains reserved point {x}")
        new_proofs = []
        for q in self.pieces:
            if piece.hi < q.lo or piece.lo > q.hi:
                continue
            gap = gap_containing(q, piece.lo, piece.hi)
            if gap is None:
                raise AllocatorError(f"piece {piece.index} overlaps piece {q.index}")
            new_proofs.append(DisjointnessProof(piece.index, q.index, *gap))
        self.pieces.append(piece)
        self.proofs += new_proofs

    def extend_enumeration(self, count: int) -> None:
        """Allocate pieces for the enumerated intervals up to index ``count``."""
        used = self.used_intervals()
        while self.interval_enum_cursor < count:
            k = self.interval_enum_cursor
            if k not in used:
                self.allocate_in(interval_unrank(k), interval_index=k)
            self.interval_enum_cursor += 1

    def verify_disjointness(self) -> bool:
        """Re-derive a gap proof for every pair of overlapping hulls."""
        for i, p in enumerate(self.pieces):
            for q in self.pieces[:i]:
                if p.hi < q.lo or p.lo > q.hi:
                    continue
                if gap_containing(q, p.lo, p.hi) is None and gap_containing(p, q.lo, q.hi) is None:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "pieces": [p.to_json() for p in self.pieces],
            "reserved": sorted(fmt_rat(x) for x in self.reserved),
            "cursor": self.interval_enum_cursor,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CantorLedger":
        ledger = cls(interval_enum_cursor=data.get("cursor", 0))
        for entry in data["pieces"]:
            hull = entry["hull"]
            ledger._admit(CantorPiece(entry["index"], parse_rat(hull["lo"]), parse_rat(hull["hi"]), entry.get("interval")))
        ledger.reserved = {parse_rat(x) for x in data["reserved"]}
        return ledger

    def __iter__(self) -> Iterator[CantorPiece]:
        return iter(self.pieces)


def _check_target(target: RatInterval) -> None:
    if target.degenerate:
        raise DomainError("target interval is degenerate")
    if target.lo < 0 or target.hi > 1 or (target.lo == 0 and target.lo_closed) or (target.hi == 1 and target.hi_closed):
        raise DomainError(f"target {target} is not inside (0, 1)")


def ensure_piece_in(ledger: CantorLedger, target: RatInterval) -> int:
    """Index of a piece whose hull lies in ``target``, allocating if needed."""
    _check_target(target)
    for p in ledger.pieces:
        if target.contains_interval(p.hull):
            return p.index
    return ledger.allocate_in(target)


def ledger_eval(ledger: CantorLedger, x, deciding: bool = True, default: Fraction = Fraction(0)) -> Evaluation:
    """Value of the ledger's function at x: the Cantor value inside a piece,
    else ``default``, made definitive by reserving x when ``deciding``."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} lies outside [0, 1]")
    p = ledger.lookup(x)
    if p is not None:
        return Evaluation(cantor_value(p, x), True, p.index)
    if x in ledger.reserved or x in (0, 1):
        return Evaluation(Fraction(default), True)
    if deciding:
        ledger.reserved.add(x)
        return Evaluation(Fraction(default), True)
    return Evaluation(Fraction(default), False)
