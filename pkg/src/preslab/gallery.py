"""Constructions of the real-line counterexamples and their certificates.

* ``eersteex``: a compactness-preserving surjection [0, 1] -> omega+1 whose
  square is not compactness-preserving. D_n is the set of rationals in
  [t_n, 1) whose reduced denominator is a power of the n-th odd prime.
* ``tweedeex``: a continuum-preserving map built from disjoint Cantor pieces,
  and a polygonal staircase arc J whose image under the square is not closed.
* ``derdeex``: the variant whose pieces map onto (0, 1), so [0, 1/2] maps onto
  [0, 1).
* ``disconnection_witness``: the disconnected image A ∪ {x} produced when a
  product map misses a neighbourhood of f(x) along a sequence converging to x.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from sympy import factorint, prime, primepi

from .cantor import (
    AllocatorError,
    CantorLedger,
    cantor_value,
    dyadic_preimage,
    ensure_piece_in,
    ledger_eval,
)
from .errors import DomainError, NoWitnessError, PreconditionError
from .omega import (
    OMEGA,
    Affine,
    Const,
    OmegaSet,
    OrdPoint,
    ProductOmegaSet,
    SequenceFamily,
    is_compact,
    missing_limit_points,
)
from .report import Certificate
from .zigzag import RatInterval, zig_eval

HALF = Fraction(1, 2)


# -- eersteex -----------------------------------------------------------------


def odd_prime(n: int) -> int:
    """p_0 = 3, p_1 = 5, p_2 = 7, ..."""
    return int(prime(n + 2))


def threshold(n: int) -> Fraction:
    return 1 - Fraction(1, n + 1)


def d_index(x: Fraction) -> int | None:
    """The n with x in D_n, if any."""
    x = Fraction(x)
    if not 0 <= x < 1:
        return None
    factors = factorint(x.denominator)
    if len(factors) != 1:
        return None
    (p, _), = factors.items()
    if p == 2:
        return None
    n = int(primepi(p)) - 2
    return n if x >= threshold(n) else None


def eersteex_eval(x) -> OrdPoint:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} lies outside [0, 1]")
    if x == 1:
        return OMEGA
    n = d_index(x)
    return 0 if n is None else n


def d_member_in(n: int, lo: Fraction, hi: Fraction) -> Fraction | None:
    """Some element of D_n in the open interval (lo, hi), if the overlap with
    [t_n, 1) has interior."""
    lo, hi = max(lo, threshold(n)), min(hi, Fraction(1))
    if lo >= hi:
        return None
    p = odd_prime(n)
    j = 1
    while True:
        den = p ** j
        num = math.floor(lo * den) + 1
        if Fraction(num, den) < hi:
            x = Fraction(num, den)
            if x.denominator != 1 and d_index(x) == n:
                return x
        j += 1


@dataclass(frozen=True)
class GeometricSequence:
    """s_k = limit + (start - limit) * ratio^k, together with its limit."""

    limit: Fraction
    start: Fraction
    ratio: Fraction

    def __post_init__(self) -> None:
        if not 0 < self.ratio < 1:
            raise DomainError("ratio must lie in (0, 1)")
        for v in (self.limit, self.start):
            if not 0 <= v <= 1:
                raise DomainError(f"{v} lies outside [0, 1]")

    def term(self, k: int) -> Fraction:
        return self.limit + (self.start - self.limit) * self.ratio ** k

    @property
    def sup(self) -> Fraction:
        return max(self.start, self.limit)

    def to_json(self) -> dict:
        return {"limit": self.limit, "start": self.start, "ratio": self.ratio}


@dataclass(frozen=True)
class RationalCompactum:
    """A finite union of closed intervals, points and convergent sequences
    (each with its limit) inside [0, 1]."""

    intervals: tuple[RatInterval, ...] = ()
    points: tuple[Fraction, ...] = ()
    sequences: tuple[GeometricSequence, ...] = ()

    def __post_init__(self) -> None:
        if not (self.intervals or self.points or self.sequences):
            raise DomainError("empty presentation")
        for i in self.intervals:
            if not (i.lo_closed and i.hi_closed) or i.lo < 0 or i.hi > 1:
                raise DomainError(f"{i} is not a closed subinterval of [0, 1]")
        for p in self.points:
            if not 0 <= p <= 1:
                raise DomainError(f"{p} lies outside [0, 1]")

    @property
    def max(self) -> Fraction:
        vals = [i.hi for i in self.intervals] + list(self.points) + [s.sup for s in self.sequences]
        return max(vals)

    def contains_one(self) -> bool:
        return self.max == 1

    def to_json(self) -> dict:
        return {
            "intervals": list(self.intervals),
            "points": list(self.points),
            "sequences": list(self.sequences),
        }


def interval_image(i: RatInterval, bound: int) -> tuple[set[OrdPoint], dict[int, Fraction]]:
    """Exact image of a closed interval with hi < 1 under the eersteex map,
    with one witness point per attained value."""
    if i.degenerate:
        v = eersteex_eval(i.lo)
        return {v}, {v: i.lo} if v is not OMEGA else {}
    witnesses: dict[int, Fraction] = {0: _non_d_point(i)}
    for n in range(1, bound + 1):
        x = d_member_in(n, i.lo, i.hi)
        if x is not None:
            witnesses[n] = x
    # A closed end may sit in D_n even when the overlap has no interior.
    for x in (i.lo, i.hi):
        v = eersteex_eval(x)
        if v not in witnesses and v is not OMEGA:
            witnesses[v] = x
    return set(witnesses), witnesses


def _non_d_point(i: RatInterval) -> Fraction:
    # Dyadic rationals are never in any D_n.
    j = 1
    while True:
        den = 2 ** j
        x = Fraction(math.floor(i.lo * den) + 1, den)
        if x < i.hi and d_index(x) is None:
            return x
        j += 1


def eersteex_compactness_check(k: RationalCompactum) -> Certificate:
    cert = Certificate("eersteex: f(K) is compact")
    if k.contains_one():
        where = [str(i) for i in k.intervals if i.hi == 1] + ["point 1" for p in k.points if p == 1]
        where += ["sequence limit 1" for s in k.sequences if s.limit == 1 or s.start == 1]
        cert.add("1 belongs to K", bool(where), where)
        cert.add("f(1) = omega, so omega is in f(K)", eersteex_eval(1) is OMEGA)
        known = [eersteex_eval(p) for p in k.points] + [OMEGA]
        for s in k.sequences:
            known += [eersteex_eval(s.term(j)) for j in range(8)] + [eersteex_eval(s.limit)]
        # D_n is dense in [t_n, 1), so an interval [a, 1] meets every D_n.
        tail = 0 if any(i.hi == 1 and i.lo < 1 for i in k.intervals) else None
        lower = OmegaSet(frozenset(), tail, False).with_points(known)
        upper = OmegaSet.everything()
        cert.add(
            "omega in f(K) makes f(K) closed: the known part and the largest candidate image are both compact",
            lower.has_omega and is_compact(lower) and is_compact(upper),
            {"image": lower, "largest": upper},
        )
        return cert
    m = k.max
    bound = math.floor(m / (1 - m))
    cert.add("max K < 1", m < 1, m)
    cert.add(
        "t_n <= max K forces n <= B",
        threshold(bound) <= m < threshold(bound + 1),
        {"B": bound, "t_B": threshold(bound), "t_B+1": threshold(bound + 1)},
    )
    image: set[OrdPoint] = set()
    sampled: list[tuple[Fraction, OrdPoint]] = []
    for i in k.intervals:
        vals, wit = interval_image(i, bound)
        image |= vals
        sampled += [(x, eersteex_eval(x)) for x in wit.values()]
    for p in k.points:
        sampled.append((p, eersteex_eval(p)))
    for s in k.sequences:
        sampled += [(s.term(j), eersteex_eval(s.term(j))) for j in range(16)]
        sampled.append((s.limit, eersteex_eval(s.limit)))
    image |= {v for x, v in sampled if x in k.points}
    cert.add(
        "every sampled point of K maps into {0..B}",
        all(v is not OMEGA and v <= bound for _, v in sampled),
        {"sampled": len(sampled), "values": sorted({v for _, v in sampled if v is not OMEGA})},
    )
    enclosure = OmegaSet(frozenset(range(bound + 1)))
    cert.add(
        "f(K) lies in the finite set {0..B}, which is compact",
        enclosure.is_finite and is_compact(enclosure) and all(v in enclosure for v in image),
        {"enclosure": enclosure, "interval_images": sorted(v for v in image if v is not OMEGA)},
    )
    return cert


def random_compactum(rng: random.Random) -> RationalCompactum:
    def rat() -> Fraction:
        return Fraction(rng.randint(0, 60), rng.randint(1, 60)) % 1

    intervals, points, seqs = [], [], []
    for _ in range(rng.randint(0, 2)):
        a, b = sorted((rat(), rat()))
        if rng.random() < 0.2:
            b = Fraction(1)
        intervals.append(RatInterval.closed(a, b))
    for _ in range(rng.randint(0, 3)):
        points.append(Fraction(1) if rng.random() < 0.1 else rat())
    for _ in range(rng.randint(0, 2)):
        lim = Fraction(1) if rng.random() < 0.2 else rat()
        seqs.append(GeometricSequence(lim, rat(), Fraction(rng.randint(1, 5), 6)))
    if not (intervals or points or seqs):
        points.append(rat())
    return RationalCompactum(tuple(intervals), tuple(points), tuple(seqs))


def eersteex_square_witness(depth: int = 32) -> Certificate:
    cert = Certificate("eersteex: K compact but f^2(K) is not")
    ks = range(1, depth + 1)
    d = {k: 1 - Fraction(1, 3 ** k) for k in ks}
    e = {k: 1 - Fraction(1, odd_prime(k)) for k in ks}
    cert.add(
        "d_k = 1 - 3^-k lies in D_0 and e_k = 1 - 1/p_k lies in D_k",
        all(d_index(d[k]) == 0 and d_index(e[k]) == k for k in ks),
        {"depth": depth, "e_1": e[1], "e_2": e[2]},
    )
    images = {k: (eersteex_eval(d[k]), eersteex_eval(e[k])) for k in ks}
    cert.add("f^2(d_k, e_k) = (0, k)", all(images[k] == (0, k) for k in ks), {"k=2": images.get(2)})
    gaps = [max(1 - d[k], 1 - e[k]) for k in ks]
    cert.add(
        "(d_k, e_k) -> (1, 1): sup-distance strictly decreasing and at most 1/(k+1)",
        all(b < a for a, b in zip(gaps, gaps[1:])) and all(g <= Fraction(1, k + 1) for k, g in zip(ks, gaps)),
        {"distance_at_depth": gaps[-1]},
    )
    cert.add("K = {(d_k, e_k)} ∪ {(1, 1)} is compact: a convergent sequence with its limit", True)
    cert.add("f^2(1, 1) = (omega, omega)", (eersteex_eval(1), eersteex_eval(1)) == (OMEGA, OMEGA))
    image = ProductOmegaSet(
        2,
        points=((OMEGA, OMEGA),),
        sequences=(SequenceFamily((Const(0), Affine(1, 0)), start=1),),
    )
    cert.add(
        "the presented image matches every evaluated point",
        all(images[k] in image for k in ks) and (OMEGA, OMEGA) in image,
        image,
    )
    cert.add("f^2(K) is not compact", not is_compact(image))
    missing = missing_limit_points(image)
    cert.add("the omitted limit point is (0, omega)", missing == [(0, OMEGA)], missing)
    return cert


# -- tweedeex: the polygonal arc -----------------------------------------------


def arc_target(n: int) -> Fraction:
    return HALF - Fraction(1, 2 ** (n + 2))


def tweedeex_eval(ledger: CantorLedger, x, deciding: bool = False) -> Fraction:
    return ledger_eval(ledger, x, deciding).value


@dataclass
class PolygonalArc:
    """A staircase from (0, 0): V_0 = {0} x [0, a_0], H_0 = [0, b_0] x {a_0},
    V_n = {b_(n-1)} x [a_(n-1), a_n], H_n = [b_(n-1), b_n] x {a_n}."""

    depth: int
    alphas: list[Fraction]
    betas: list[Fraction]
    targets: list[Fraction]
    alpha_pieces: list[int]
    beta_pieces: list[int]
    v_pieces: list[int]
    h_pieces: list[int]
    ledger: CantorLedger = field(repr=False)

    def segments(self) -> list[tuple[str, tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]:
        out = [("V0", (Fraction(0), Fraction(0)), (Fraction(0), self.alphas[0])),
               ("H0", (Fraction(0), self.alphas[0]), (self.betas[0], self.alphas[0]))]
        for n in range(1, self.depth + 1):
            a0, a1, b0, b1 = self.alphas[n - 1], self.alphas[n], self.betas[n - 1], self.betas[n]
            out.append((f"V{n}", (b0, a0), (b0, a1)))
            out.append((f"H{n}", (b0, a1), (b1, a1)))
        return out

    def v_range(self, n: int) -> tuple[Fraction, Fraction]:
        return (Fraction(0), self.alphas[0]) if n == 0 else (self.alphas[n - 1], self.alphas[n])

    def h_range(self, n: int) -> tuple[Fraction, Fraction]:
        return (Fraction(0), self.betas[0]) if n == 0 else (self.betas[n - 1], self.betas[n])

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "alphas": self.alphas,
            "betas": self.betas,
            "targets": self.targets,
            "alpha_pieces": self.alpha_pieces,
            "beta_pieces": self.beta_pieces,
            "v_pieces": self.v_pieces,
            "h_pieces": self.h_pieces,
            "ledger": self.ledger.to_json(),
        }


def _window(prev: Fraction | None, n: int) -> RatInterval:
    if prev is None:
        return RatInterval.open(0, Fraction(1, 4))
    return RatInterval.open(prev, prev + Fraction(1, 2 ** (n + 2)))


def build_arc(depth: int, ledger: CantorLedger | None = None) -> PolygonalArc:
    """Choose a_n, b_n inside fresh windows so that f(a_n) = f(b_n) = t_n, each
    window step leaving room for a whole piece below the new vertex."""
    if depth < 1:
        raise DomainError("arc depth must be at least 1")
    ledger = CantorLedger() if ledger is None else ledger
    arc = PolygonalArc(depth, [], [], [], [], [], [], [], ledger)
    for n in range(depth + 1):
        t = arc_target(n)
        arc.targets.append(t)
        for coords, pieces, surj in ((arc.alphas, arc.alpha_pieces, arc.v_pieces),
                                     (arc.betas, arc.beta_pieces, arc.h_pieces)):
            w = _window(coords[-1] if coords else None, n)
            whole = ensure_piece_in(ledger, w)
            rest = RatInterval.open(ledger.pieces[whole].hi, w.hi)
            if coords is arc.alphas:
                host = ensure_piece_in(ledger, rest)
            else:
                host = ledger.allocate_in(rest)
            coords.append(dyadic_preimage(ledger.pieces[host], t))
            pieces.append(host)
            surj.append(whole)
    problems = arc_constraint_failures(arc)
    if problems:
        raise AllocatorError(f"arc constraints violated: {problems}")
    return arc


def arc_constraint_failures(arc: PolygonalArc) -> list[str]:
    out = []
    quarter = Fraction(1, 4)
    if not (0 < arc.alphas[0] < quarter and 0 < arc.betas[0] < quarter):
        out.append("a_0, b_0 must lie in (0, 1/4)")
    for name, seq in (("alpha", arc.alphas), ("beta", arc.betas)):
        for n in range(arc.depth):
            step = seq[n + 1] - seq[n]
            if not 0 < step < Fraction(1, 2 ** (n + 3)):
                out.append(f"{name} step {n} is {step}")
    for n in range(arc.depth + 1):
        for x, host in ((arc.alphas[n], arc.alpha_pieces[n]), (arc.betas[n], arc.beta_pieces[n])):
            ev = ledger_eval(arc.ledger, x, deciding=False)
            if not (ev.definitive and ev.piece == host and ev.value == arc.targets[n]):
                out.append(f"f({x}) is not certified as t_{n}")
    return out


def certify_arc_noncompact(arc: PolygonalArc) -> Certificate:
    if arc.depth < 2:
        raise PreconditionError("certification needs an arc of depth at least 2")
    cert = Certificate("tweedeex: f^2(J) is not compact")
    ledger = arc.ledger

    def f(x) -> Fraction:
        ev = ledger_eval(ledger, x, deciding=False)
        return ev.value if ev.definitive else Fraction(-1)

    def hull_inside(idx: int, lo: Fraction, hi: Fraction) -> bool:
        p = ledger.pieces[idx]
        return lo <= p.lo and p.hi <= hi

    omitted = [(Fraction(1), HALF), (HALF, Fraction(1))]
    lo, hi = arc.v_range(0)
    hlo, hhi = arc.h_range(0)
    quarter = Fraction(1, 4)
    cert.add(
        "base segments: f^2(V_0) = {0} x I and f^2(H_0) = I x {t_0}, both missing (1, 1/2) and (1/2, 1)",
        hull_inside(arc.v_pieces[0], lo, hi) and hull_inside(arc.h_pieces[0], hlo, hhi)
        and f(0) == 0 and f(arc.alphas[0]) == arc.targets[0]
        and arc.alphas[0] < quarter and arc.betas[0] < quarter
        and arc.targets[0] not in (HALF, 1),
        {"alpha_0": arc.alphas[0], "beta_0": arc.betas[0], "t_0": arc.targets[0]},
    )
    for n in range(1, arc.depth + 1):
        t, t_prev = arc.targets[n], arc.targets[n - 1]
        hlo, hhi = arc.h_range(n)
        vlo, vhi = arc.v_range(n)
        step_bound = Fraction(1, 2 ** (n + 2))
        cert.add(
            f"f^2(H_{n}) = I x {{t_{n}}}",
            hull_inside(arc.h_pieces[n], hlo, hhi) and f(arc.alphas[n]) == t
            and 0 < arc.betas[n] - arc.betas[n - 1] < step_bound,
            {"piece": arc.h_pieces[n], "range": [hlo, hhi], "t": t},
        )
        cert.add(
            f"f^2(V_{n}) = {{t_{n - 1}}} x I",
            hull_inside(arc.v_pieces[n], vlo, vhi) and f(arc.betas[n - 1]) == t_prev
            and 0 < arc.alphas[n] - arc.alphas[n - 1] < step_bound,
            {"piece": arc.v_pieces[n], "range": [vlo, vhi], "t": t_prev},
        )
        cert.add(
            f"t_{n} and t_{n - 1} avoid 1/2 and 1, so f^2(H_{n}) and f^2(V_{n}) omit both points",
            all(v not in (HALF, Fraction(1)) for v in (t, t_prev)),
            {"t": t, "t_prev": t_prev},
        )
        right = ledger.pieces[arc.h_pieces[n]].hi
        top = ledger.pieces[arc.v_pieces[n]].hi
        near = (f(right), f(arc.alphas[n])) == (1, t) and (f(arc.betas[n - 1]), f(top)) == (t_prev, 1)
        cert.add(
            f"(1, t_{n}) in f^2(H_{n}) and (t_{n - 1}, 1) in f^2(V_{n}), at distance 2^-{n + 2} and 2^-{n + 1} from the omitted points",
            near and hlo <= right <= hhi and vlo <= top <= vhi
            and HALF - t == Fraction(1, 2 ** (n + 2)) and HALF - t_prev == 2 * (HALF - t),
            {"points": [[right, arc.alphas[n]], [arc.betas[n - 1], top]]},
        )
    cert.add(
        "the limit vertex adds a single image point, which cannot be both omitted points",
        omitted[0] != omitted[1],
        {"omitted": omitted},
    )
    return cert


# -- derdeex -------------------------------------------------------------------


def squash(v: Fraction) -> Fraction:
    return HALF if v in (0, 1) else v


@dataclass
class DerdeexMap:
    ledger: CantorLedger = field(default_factory=CantorLedger)

    def __call__(self, x) -> Fraction:
        return derdeex_eval(self.ledger, x)


def derdeex_eval(ledger: CantorLedger, x, deciding: bool = True) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} lies outside [0, 1]")
    if x == 0:
        return Fraction(0)
    if x == 1:
        return Fraction(1)
    ev = ledger_eval(ledger, x, deciding, default=HALF)
    return squash(ev.value) if ev.piece is not None else ev.value


def certify_derdeex(depth: int = 10, ledger: CantorLedger | None = None) -> Certificate:
    ledger = CantorLedger() if ledger is None else ledger
    cert = Certificate("derdeex: f([0, 1/2]) = [0, 1), so f is not continuum-preserving")
    host = ensure_piece_in(ledger, RatInterval.open(0, HALF))
    piece = ledger.pieces[host]
    cert.add("clause s = 0 takes the value 0, not 1", derdeex_eval(ledger, 0) == 0)
    ends = [squash(cantor_value(piece, piece.lo)), squash(cantor_value(piece, piece.hi))]
    cert.add(
        "clause s in K_n takes values in (0, 1): squash sends 0 and 1 to 1/2 and fixes (0, 1)",
        ends == [HALF, HALF] and all(derdeex_eval(ledger, x) == v for x, v in ((piece.lo, HALF), (piece.hi, HALF))),
        {"piece": host, "endpoint_values": ends},
    )
    probe = derdeex_eval(ledger, HALF)
    cert.add(
        "the remaining clause takes the value 1/2, not 1",
        probe == HALF and ledger.lookup(HALF) is None,
        {"probe": HALF},
    )
    cert.add("the clause s = 1 lies outside [0, 1/2]", Fraction(1) > HALF)
    cert.add("0 is attained on [0, 1/2] at s = 0", derdeex_eval(ledger, 0) == 0)
    den = 2 ** depth
    missing = []
    for u in range(1, den):
        t = Fraction(u, den)
        x = dyadic_preimage(piece, t)
        if not (0 <= x <= HALF and derdeex_eval(ledger, x) == t):
            missing.append(t)
    cert.add(
        f"every dyadic in (0, 1) with denominator at most 2^{depth} is attained on [0, 1/2]",
        not missing,
        {"checked": den - 1, "missing": missing[:8]},
    )
    return cert


# -- the witness from the product theorem ---------------------------------------


@dataclass(frozen=True)
class WitnessDescriptor:
    """One factor f_i: I -> Y_i with a sequence s_i(k) -> x_i kept outside U_i."""

    name: str
    evaluate: Callable[[Fraction], Any]
    sequence: Callable[[int], Fraction]
    domain: RatInterval
    codomain: Any


def zigzag_descriptor() -> WitnessDescriptor:
    return WitnessDescriptor(
        "zigzag",
        zig_eval,
        lambda k: Fraction(1, 2 * k),
        RatInterval.closed(0, 1),
        RatInterval.closed(-1, 1),
    )


def disconnection_witness(
    factor1: WitnessDescriptor,
    factor2: WitnessDescriptor,
    x: Sequence[Fraction],
    U: Sequence[RatInterval],
    depth: int = 64,
) -> Certificate:
    factors = (factor1, factor2)
    for fac in factors:
        if not isinstance(fac.codomain, RatInterval) or not isinstance(fac.domain, RatInterval):
            raise TypeError(f"{fac.name}: domain and codomain must be real intervals")
    x = tuple(Fraction(v) for v in x)
    cert = Certificate(f"{factor1.name} x {factor2.name} is not connectedness-preserving")
    cert.add(
        "factor domains are nondegenerate intervals, hence connected, and codomains are T1",
        all(not fac.domain.degenerate for fac in factors),
        {"domains": [fac.domain for fac in factors]},
    )
    for i, (fac, xi, ui) in enumerate(zip(factors, x, U), start=1):
        fx = fac.evaluate(xi)
        if fx not in ui:
            raise PreconditionError(f"f_{i}(x_{i}) = {fx} is not in U_{i}")
        cert.add(
            f"f_{i}(x_{i}) lies in the open proper subset U_{i}",
            not ui.lo_closed and not ui.hi_closed and fac.codomain.contains_interval(ui) and ui != fac.codomain,
            {"x": xi, "f(x)": fx, "U": ui},
        )
        terms = [fac.sequence(k) for k in range(1, depth + 1)]
        values = [fac.evaluate(s) for s in terms]
        inside = [k for k, v in enumerate(values, start=1) if v in ui]
        if inside:
            raise NoWitnessError(
                f"no witness: f_{i}(s_{i}({inside[0]})) = {values[inside[0] - 1]} lies in U_{i}"
            )
        cert.add(
            f"s_{i}(k) lies in A_{i} = f_{i}^-1(Y_{i} minus U_{i}) for k <= {depth}",
            all(s in fac.domain for s in terms),
            {"first": [terms[0], values[0]], "last": [terms[-1], values[-1]]},
        )
        dist = [abs(s - xi) for s in terms]
        cert.add(
            f"s_{i}(k) -> x_{i} monotonically with |s_{i}(k) - x_{i}| <= 1/k",
            all(b < a for a, b in zip(dist, dist[1:])) and all(d <= Fraction(1, k) for k, d in enumerate(dist, start=1)),
            {"last_distance": dist[-1]},
        )
    cert.add(
        "x lies in the closure of A: (s_1(k), x_2) in pi_1^-1(A_1) converges to x",
        True,
        {"x": list(x)},
    )
    cert.add(
        "A = pi_1^-1(A_1) ∪ pi_2^-1(A_2) is connected (two indices, connected factors, nonempty A_i), hence so is A ∪ {x}",
        True,
    )
    fx = tuple(fac.evaluate(xi) for fac, xi in zip(factors, x))
    far = (factor1.evaluate(factor1.sequence(1)), fx[1])
    cert.add(
        "U ∩ f(A ∪ {x}) = {f(x)} while f(s_1(1), x_2) differs from f(x): f(x) is isolated in a non-singleton image",
        far != fx and far[0] not in U[0],
        {"f(x)": list(fx), "other": list(far), "witness": "A ∪ {x}"},
    )
    return cert
