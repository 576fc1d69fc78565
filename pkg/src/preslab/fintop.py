"""Finite topological spaces stored as specialization preorders.

A finite space is Alexandrov: every point x has a smallest open set U_x, and
the topology is determined by the relation ``y in U_x``. Subsets are integer
bitmasks over the points ``0..n-1``. Subspaces are relation restrictions and
products are relation conjunctions, so every decision procedure below works
directly on the bitmask rows of that relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BoundError, DomainError, PreconditionError
from .parallel import ordered_map
from .report import Report

ENUMERATION_BOUND = 4
SUBSET_BOUND = 16


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


@dataclass(frozen=True)
class FinSpace:
    """``reach[x]`` is the bitmask of the minimal open set U_x."""

    n: int
    reach: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.reach) != self.n:
            raise DomainError("reach must have one row per point")
        full = (1 << self.n) - 1
        for x, row in enumerate(self.reach):
            if row & ~full:
                raise DomainError(f"row {x} mentions points outside the space")
            if not row >> x & 1:
                raise DomainError(f"relation is not reflexive at {x}")
            for y in bits(row):
                if self.reach[y] & ~row:
                    raise DomainError(f"relation is not transitive at {x} -> {y}")

    @classmethod
    def from_matrix(cls, rows: Sequence[str] | str) -> "FinSpace":
        """Build from 0/1 rows, or one row-major string of length n*n."""
        if isinstance(rows, str):
            n = int(round(len(rows) ** 0.5))
            if n * n != len(rows):
                raise DomainError("row-major matrix string must have square length")
            rows = [rows[i * n:(i + 1) * n] for i in range(n)]
        reach = tuple(mask_of(j for j, c in enumerate(r) if c == "1") for r in rows)
        return cls(len(rows), reach)

    @classmethod
    def discrete(cls, n: int) -> "FinSpace":
        return cls(n, tuple(1 << x for x in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "FinSpace":
        return cls(n, tuple((1 << n) - 1 for _ in range(n)))

    @classmethod
    def sierpinski(cls) -> "FinSpace":
        # U_0 = {0, 1}, U_1 = {1}: the open sets are {}, {1}, {0, 1}.
        return cls(2, (0b11, 0b10))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def coreach(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for x, row in enumerate(self.reach):
            for y in bits(row):
                rows[y] |= 1 << x
        return tuple(rows)

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Comparability graph of the preorder as neighbour masks."""
        return tuple(r | c for r, c in zip(self.reach, self.coreach))

    def matrix_string(self) -> str:
        return "".join(
            "1" if self.reach[x] >> y & 1 else "0" for x in range(self.n) for y in range(self.n)
        )

    def check_mask(self, a: int) -> int:
        if a < 0 or a & ~self.full:
            raise DomainError(f"mask {a:#b} exceeds the {self.n}-point ground set")
        return a

    def to_json(self) -> str:
        return self.matrix_string()


@dataclass(frozen=True)
class FinMap:
    dom: FinSpace
    cod: FinSpace
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.dom.n:
            raise DomainError("map table must list one value per domain point")
        for v in self.table:
            if not 0 <= v < self.cod.n:
                raise DomainError(f"value {v} is not a codomain point")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def image(self, a: int) -> int:
        out = 0
        for x in bits(a):
            out |= 1 << self.table[x]
        return out

    def is_constant(self) -> bool:
        return len(set(self.table)) <= 1

    def preimage(self, b: int) -> int:
        return mask_of(x for x, v in enumerate(self.table) if b >> v & 1)


@dataclass(frozen=True)
class ProductSpace:
    """Mixed-radix coded product; factor 0 is the most significant digit."""

    factors: tuple[FinSpace, ...]
    space: FinSpace

    @property
    def radices(self) -> tuple[int, ...]:
        return tuple(f.n for f in self.factors)

    def encode(self, coords: Sequence[int]) -> int:
        code = 0
        for c, r in zip(coords, self.radices):
            if not 0 <= c < r:
                raise DomainError(f"coordinate {c} out of range {r}")
            code = code * r + c
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for r in reversed(self.radices):
            code, c = divmod(code, r)
            out.append(c)
        return tuple(reversed(out))

    def projection(self, i: int) -> FinMap:
        return FinMap(self.space, self.factors[i], tuple(self.decode(c)[i] for c in range(self.space.n)))


@lru_cache(maxsize=None)
def product_space(factors: tuple[FinSpace, ...]) -> ProductSpace:
    radices = [f.n for f in factors]
    tuples = list(itertools.product(*(range(r) for r in radices)))
    rows = []
    for x in tuples:
        row = 0
        for code, y in enumerate(tuples):
            if all(f.reach[xi] >> yi & 1 for f, xi, yi in zip(factors, x, y)):
                row |= 1 << code
        rows.append(row)
    return ProductSpace(tuple(factors), FinSpace(len(tuples), tuple(rows)))


# -- decision procedures ------------------------------------------------------


def is_open(s: FinSpace, a: int) -> bool:
    s.check_mask(a)
    return all(s.reach[x] & ~a == 0 for x in bits(a))


def is_closed(s: FinSpace, a: int) -> bool:
    return is_open(s, s.full & ~s.check_mask(a))


def is_connected(s: FinSpace, a: int) -> bool:
    """Connectivity of the comparability graph restricted to ``a``.

    The empty set counts as connected.
    """
    s.check_mask(a)
    if a == 0:
        return True
    adj = s.adjacency
    seen = frontier = a & -a
    while frontier:
        grown = 0
        for x in bits(frontier):
            grown |= adj[x]
        frontier = grown & a & ~seen
        seen |= frontier
    return seen == a


def is_connected_by_partition(s: FinSpace, a: int) -> bool:
    """Brute force: no split of ``a`` into two nonempty relatively open parts."""
    s.check_mask(a)
    if a == 0:
        return True
    low = a & -a
    rest = a & ~low
    sub = rest
    while True:
        part = sub | low
        other = a & ~part
        if other and _relatively_open(s, a, part) and _relatively_open(s, a, other):
            return False
        if sub == 0:
            return True
        sub = (sub - 1) & rest


def _relatively_open(s: FinSpace, ambient: int, part: int) -> bool:
    return all(s.reach[x] & ambient & ~part == 0 for x in bits(part))


def is_t1(s: FinSpace) -> bool:
    return all(row == 1 << x for x, row in enumerate(s.reach))


def is_continuous(f: FinMap) -> bool:
    """Monotonicity: y in U_x implies f(y) in U_{f(x)}."""
    cod = f.cod.reach
    for x, row in enumerate(f.dom.reach):
        target = cod[f.table[x]]
        for y in bits(row):
            if not target >> f.table[y] & 1:
                return False
    return True


@lru_cache(maxsize=None)
def open_sets(s: FinSpace) -> tuple[int, ...]:
    return tuple(a for a in range(1 << s.n) if is_open(s, a))


def is_continuous_by_preimage(f: FinMap) -> bool:
    return all(is_open(f.dom, f.preimage(o)) for o in open_sets(f.cod))


def is_compact(s: FinSpace, a: int, max_opens: int = 12) -> bool:
    """Open-cover check: every family of open sets covering ``a`` has a
    subfamily of at most ``|a|`` members that still covers it."""
    s.check_mask(a)
    opens = open_sets(s)
    if len(opens) > max_opens:
        raise BoundError(f"{len(opens)} open sets exceed the cover-enumeration bound {max_opens}")
    limit = a.bit_count()
    for choice in range(1 << len(opens)):
        family = [opens[i] for i in bits(choice)]
        union = 0
        for o in family:
            union |= o
        if a & ~union:
            continue
        picked: list[int] = []
        covered = 0
        for x in bits(a):
            if covered >> x & 1:
                continue
            member = next(o for o in family if o >> x & 1)
            picked.append(member)
            covered |= member
        if len(picked) > limit or a & ~covered:
            return False
    return True


# -- enumeration -------------------------------------------------------------


def enumerate_preorders(n: int, bound: int = ENUMERATION_BOUND) -> Iterator[FinSpace]:
    """Every reflexive-transitive relation on ``n`` labelled points, once each,
    in lexicographic order of the row-major 0/1 matrix string."""
    if n < 0:
        raise DomainError("point count must be nonnegative")
    if n > bound:
        raise BoundError(f"n={n} exceeds the enumeration bound {bound}")
    slots = [(x, y) for x in range(n) for y in range(n) if x != y]
    width = len(slots)
    for v in range(1 << width):
        rows = [1 << x for x in range(n)]
        for j, (x, y) in enumerate(slots):
            if v >> (width - 1 - j) & 1:
                rows[x] |= 1 << y
        if _transitive(rows):
            yield FinSpace(n, tuple(rows))


def _transitive(rows: list[int]) -> bool:
    return all(rows[y] & ~row == 0 for row in rows for y in bits(row))


@lru_cache(maxsize=None)
def spaces_up_to(max_points: int, connected_only: bool = False) -> tuple[FinSpace, ...]:
    out = []
    for n in range(1, max_points + 1):
        for s in enumerate_preorders(n, bound=max(ENUMERATION_BOUND, max_points)):
            if not connected_only or is_connected(s, s.full):
                out.append(s)
    return tuple(out)


def t1_spaces_up_to(max_points: int) -> tuple[FinSpace, ...]:
    return tuple(FinSpace.discrete(n) for n in range(1, max_points + 1))


@lru_cache(maxsize=None)
def connected_subsets(s: FinSpace) -> tuple[int, ...]:
    """All nonempty connected subsets, grown from their least point and
    sorted by (size, mask)."""
    adj = s.adjacency
    found: list[int] = []

    def grow(sub: int, cand: int, forbidden: int) -> None:
        found.append(sub)
        while cand:
            v = cand & -cand
            cand ^= v
            x = v.bit_length() - 1
            grow(sub | v, (cand | adj[x]) & ~forbidden & ~(sub | v), forbidden)
            forbidden |= v

    for root in range(s.n):
        below = (1 << (root + 1)) - 1
        grow(1 << root, adj[root] & ~below, below)
    return tuple(sorted(found, key=lambda m: (m.bit_count(), m)))


@lru_cache(maxsize=None)
def _connected_table(s: FinSpace) -> tuple[bool, ...]:
    return tuple(is_connected(s, a) for a in range(1 << s.n))


def is_connectedness_preserving(f: FinMap, max_points: int = SUBSET_BOUND) -> bool:
    if f.dom.n > max_points:
        raise BoundError(f"domain of {f.dom.n} points exceeds the subset bound {max_points}")
    ok = _connected_table(f.cod) if f.cod.n <= SUBSET_BOUND else None
    for a in connected_subsets(f.dom):
        img = f.image(a)
        if not (ok[img] if ok is not None else is_connected(f.cod, img)):
            return False
    return True


def is_connectedness_preserving_brute(f: FinMap) -> bool:
    """Oracle over all 2^n subsets with the partition definition on both sides."""
    for a in range(1, 1 << f.dom.n):
        if is_connected_by_partition(f.dom, a) and not is_connected_by_partition(f.cod, f.image(a)):
            return False
    return True


def all_maps(dom: FinSpace, cod: FinSpace) -> Iterator[FinMap]:
    for table in itertools.product(range(cod.n), repeat=dom.n):
        yield FinMap(dom, cod, table)


# -- products --------------------------------------------------------------


def product_map(fs: Sequence[FinMap]) -> FinMap:
    if len(fs) < 2:
        raise PreconditionError("a product map needs at least two factors")
    src = product_space(tuple(f.dom for f in fs))
    dst = product_space(tuple(f.cod for f in fs))
    table = tuple(
        dst.encode([f.table[xi] for f, xi in zip(fs, src.decode(c))]) for c in range(src.space.n)
    )
    return FinMap(src.space, dst.space, table)


def cylinder_union(p: ProductSpace, picks: Mapping[int, int]) -> int:
    """Union of the cylinders pi_i^{-1}(A_i) over the chosen factor indices."""
    if len(picks) < 2:
        raise PreconditionError("need at least two factor indices")
    for i, a in picks.items():
        if not 0 <= i < len(p.factors):
            raise PreconditionError(f"no factor with index {i}")
        factor = p.factors[i]
        factor.check_mask(a)
        if a == 0:
            raise PreconditionError(f"A_{i} is empty")
        if not is_connected(factor, factor.full):
            raise PreconditionError(f"factor {i} is not connected")
    out = 0
    for code in range(p.space.n):
        coords = p.decode(code)
        if any(a >> coords[i] & 1 for i, a in picks.items()):
            out |= 1 << code
    return out


# -- harnesses -------------------------------------------------------------


def _describe(f1: FinMap, f2: FinMap) -> dict:
    return {
        "domains": [f1.dom.matrix_string(), f2.dom.matrix_string()],
        "codomains": [f1.cod.matrix_string(), f2.cod.matrix_string()],
        "f1": list(f1.table),
        "f2": list(f2.table),
    }


def _factor_groups(domains: Sequence[FinSpace], codomains: Sequence[FinSpace]):
    groups = []
    for x in domains:
        for y in codomains:
            maps = list(all_maps(x, y))
            groups.append((
                [f for f in maps if not f.is_constant()],
                [f for f in maps if f.is_constant()],
            ))
    return groups


def _sweep_chunk(task) -> tuple[int, int, int, list[dict]]:
    left, groups, need_two = task
    checked = not_met = preserving = 0
    found = []
    lnon, lconst = left
    for rnon, rconst in groups:
        if need_two:
            not_met += len(lconst) * (len(rnon) + len(rconst)) + len(lnon) * len(rconst)
            pairs = itertools.product(lnon, rnon)
        else:
            pairs = itertools.product(lnon + lconst, rnon + rconst)
        for f1, f2 in pairs:
            checked += 1
            f = product_map((f1, f2))
            if is_connectedness_preserving(f):
                preserving += 1
                if not is_continuous(f):
                    found.append(_describe(f1, f2))
    return checked, not_met, preserving, found


def _product_sweep(domains, codomains, need_two, threads):
    groups = _factor_groups(domains, codomains)
    tasks = [(g, groups, need_two) for g in groups]
    results = ordered_map(_sweep_chunk, tasks, threads)
    checked = sum(r[0] for r in results)
    not_met = sum(r[1] for r in results)
    preserving = sum(r[2] for r in results)
    found = [v for r in results for v in r[3]]
    return checked, not_met, preserving, found


def verify_product_theorem(max_x: int = 3, max_y: int = 3, threads: int | None = None) -> Report:
    """Connected domains, T1 codomains, two nonconstant factors: a connectedness
    preserving product must be continuous. Violations list the exceptions."""
    report = Report("finite-theorem", {"max_x": max_x, "max_y": max_y})
    with report.timed():
        checked, not_met, preserving, found = _product_sweep(
            spaces_up_to(max_x, connected_only=True), t1_spaces_up_to(max_y), True, threads
        )
        report.instances_checked = checked
        report.hypothesis_not_met = not_met
        report.violations = found
        report.diagnostics["connectedness_preserving"] = preserving
    return report


VARIANTS = ("drop-T1", "drop-connected-domain", "single-nonconstant")


def search_hypothesis_variants(
    variant: str, max_x: int = 2, max_y: int = 2, threads: int | None = None
) -> Report:
    """Rerun the product sweep with one hypothesis removed.

    Counterexamples (connectedness preserving yet discontinuous products) are
    listed under ``diagnostics["counterexamples"]``; each one is re-verified
    with the brute-force subset and preimage oracles, and any that fails the
    re-check becomes a violation.
    """
    if variant == "drop-T1":
        domains, codomains, need_two = spaces_up_to(max_x, True), spaces_up_to(max_y), True
    elif variant == "drop-connected-domain":
        domains, codomains, need_two = spaces_up_to(max_x), t1_spaces_up_to(max_y), True
    elif variant == "single-nonconstant":
        domains, codomains, need_two = spaces_up_to(max_x, True), t1_spaces_up_to(max_y), False
    else:
        raise DomainError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    report = Report(f"drop-hypothesis:{variant}", {"variant": variant, "max_x": max_x, "max_y": max_y})
    with report.timed():
        checked, not_met, preserving, found = _product_sweep(domains, codomains, need_two, threads)
        report.instances_checked = checked
        report.hypothesis_not_met = not_met
        report.diagnostics["connectedness_preserving"] = preserving
        report.diagnostics["counterexamples"] = found
        for entry in found:
            f = _rebuild(entry)
            if not is_connectedness_preserving_brute(f) or is_continuous_by_preimage(f):
                report.violations.append({"kind": "recheck-failed", **entry})
    return report


def _rebuild(entry: dict) -> FinMap:
    doms = [FinSpace.from_matrix(m) for m in entry["domains"]]
    cods = [FinSpace.from_matrix(m) for m in entry["codomains"]]
    f1 = FinMap(doms[0], cods[0], tuple(entry["f1"]))
    f2 = FinMap(doms[1], cods[1], tuple(entry["f2"]))
    return product_map((f1, f2))


def verify_lemma(max_points: int = 3) -> Report:
    """Cylinder unions over two connected factors with nonempty A_i are connected."""
    report = Report("finite-lemma", {"max_points": max_points})
    with report.timed():
        conn = spaces_up_to(max_points, connected_only=True)
        for x0 in conn:
            for x1 in conn:
                p = product_space((x0, x1))
                for a0 in range(1, 1 << x0.n):
                    for a1 in range(1, 1 << x1.n):
                        report.instances_checked += 1
                        a = cylinder_union(p, {0: a0, 1: a1})
                        if not is_connected(p.space, a):
                            report.violations.append({
                                "factors": [x0.matrix_string(), x1.matrix_string()],
                                "A": [a0, a1],
                            })
    return report


def cross_check_invariants(max_points: int = 3) -> Report:
    """Agreement of the fast decision procedures with their definitional oracles."""
    report = Report("finite-crosscheck", {"max_points": max_points})
    counts = dict.fromkeys(["connectivity", "continuity", "compactness", "product_coding", "monotone_soundness"], 0)
    with report.timed():
        spaces = spaces_up_to(max_points)
        for s in spaces:
            for a in range(1 << s.n):
                counts["connectivity"] += 1
                if is_connected(s, a) != is_connected_by_partition(s, a):
                    report.violations.append({"kind": "connectivity", "space": s.matrix_string(), "mask": a})
                counts["compactness"] += 1
                if not is_compact(s, a):
                    report.violations.append({"kind": "compactness", "space": s.matrix_string(), "mask": a})
        for dom in spaces:
            for cod in spaces:
                for f in all_maps(dom, cod):
                    counts["continuity"] += 1
                    cont = is_continuous(f)
                    if cont != is_continuous_by_preimage(f):
                        report.violations.append({"kind": "continuity", "map": _map_desc(f)})
                    if cont:
                        counts["monotone_soundness"] += 1
                        if not is_connectedness_preserving(f):
                            report.violations.append({"kind": "monotone-soundness", "map": _map_desc(f)})
        for x in spaces:
            for y in spaces:
                p = product_space((x, y))
                for cx in range(x.n):
                    for cy in range(y.n):
                        counts["product_coding"] += 1
                        expect = mask_of(
                            p.encode((u, v)) for u in bits(x.reach[cx]) for v in bits(y.reach[cy])
                        )
                        if p.space.reach[p.encode((cx, cy))] != expect:
                            report.violations.append({
                                "kind": "product-coding",
                                "factors": [x.matrix_string(), y.matrix_string()],
                                "point": [cx, cy],
                            })
        report.instances_checked = sum(counts.values())
        report.diagnostics["checks"] = counts
    return report


def _map_desc(f: FinMap) -> dict:
    return {"dom": f.dom.matrix_string(), "cod": f.cod.matrix_string(), "table": list(f.table)}


def topologies_by_families(n: int) -> list[frozenset[int]]:
    """Independent oracle: all families of subsets of an n-set that contain the
    empty and full sets and are closed under union and intersection."""
    full = (1 << n) - 1
    inner = [m for m in range(1, full)]
    out = []
    for choice in range(1 << len(inner)):
        fam = {0, full} | {inner[i] for i in bits(choice)}
        if all((a | b) in fam and (a & b) in fam for a in fam for b in fam):
            out.append(frozenset(fam))
    return out


def preorder_of_topology(n: int, opens: Iterable[int]) -> FinSpace:
    """Minimal open set of x = intersection of opens containing x."""
    full = (1 << n) - 1
    rows = []
    for x in range(n):
        row = full
        for o in opens:
            if o >> x & 1:
                row &= o
        rows.append(row)
    return FinSpace(n, tuple(rows))
