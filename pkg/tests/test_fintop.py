from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from preslab.errors import BoundError, DomainError, PreconditionError
from preslab.fintop import (
    FinMap,
    FinSpace,
    VARIANTS,
    all_maps,
    bits,
    connected_subsets,
    cross_check_invariants,
    cylinder_union,
    enumerate_preorders,
    is_closed,
    is_compact,
    is_connected,
    is_connected_by_partition,
    is_connectedness_preserving,
    is_connectedness_preserving_brute,
    is_continuous,
    is_continuous_by_preimage,
    is_open,
    is_t1,
    mask_of,
    preorder_of_topology,
    product_map,
    product_space,
    search_hypothesis_variants,
    spaces_up_to,
    topologies_by_families,
    verify_lemma,
    verify_product_theorem,
)

S = FinSpace.sierpinski()
SWAP = FinMap(S, S, (1, 0))


def ident(s: FinSpace) -> FinMap:
    return FinMap(s, s, tuple(range(s.n)))


def const(s: FinSpace, cod: FinSpace, c: int) -> FinMap:
    return FinMap(s, cod, (c,) * s.n)


# -- spaces ---------------------------------------------------------------


def test_reach_must_be_a_preorder():
    with pytest.raises(DomainError):
        FinSpace(2, (0b01, 0b01))  # 1 not in U_1
    with pytest.raises(DomainError):
        FinSpace(3, (0b011, 0b110, 0b100))  # 0 -> 1 -> 2 but not 0 -> 2


def test_matrix_round_trip():
    assert S.matrix_string() == "1101"
    assert FinSpace.from_matrix("1101") == S
    assert FinSpace.from_matrix(["11", "01"]) == S


def test_sierpinski_opens():
    assert is_open(S, 0b10)
    assert not is_open(S, 0b01)
    assert is_closed(S, 0b01)
    for s in spaces_up_to(3):
        assert is_open(s, 0)


def test_masks_outside_ground_set_are_rejected():
    with pytest.raises(DomainError):
        is_open(S, 0b100)
    with pytest.raises(DomainError):
        is_connected(S, 0b111)


def test_connectedness_examples():
    assert is_connected(S, 0b11)
    assert not is_connected(FinSpace.discrete(2), 0b11)
    p = product_space((S, S))
    antidiagonal = mask_of([p.encode((0, 1)), p.encode((1, 0))])
    assert not is_connected(p.space, antidiagonal)
    assert not is_connected_by_partition(p.space, antidiagonal)
    assert is_connected(S, 0)


def test_t1_examples():
    assert is_t1(FinSpace.discrete(3))
    assert not is_t1(S)
    assert not is_t1(FinSpace.indiscrete(2))


def test_continuity_examples():
    assert is_continuous(ident(S))
    assert not is_continuous(SWAP)
    assert not is_continuous_by_preimage(SWAP)
    for s in spaces_up_to(3):
        assert is_continuous(const(s, S, 1))


def test_preorder_counts():
    assert [sum(1 for _ in enumerate_preorders(n)) for n in range(1, 5)] == [1, 4, 29, 355]


def test_preorder_counts_match_set_family_oracle():
    for n in range(1, 4):
        families = topologies_by_families(n)
        from_families = {preorder_of_topology(n, fam) for fam in families}
        assert len(families) == len(from_families)
        assert from_families == set(enumerate_preorders(n))


def test_enumeration_is_deterministic_and_bounded():
    assert list(enumerate_preorders(3)) == list(enumerate_preorders(3))
    strings = [s.matrix_string() for s in enumerate_preorders(3)]
    assert strings == sorted(strings)
    with pytest.raises(BoundError):
        list(enumerate_preorders(5))


def test_connected_subsets_match_brute_force():
    for s in spaces_up_to(3):
        brute = sorted(
            (a for a in range(1, 1 << s.n) if is_connected_by_partition(s, a)),
            key=lambda m: (m.bit_count(), m),
        )
        assert list(connected_subsets(s)) == brute


# -- products ---------------------------------------------------------------


def test_product_coding_is_bijective_and_factor_0_most_significant():
    p = product_space((S, FinSpace.discrete(3)))
    assert p.space.n == 6
    assert p.encode((1, 0)) == 3
    assert sorted(p.encode(c) for c in itertools.product(range(2), range(3))) == list(range(6))
    for code in range(6):
        assert p.encode(p.decode(code)) == code


def test_product_reach_is_the_box_of_factor_reaches():
    for x0, x1 in itertools.product(spaces_up_to(2), repeat=2):
        p = product_space((x0, x1))
        for a, b in itertools.product(range(x0.n), range(x1.n)):
            box = mask_of(p.encode((u, v)) for u in bits(x0.reach[a]) for v in bits(x1.reach[b]))
            assert p.space.reach[p.encode((a, b))] == box


def test_product_map_examples():
    p = product_space((S, S))
    assert product_map((ident(S), ident(S))) == ident(p.space)
    c = product_map((const(S, S, 0), const(S, S, 1)))
    assert set(c.table) == {p.encode((0, 1))}
    swap2 = product_map((SWAP, SWAP))
    for a, b in itertools.product(range(2), repeat=2):
        assert p.decode(swap2(p.encode((a, b)))) == (1 - a, 1 - b)


def test_product_commutes_with_projections():
    d3 = FinSpace.discrete(3)
    f1, f2 = FinMap(S, d3, (2, 0)), FinMap(d3, S, (1, 1, 0))
    f = product_map((f1, f2))
    src, dst = product_space((S, d3)), product_space((d3, S))
    for code in range(src.space.n):
        x = src.decode(code)
        assert dst.decode(f(code)) == (f1(x[0]), f2(x[1]))


def test_product_map_needs_two_factors():
    with pytest.raises(PreconditionError):
        product_map([ident(S)])
    with pytest.raises(PreconditionError):
        product_map([])


def test_cylinder_union_examples():
    p = product_space((S, S))
    a = cylinder_union(p, {0: 0b01, 1: 0b01})
    assert a == mask_of(p.encode(c) for c in [(0, 0), (0, 1), (1, 0)])
    assert is_connected(p.space, a)
    assert cylinder_union(p, {0: S.full, 1: S.full}) == p.space.full
    p3 = product_space((S, S, S))
    planes = cylinder_union(p3, {0: 0b10, 2: 0b10})
    assert bin(planes).count("1") == 6
    assert is_connected(p3.space, planes)


def test_cylinder_union_preconditions():
    p = product_space((S, S))
    with pytest.raises(PreconditionError):
        cylinder_union(p, {0: 0b01})
    with pytest.raises(PreconditionError):
        cylinder_union(p, {0: 0, 1: 0b01})
    q = product_space((FinSpace.discrete(2), S))
    with pytest.raises(PreconditionError):
        cylinder_union(q, {0: 0b01, 1: 0b01})


# -- preservation ---------------------------------------------------------------


def test_preservation_examples():
    assert is_connectedness_preserving(const(S, S, 0))
    d2 = FinSpace.discrete(2)
    for cod in spaces_up_to(2):
        assert all(is_connectedness_preserving(f) for f in all_maps(d2, cod))
    assert is_connectedness_preserving(SWAP) and not is_continuous(SWAP)


def test_swap_square_is_preserving_by_exhaustive_subsets():
    swap2 = product_map((SWAP, SWAP))
    assert is_connectedness_preserving_brute(swap2)
    assert is_connectedness_preserving(swap2)
    assert not is_continuous(swap2)


def test_continuous_maps_preserve_connectedness():
    for dom, cod in itertools.product(spaces_up_to(2), repeat=2):
        for f in all_maps(dom, cod):
            if is_continuous(f):
                assert is_connectedness_preserving(f)


def test_preservation_subset_bound():
    big = FinSpace.discrete(17)
    with pytest.raises(BoundError):
        is_connectedness_preserving(FinMap(big, S, (0,) * 17))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_fast_preservation_matches_brute_force(data):
    spaces = spaces_up_to(3)
    dom = data.draw(st.sampled_from(spaces))
    cod = data.draw(st.sampled_from(spaces))
    table = tuple(data.draw(st.integers(0, cod.n - 1)) for _ in range(dom.n))
    f = FinMap(dom, cod, table)
    assert is_connectedness_preserving(f) == is_connectedness_preserving_brute(f)
    assert is_continuous(f) == is_continuous_by_preimage(f)


def test_finite_subsets_are_compact():
    for s in spaces_up_to(3):
        assert all(is_compact(s, a) for a in range(1 << s.n))


# -- harnesses ---------------------------------------------------------------


def test_product_theorem_small():
    r = verify_product_theorem(2, 2)
    assert r.violations == []
    assert r.instances_checked > 0
    assert r.hypothesis_not_met > 0
    assert r.diagnostics["connectedness_preserving"] == 0


def test_drop_t1_finds_swap_square():
    r = search_hypothesis_variants("drop-T1", 2, 2)
    assert r.violations == []
    found = r.diagnostics["counterexamples"]
    oracle = 0
    conn = [s for s in spaces_up_to(2) if is_connected_by_partition(s, s.full)]
    for x1, x2, y1, y2 in itertools.product(conn, conn, spaces_up_to(2), spaces_up_to(2)):
        for f1 in all_maps(x1, y1):
            for f2 in all_maps(x2, y2):
                if f1.is_constant() or f2.is_constant():
                    continue
                f = product_map((f1, f2))
                if is_connectedness_preserving_brute(f) and not is_continuous_by_preimage(f):
                    oracle += 1
    assert len(found) == oracle == 112
    swap_entry = {"domains": ["1101", "1101"], "codomains": ["1101", "1101"], "f1": [1, 0], "f2": [1, 0]}
    assert swap_entry in found


@pytest.mark.parametrize("variant", ["drop-connected-domain", "single-nonconstant"])
def test_other_variants_find_nothing_at_two_points(variant):
    r = search_hypothesis_variants(variant, 2, 2)
    assert r.violations == []
    assert r.diagnostics["counterexamples"] == []


def test_unknown_variant():
    assert "drop-T1" in VARIANTS
    with pytest.raises(DomainError):
        search_hypothesis_variants("drop-everything")


def test_lemma_and_cross_checks_small():
    assert verify_lemma(2).violations == []
    r = cross_check_invariants(2)
    assert r.violations == [] and r.instances_checked > 0


def test_parallel_sweep_matches_serial():
    serial = verify_product_theorem(2, 2, threads=1)
    parallel = verify_product_theorem(2, 2, threads=2)
    assert serial.dumps(timing=False) == parallel.dumps(timing=False)
