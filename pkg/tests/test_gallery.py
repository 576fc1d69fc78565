from __future__ import annotations

import random
from fractions import Fraction

import pytest

from preslab.cantor import CantorLedger, cantor_membership, ledger_eval
from preslab.errors import DomainError, NoWitnessError, PreconditionError
from preslab.gallery import (
    HALF,
    GeometricSequence,
    RationalCompactum,
    WitnessDescriptor,
    arc_constraint_failures,
    arc_target,
    build_arc,
    certify_arc_noncompact,
    certify_derdeex,
    d_index,
    d_member_in,
    derdeex_eval,
    disconnection_witness,
    eersteex_compactness_check,
    eersteex_eval,
    eersteex_square_witness,
    odd_prime,
    random_compactum,
    squash,
    threshold,
    zigzag_descriptor,
)
from preslab.omega import OMEGA
from preslab.report import Certificate, dumps
from preslab.zigzag import UNIT, RatInterval

F = Fraction
U_HALF = RatInterval.open(F(-1, 2), F(1, 2))


# -- eersteex ---------------------------------------------------------------


def test_prime_table_and_thresholds():
    assert [odd_prime(n) for n in range(5)] == [3, 5, 7, 11, 13]
    assert [threshold(n) for n in range(3)] == [0, F(1, 2), F(2, 3)]


def test_eersteex_examples():
    assert eersteex_eval(1) is OMEGA
    assert eersteex_eval(F(3, 5)) == 1
    assert eersteex_eval(F(1, 5)) == 0
    assert eersteex_eval(F(1, 3)) == 0 and d_index(F(1, 3)) == 0
    assert eersteex_eval(F(24, 25)) == 1
    assert eersteex_eval(F(1, 2)) == 0 and d_index(F(1, 2)) is None
    with pytest.raises(DomainError):
        eersteex_eval(F(5, 4))


def test_d_sets_are_disjoint_on_random_rationals():
    rng = random.Random(8)
    for _ in range(1000):
        den = rng.choice([rng.randint(1, 2000), odd_prime(rng.randint(0, 20)) ** rng.randint(1, 3)])
        x = F(rng.randint(0, den - 1), den)
        hits = []
        for n in range(30):
            p = odd_prime(n)
            d = x.denominator
            while d % p == 0:
                d //= p
            if x.denominator > 1 and d == 1 and threshold(n) <= x < 1:
                hits.append(n)
        assert len(hits) <= 1
        assert d_index(x) == (hits[0] if hits else None)


def test_d_sets_are_dense_above_their_thresholds():
    for n in range(6):
        for lo, hi in [(threshold(n), threshold(n) + F(1, 1000)), (F(998, 1000), F(999, 1000))]:
            x = d_member_in(n, lo, hi)
            assert x is not None and lo < x < hi and d_index(x) == n
    assert d_member_in(3, F(0), F(1, 2)) is None


def test_finite_range_below_one_minus_epsilon():
    rng = random.Random(1)
    for eps in [F(1, 2), F(1, 7), F(1, 40)]:
        bound = 1 / eps - 1
        for _ in range(200):
            den = odd_prime(rng.randint(0, 50)) ** rng.randint(1, 2)
            x = F(rng.randint(0, den - 1), den)
            if x <= 1 - eps:
                assert eersteex_eval(x) <= bound


def test_compactness_check_examples():
    below = eersteex_compactness_check(RationalCompactum((RatInterval.closed(0, F(3, 4)),)))
    assert below.conclusion
    assert below.facts[1].data["B"] == 3
    single = eersteex_compactness_check(RationalCompactum(points=(F(1),)))
    assert single.conclusion
    assert single.facts[-1].data["image"].to_json() == {"explicit": [], "tail_from": None, "omega": True}
    whole = eersteex_compactness_check(RationalCompactum((UNIT,)))
    assert whole.conclusion and whole.facts[-1].data["image"].has_omega


def test_compactness_check_on_random_compacta():
    rng = random.Random(0)
    for _ in range(50):
        assert eersteex_compactness_check(random_compactum(rng)).conclusion


def test_malformed_presentations():
    with pytest.raises(DomainError):
        RationalCompactum()
    with pytest.raises(DomainError):
        RationalCompactum((RatInterval.open(0, F(1, 2)),))
    with pytest.raises(DomainError):
        RationalCompactum(points=(F(3, 2),))
    with pytest.raises(DomainError):
        GeometricSequence(F(1, 2), F(1, 3), F(1))


def test_square_witness():
    cert = eersteex_square_witness()
    assert cert.conclusion
    by_desc = {f.desc: f for f in cert.facts}
    assert by_desc["f^2(d_k, e_k) = (0, k)"].data["k=2"] == (0, 2)
    assert by_desc["the omitted limit point is (0, omega)"].data == [(0, OMEGA)]
    assert any("K = " in f.desc and f.ok for f in cert.facts)


# -- tweedeex arc -------------------------------------------------------------


def test_depth_one_arc():
    arc = build_arc(1)
    assert arc.alphas[0] < F(1, 4) and arc.betas[0] < F(1, 4)
    assert arc.targets[0] == F(1, 4)
    ev = ledger_eval(arc.ledger, arc.alphas[0], deciding=False)
    assert ev.definitive and ev.value == F(1, 4) and ev.piece == arc.alpha_pieces[0]


def test_arc_vertices_and_gaps():
    arc = build_arc(6)
    assert arc_constraint_failures(arc) == []
    for n in range(7):
        assert arc.targets[n] == arc_target(n) == HALF - F(1, 2 ** (n + 2))
        ev = ledger_eval(arc.ledger, arc.betas[n], deciding=False)
        assert ev.piece == arc.beta_pieces[n] and ev.value == arc.targets[n]
        assert cantor_membership(arc.ledger.pieces[arc.beta_pieces[n]], arc.betas[n])
    for seq in (arc.alphas, arc.betas):
        assert all(a < b and b - a < F(1, 2 ** (n + 3)) for n, (a, b) in enumerate(zip(seq, seq[1:])))
    assert arc.ledger.verify_disjointness()


def test_arc_is_deterministic():
    assert dumps(build_arc(5)) == dumps(build_arc(5))


def test_deeper_arcs_extend_shallower_ones():
    short, long = build_arc(4), build_arc(8)
    assert long.alphas[:5] == short.alphas and long.betas[:5] == short.betas


def test_depth_twelve_certificate():
    cert = certify_arc_noncompact(build_arc(12))
    assert cert.conclusion
    assert len(cert.facts) == 4 * 12 + 2
    assert all(f.ok for f in cert.facts)
    h3 = [f for f in cert.facts if f.desc.startswith("(1, t_3) in f^2(H_3)")]
    assert len(h3) == 1 and h3[0].ok


def test_certificate_conclusion_is_monotone_in_depth():
    results = [certify_arc_noncompact(build_arc(n)).conclusion for n in range(2, 9)]
    first = results.index(True)
    assert all(results[first:])


def test_tampered_target_breaks_the_certificate():
    arc = build_arc(4)
    arc.targets[2] = HALF
    assert not certify_arc_noncompact(arc).conclusion


def test_certification_needs_depth_two():
    with pytest.raises(PreconditionError):
        certify_arc_noncompact(build_arc(1))
    with pytest.raises(DomainError):
        build_arc(0)


# -- derdeex -------------------------------------------------------------------


def test_derdeex_examples():
    ledger = CantorLedger()
    assert derdeex_eval(ledger, 0) == 0
    assert derdeex_eval(ledger, 1) == 1
    assert derdeex_eval(ledger, F(1, 2)) == HALF and F(1, 2) in ledger.reserved
    assert squash(F(0)) == squash(F(1)) == HALF and squash(F(1, 4)) == F(1, 4)


def test_derdeex_certificate():
    cert = certify_derdeex(10)
    assert cert.conclusion
    assert cert.facts[-1].data["checked"] == 1023
    assert Certificate.from_json(cert.to_json()).conclusion


def test_derdeex_never_hits_one_below_a_half():
    ledger = CantorLedger()
    certify_derdeex(6, ledger)
    rng = random.Random(12)
    for _ in range(500):
        x = F(rng.randint(0, 10**6), 2 * 10**6)
        assert derdeex_eval(ledger, x) != 1


# -- disconnection witness ----------------------------------------------------------


def test_zigzag_square_witness():
    z = zigzag_descriptor()
    cert = disconnection_witness(z, z, (0, 0), (U_HALF, U_HALF), depth=64)
    assert cert.conclusion
    assert any("isolated" in f.desc for f in cert.facts)


def test_continuous_factor_has_no_witness():
    ident = WitnessDescriptor("identity", lambda x: x, lambda k: F(1, 2 * k), UNIT, UNIT)
    with pytest.raises(NoWitnessError):
        disconnection_witness(ident, zigzag_descriptor(), (0, 0), (U_HALF, U_HALF))


def test_omega_valued_descriptors_are_rejected():
    step = WitnessDescriptor("eersteex", eersteex_eval, lambda k: 1 - F(1, 3 ** k), UNIT, "omega+1")
    with pytest.raises(TypeError):
        disconnection_witness(step, step, (1, 1), (U_HALF, U_HALF))


def test_limit_value_must_sit_in_the_neighbourhood():
    z = zigzag_descriptor()
    far = RatInterval.open(F(1, 2), F(3, 4))
    with pytest.raises(PreconditionError):
        disconnection_witness(z, z, (0, 0), (far, U_HALF))


def test_certificate_json_recheck():
    cert = disconnection_witness(zigzag_descriptor(), zigzag_descriptor(), (0, 0), (U_HALF, U_HALF), 8)
    data = cert.to_json()
    assert Certificate.from_json(data).conclusion
    data["facts"][0]["ok"] = False
    with pytest.raises(ValueError):
        Certificate.from_json(data)
