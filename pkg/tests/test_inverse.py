import math

import pytest

from isovolc import arith, classgroup, graph, inverse
from isovolc.config import Limits
from isovolc.graph import CraterShape


def test_family_discriminant_anchors():
    assert inverse.family_discriminant(2, 4) == -39
    assert inverse.family_discriminant(2, 3) == -31
    assert inverse.family_discriminant(3, 5) == -971


def test_family_discriminant_order_property():
    # the computational content of the split-with-prescribed-order theorem
    for ell in (2, 3, 5, 7):
        for n in range(1, 11):
            d = inverse.family_discriminant(ell, n)
            form = classgroup.prime_form(d, ell)
            assert classgroup.order_of_class(form) == n, (ell, n, d)


def test_family_discriminant_is_fundamental():
    for ell in (2, 3, 5):
        for n in range(1, 9):
            d = inverse.family_discriminant(ell, n)
            assert classgroup.conductor(d) == 1


def test_minimal_crater_discriminant():
    assert inverse.minimal_crater_discriminant(2, 2) == -15
    assert inverse.scan_crater_discriminants(2, 2) == [-15]  # unique below 4*2^2
    assert inverse.minimal_crater_discriminant(3, 5) == -47
    assert inverse.minimal_crater_discriminant(2, 6) == -87
    assert inverse.minimal_crater_discriminant(2, 1) == -7


def test_minimal_scan_budget():
    with pytest.raises(inverse.ScanBudgetError):
        inverse.minimal_crater_discriminant(2, 40, Limits(scan_budget=10 ** 6))


def test_minimal_results_within_bound_and_minimal():
    for ell, n in ((2, 2), (2, 6), (3, 5), (3, 2), (5, 3)):
        d = inverse.minimal_crater_discriminant(ell, n)
        assert -d <= 4 * ell ** n - 1
        for smaller in range(5, -d):
            cand = -smaller
            if cand % 4 not in (0, 1):
                continue
            if classgroup.conductor(cand) % ell == 0:
                continue
            if classgroup.kronecker_symbol_disc(cand, ell) != 1:
                continue
            form = classgroup.prime_form(cand, ell)
            assert classgroup.order_of_class(form) != n


def test_realize_crater_fixed_shapes():
    assert inverse.realize_crater(CraterShape.selfloop(), 3)[0] == -12
    assert inverse.realize_crater(CraterShape.selfloop(), 2)[0] == -8
    assert inverse.realize_crater(CraterShape.doubleselfloop(), 2)[0] == -7
    assert inverse.realize_crater(CraterShape.cycle(6), 2, "minimal")[0] == -87
    d, form = inverse.realize_crater(CraterShape.point(), 3)
    assert form is None and classgroup.kronecker_symbol_disc(d, 3) == -1
    d, form = inverse.realize_crater(CraterShape.edge2(), 2)
    assert d == -24
    assert classgroup.order_of_class(classgroup.QuadForm(*form)) == 2


def test_realize_crater_respects_conductor_coprimality():
    for ell in (2, 3, 5, 7):
        for shape in (CraterShape.point(), CraterShape.selfloop(),
                      CraterShape.doubleselfloop(), CraterShape.edge2(),
                      CraterShape.doubleedge2(), CraterShape.cycle(3)):
            d, _ = inverse.realize_crater(shape, ell, "family")
            assert d < -4
            assert classgroup.conductor(d) % ell != 0


def test_find_primes_golden_87():
    stream = inverse.find_primes(-87, 2, 1)
    assert [next(stream) for _ in range(3)] == \
        [(103, 8, 2), (151, 16, 2), (283, 28, 2)]


def test_find_primes_golden_31():
    assert next(inverse.find_primes(-31, 2, 1)) == (47, 8, 2)


def test_find_primes_invariants():
    for disc, ell, depth in ((-87, 2, 1), (-47, 3, 0), (-12, 3, 2), (-24, 2, 1)):
        stream = inverse.find_primes(disc, ell, depth)
        d_k, f = classgroup.fundamental_discriminant(disc)
        seen = set()
        for _ in range(6):
            p, t, v = next(stream)
            assert arith.is_prime(p) and p >= 5 and p != ell
            assert t > 0 and p % t != 0
            assert 4 * p == t * t + v * v * (-d_k)
            assert t * t <= 4 * p
            assert arith.valuation(v, ell) == depth
            assert v % f == 0 and (v // f) % ell ** (depth + 1) != 0
            assert p not in seen
            seen.add(p)


def test_find_primes_ascending():
    stream = inverse.find_primes(-971, 3, 0)
    primes = [next(stream)[0] for _ in range(10)]
    assert primes == sorted(primes)


def test_find_primes_rejects_bad_inputs():
    with pytest.raises(ValueError):
        next(inverse.find_primes(-3, 3, 1))
    with pytest.raises(ValueError):
        next(inverse.find_primes(-12, 2, 1))  # 2 divides the conductor of -12
    with pytest.raises(ValueError):
        next(inverse.find_primes(-87, 2, 0))  # depth 0 unreachable at ell = 2


def test_search_exhaustion_is_loud():
    stream = inverse.find_primes(-87, 2, 1, Limits(search_bound=120))
    assert next(stream)[0] == 103
    with pytest.raises(inverse.SearchExhaustedError):
        for _ in range(50):
            next(stream)


def test_target_profile():
    prof = inverse.target_profile(CraterShape.cycle(6), 2, 1)
    assert prof.level_sizes == (6, 6)
    prof = inverse.target_profile(CraterShape.selfloop(), 3, 2)
    assert prof.level_sizes == (1, 3, 9)
    prof = inverse.target_profile(CraterShape.point(), 5, 1)
    assert prof.level_sizes == (1, 6)
    prof = inverse.target_profile(CraterShape.doubleedge2(), 3, 0)
    assert prof.level_sizes == (2,)


def test_verify_realization_golden_103():
    target = inverse.AbstractVolcano(CraterShape.cycle(6), 1, 2)
    cert = inverse.RealizationCertificate(
        crater=CraterShape.cycle(6), ell=2, depth=1, discriminant=-87,
        prime_form=(2, 1, 11), trace=8, conductor=2, prime=103)
    verified = inverse.verify_realization(cert, target)
    assert verified.verified
    assert verified.witness is not None
    # re-running verification succeeds again (reproducibility)
    assert inverse.verify_realization(verified, target).verified


def test_verify_realization_mismatch_rejected():
    target = inverse.AbstractVolcano(CraterShape.cycle(6), 1, 2)
    wrong = inverse.RealizationCertificate(
        crater=CraterShape.cycle(6), ell=2, depth=1, discriminant=-87,
        prime_form=(2, 1, 11), trace=5, conductor=2, prime=109)
    with pytest.raises(inverse.VerificationError):
        inverse.verify_realization(wrong, target)


def test_verify_above_cap_flagged_unverified():
    target = inverse.AbstractVolcano(CraterShape.cycle(6), 1, 2)
    cert = inverse.RealizationCertificate(
        crater=CraterShape.cycle(6), ell=2, depth=1, discriminant=-87,
        prime_form=(2, 1, 11), trace=8, conductor=2, prime=103)
    out = inverse.verify_realization(cert, target, Limits(verify_cap=50))
    assert not out.verified and out.witness is None


def test_solve_inverse_golden():
    target = inverse.AbstractVolcano(CraterShape.cycle(6), 1, 2)
    certs = inverse.solve_inverse(target, "minimal", 1)
    assert certs[0].discriminant == -87
    assert certs[0].prime <= 103
    assert certs[0].prime == 103 and certs[0].verified


def test_solve_inverse_multiple_distinct_verified():
    target = inverse.AbstractVolcano(CraterShape.cycle(6), 1, 2)
    certs = inverse.solve_inverse(target, "minimal", 3)
    assert len({c.prime for c in certs}) == 3
    assert all(c.verified for c in certs)


def test_solve_inverse_depth0_point_picks_odd_ell():
    certs = inverse.solve_inverse(inverse.AbstractVolcano(CraterShape.point()),
                                  count=1)
    assert certs[0].verified
    assert certs[0].ell % 2 == 1


def test_solve_inverse_selfloop_depth2():
    target = inverse.AbstractVolcano(CraterShape.selfloop(), 2, 3)
    certs = inverse.solve_inverse(target, count=1)
    cert = certs[0]
    assert cert.discriminant == -12 and cert.verified
    g = graph.build_graph(cert.prime, 3)
    dec = graph.decompose(g, with_belts=False)
    comp = dec.component_of_vertex(cert.witness)
    assert comp.profile.level_sizes == (1, 3, 9)


def test_solve_inverse_refuses_ell2_depth0():
    with pytest.raises(ValueError):
        inverse.solve_inverse(
            inverse.AbstractVolcano(CraterShape.doubleselfloop(), 0, 2))


def test_abstract_volcano_validation():
    with pytest.raises(ValueError):
        inverse.AbstractVolcano(CraterShape.cycle(6), 1, None)
    with pytest.raises(ValueError):
        inverse.AbstractVolcano(CraterShape.point(), -1, 3)
    with pytest.raises(ValueError):
        inverse.AbstractVolcano(CraterShape.point(), 1, 4)


def test_certificate_json_roundtrip():
    target = inverse.AbstractVolcano(CraterShape.cycle(6), 1, 2)
    cert = inverse.solve_inverse(target, "minimal", 1)[0]
    text = cert.to_json()
    back = inverse.RealizationCertificate.from_json(text)
    assert back == cert
    assert '"D": -87' in text and '"p": 103' in text


def test_certificate_arithmetic_invariants():
    for target in (inverse.AbstractVolcano(CraterShape.cycle(4), 1, 3),
                   inverse.AbstractVolcano(CraterShape.doubleedge2(), 1, 2),
                   inverse.AbstractVolcano(CraterShape.edge2(), 0, 5)):
        cert = inverse.solve_inverse(target, "family", 1)[0]
        d_k, f = classgroup.fundamental_discriminant(cert.discriminant)
        assert 4 * cert.prime == cert.trace ** 2 + cert.conductor ** 2 * (-d_k)
        assert arith.valuation(cert.conductor, cert.ell) == cert.depth
        assert cert.conductor % f == 0
        assert 0 < cert.trace <= math.isqrt(4 * cert.prime)
        assert cert.verified
