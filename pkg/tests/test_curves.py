import math

from hypothesis import given, settings
from hypothesis import strategies as st

from isovolc import arith, curves

import oracles

TEST_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 53, 61]


def _j_of(a, b, p):
    num = 4 * a ** 3
    return 1728 * num * pow(num + 27 * b * b, -1, p) % p


def test_curve_from_j_special_points():
    assert curves.curve_from_j(0, 7) == (0, 1)
    assert curves.curve_from_j(1728 % 1009, 1009) == (1, 0)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([p for p in oracles.sieve_primes(500) if p >= 5]),
       st.data())
def test_curve_from_j_roundtrip(p, data):
    j = data.draw(st.integers(0, p - 1))
    a, b = curves.curve_from_j(j, p)
    assert (4 * a ** 3 + 27 * b * b) % p != 0
    assert _j_of(a, b, p) == j


def test_trace_abs_against_naive_point_count():
    for p in TEST_PRIMES:
        for j in range(p):
            a, b = curves.curve_from_j(j, p)
            count = oracles.count_points_naive(a, b, p)
            assert curves.trace_abs(j, p) == abs(p + 1 - count), (j, p)


def test_trace_abs_examples():
    assert curves.trace_abs(149, 1009) == 0
    assert curves.trace_abs(0, 11) == 0          # p = 2 mod 3 forces it
    assert curves.trace_abs(0, 1009) in (19, 43, 62)


def test_traces_for_j_golden():
    assert curves.traces_for_j(0, 1009).traces == (19, 43, 62)
    assert curves.traces_for_j(719, 1009).traces == (30, 56)
    ts = curves.traces_for_j(5, 1009)
    assert len(ts.traces) == 1
    assert ts.traces[0] == curves.trace_abs(5, 1009)


def test_traces_for_j_supersingular_cases():
    assert curves.traces_for_j(0, 11).supersingular        # 11 = 2 mod 3
    assert curves.traces_for_j(1728 % 7, 7).supersingular  # 7 = 3 mod 4
    assert curves.traces_for_j(149, 1009).supersingular


def test_every_vertex_classified():
    for p in (101, 1009):
        ss = 0
        ordinary = 0
        for j in range(p):
            if curves.traces_for_j(j, p).supersingular:
                ss += 1
            else:
                ordinary += 1
        assert ss + ordinary == p


def test_hasse_bound():
    for p in TEST_PRIMES + [101, 211, 1009]:
        bound = math.isqrt(4 * p)
        table = curves.trace_table(p)
        for j, t in enumerate(table):
            assert 0 <= t <= bound


def test_special_traces_satisfy_norm_equation():
    for p in (13, 37, 61, 1009, 7321):
        if p % 3 == 1:
            for t in curves.traces_for_j(0, p).traces:
                v2, rem = divmod(4 * p - t * t, 3)
                assert rem == 0 and arith.is_square(v2)
        if p % 4 == 1:
            for t in curves.traces_for_j(1728 % p, p).traces:
                v2, rem = divmod(4 * p - t * t, 4)
                assert rem == 0 and arith.is_square(v2)


def test_representative_trace_member_of_trace_set():
    for p in (13, 37, 1009):
        for j in (0, 1728 % p):
            ts = curves.traces_for_j(j, p)
            rep = curves.trace_abs(j, p)
            if ts.supersingular:
                assert rep == 0
            else:
                assert rep in ts.traces


def test_every_hasse_trace_attained():
    for p in (7, 23, 101, 1009):
        attained = set()
        for j in range(p):
            attained.update(curves.traces_for_j(j, p).traces)
        assert attained == set(range(1, math.isqrt(4 * p) + 1))


def test_supersingular_set_1009():
    assert curves.supersingular_set(1009) == \
        (149, 155, 157, 529, 602, 605, 838, 890, 897, 905)
