import pytest
import gmpy2
from hypothesis import given, strategies as st

from mixedsums.theorems import (
    check_thm1_part_i,
    check_thm1_part_ii,
    d_value,
    distinct_sums_check,
    fib_family_present,
    fib_sum_coincidences,
    part_ii_pairs,
    pell_pair_decode,
    pell_pair_encode,
    recurrence_terms,
    telescoping_identity_check,
)
from oracles import fib


def test_d_values():
    assert d_value(2, 3) == 119
    assert d_value(2, 4) == 32751
    assert d_value(6, 3) == 55771


def test_part_i_examples():
    v = check_thm1_part_i(2, 3)
    assert (v.value, v.k, v.divisor_witness, v.is_prime_power) == (119, 2, 17, False)
    assert v.divides and v.holds and v.residue_ok
    assert check_thm1_part_i(2, 4).is_prime_power is False
    v = check_thm1_part_i(6, 3)
    assert v.divisor_witness == 1297 and 6 * 55771 == 1297 * 258 and v.divides


def test_part_i_preconditions():
    for m, n in ((4, 3), (14, 3), (2, 2)):  # 4 = 0 mod 4; 15 not prime; n too small
        with pytest.raises(ValueError):
            check_thm1_part_i(m, n)


def test_part_i_prime_power_skipped_when_huge():
    v = check_thm1_part_i(22, 6)
    assert v.is_prime_power is None and not v.fully_checked
    assert v.divides


def test_part_ii_examples():
    v = check_thm1_part_ii(2, 3, 5, 2)
    assert (v.value, v.k, v.divisor_witness) == (219, 0, 3) and v.proper_divisor
    v = check_thm1_part_ii(2, 3, 4, 2)
    assert (v.value, v.k, v.divisor_witness) == (235, 1, 5) and v.proper_divisor
    v = check_thm1_part_ii(3, 3, 6, 1)
    assert v.value == 2548 and v.divisor_witness == 4 and v.holds


def test_part_ii_n2_anomaly():
    with pytest.raises(ValueError):
        check_thm1_part_ii(2, 2, 3, 1)
    v = check_thm1_part_ii(2, 2, 3, 1, allow_small_n=True)
    assert v.value == 5 and v.value_is_prime and not v.proper_divisor
    assert not v.asserted and not v.holds


@given(st.integers(2, 7), st.integers(3, 4), st.data())
def test_part_ii_random(m, n, data):
    pairs = part_ii_pairs(m, n, max_exp=12)
    a, b = data.draw(st.sampled_from(pairs))
    v = check_thm1_part_ii(m, n, a, b)
    assert v.holds
    assert not gmpy2.is_prime(v.value)


def test_telescoping():
    assert telescoping_identity_check(2, 2) and telescoping_identity_check(3, 3)
    assert telescoping_identity_check(10, 4)


def test_distinct_sums():
    recs = distinct_sums_check(2, 30)
    assert [(r.x, r.representations) for r in recs] == [(4, ((0, 2), (2, 1)))]
    assert distinct_sums_check(3, 30) == []
    assert distinct_sums_check(10, 20) == []
    assert recurrence_terms(4, 5) == [0, 1, 4, 17, 72]


@given(st.integers(2, 12), st.integers(2, 25))
def test_distinct_sums_brute_force(a, N):
    u = recurrence_terms(a, N + 1)
    seen = {}
    for m in range(N + 1):
        for n in range(1, N + 1):
            seen.setdefault(u[m] + a * u[n], []).append((m, n))
    want = sorted((x, tuple(sorted(r))) for x, r in seen.items() if len(r) > 1)
    got = [(r.x, tuple(sorted(r.representations))) for r in distinct_sums_check(a, N)]
    assert got == want


def test_pell_codec():
    assert pell_pair_decode(3) == (1, 1)
    assert pell_pair_decode(7) == (3, 1)
    assert pell_pair_decode(8) is None
    for m in range(1, 26):
        for n in range(1, 26):
            assert pell_pair_decode(pell_pair_encode(m, n)) == (m, n)
    with pytest.raises(ValueError):
        pell_pair_encode(0, 1)


def test_fib_coincidences_small():
    got = dict(fib_sum_coincidences(3))
    assert got[2] == [(0, 3), (1, 1), (1, 2), (2, 2)]


def test_fib_coincidences_oracle():
    F = fib(10**12)[:41]
    groups = {}
    for l in range(40, 0, -1):
        for k in range(l, 0, -1):
            groups.setdefault(F[k] + F[l], set()).add((k, l))
    want = {v: s for v, s in groups.items() if len(s) > 1}
    got = {v: set(p) for v, p in fib_sum_coincidences(40, min_index=1)}
    assert got == want
    assert fib_family_present(fib_sum_coincidences(40), 40) == list(range(3, 40))
