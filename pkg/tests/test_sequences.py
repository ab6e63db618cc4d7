import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mixedsums.sequences import get_sequence, nth_term, sequence_ids, terms_below


def test_known_prefixes():
    assert [nth_term("F", i) for i in range(10)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
    assert [nth_term("L", i) for i in range(8)] == [2, 1, 3, 4, 7, 11, 18, 29]
    assert [nth_term("P", i) for i in range(7)] == [0, 1, 2, 5, 12, 29, 70]
    assert [nth_term("Q", i) for i in range(6)] == [2, 2, 6, 14, 34, 82]
    assert [nth_term("C", i) for i in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert [nth_term("U", i) for i in range(6)] == [0, 1, 4, 17, 72, 305]
    assert [nth_term("TRI", i) for i in range(6)] == [0, 1, 3, 6, 10, 15]
    assert [nth_term("POW2", i) for i in range(5)] == [1, 2, 4, 8, 16]


def test_large_index_exact():
    assert nth_term("F", 100) == 354224848179261915075
    assert nth_term("C", 30) == math.comb(60, 30) // 31


@given(st.integers(2, 300))
def test_recurrences(n):
    assert nth_term("F", n) == nth_term("F", n - 1) + nth_term("F", n - 2)
    assert nth_term("L", n) == nth_term("F", n - 1) + nth_term("F", n + 1)
    assert nth_term("P", n) == 2 * nth_term("P", n - 1) + nth_term("P", n - 2)
    assert nth_term("Q", n) == 2 * nth_term("Q", n - 1) + nth_term("Q", n - 2)
    assert nth_term("U", n) == 4 * nth_term("U", n - 1) + nth_term("U", n - 2)
    assert 2 * nth_term("U", n) == nth_term("F", 3 * n)


@given(st.integers(0, 120))
def test_catalan_closed_form(n):
    assert nth_term("C", n) == math.comb(2 * n, n) // (n + 1)


@given(st.integers(0, 10**30), st.sampled_from(["F", "L", "P", "Q", "U", "C", "TRI", "POW2", "POW5"]))
def test_terms_below_complete(bound, seq):
    table = terms_below(seq, bound)
    d = get_sequence(seq)
    stop = max(d.increasing_from, table.indices[-1] + 1 if table.indices else 0)
    assert nth_term(seq, stop) > bound
    expected = [i for i in range(stop) if nth_term(seq, i) <= bound]
    assert list(table.indices) == expected
    assert list(table.values) == [nth_term(seq, i) for i in expected]


def test_terms_below_min_index_and_array():
    t = terms_below("F", 100, min_index=2)
    assert t.indices[0] == 2 and t.values[-1] == 89
    arr = t.as_array()
    assert arr.dtype == np.int64 and arr.tolist() == list(t.values)
    with pytest.raises(OverflowError):
        terms_below("F", 2**70).as_array()


def test_errors():
    with pytest.raises(ValueError):
        nth_term("F", -1)
    with pytest.raises(KeyError):
        get_sequence("XYZ")
    assert {"F", "L", "P", "Q", "U", "C", "TRI"} <= set(sequence_ids())
