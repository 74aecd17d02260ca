import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from circlaw import combinatorics as cb
from circlaw.errors import ComplexityError


@pytest.mark.parametrize("k", range(0, 7))
def test_set_partitions_count_bell(k):
    bell = [1, 1, 2, 5, 15, 52, 203]
    assert len(list(cb.restricted_growth_strings(k))) == bell[k]


@pytest.mark.parametrize("k,m", [(k, m) for k in range(1, 7) for m in range(1, k + 1)])
def test_surjections_against_brute_force(k, m):
    brute = {s for s in itertools.product(range(m), repeat=k) if len(set(s)) == m}
    got = cb.surjections(k, m)
    assert len(got) == len(brute) == cb.surjection_count(k, m)
    assert set(got) == brute


def test_stirling_values():
    assert [cb.stirling2(5, m) for m in range(6)] == [0, 1, 15, 25, 10, 1]


def test_guard():
    with pytest.raises(ComplexityError):
        cb.surjections(9, 2)


def test_surjection_matrices():
    A = cb.surjection_matrices(4, 2)
    assert A.shape == (14, 4, 2)
    assert (A.sum(axis=2) == 1).all() and (A.sum(axis=1) >= 1).all()


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), st.data())
def test_push_forward_preserves_sum(vals, data):
    k = len(vals)
    m = data.draw(st.integers(1, k))
    sigma = data.draw(st.sampled_from(cb.surjections(k, m)))
    assert sum(cb.push_forward(sigma, vals, m)) == sum(vals)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=6), st.integers(0, 10),
       st.integers(-1, 25))
def test_range_sum_matches_loop(p, lo, hi):
    assert cb.range_sum(p, lo, hi) == sum(cb.poly_eval(p, x) for x in range(lo, hi + 1))


@given(st.integers(-6, 6), st.integers(0, 5), st.integers(0, 12))
def test_rising_poly(shift, length, x):
    assert cb.poly_eval(cb.rising_poly(shift, length), x) == \
        math.prod(x + shift + t for t in range(1, length + 1))


@given(st.integers(-5, 5), st.integers(0, 6), st.integers(6, 30))
def test_binom_poly(shift, q, n):
    assert cb.poly_eval(cb.binom_poly(shift, q), n) == math.comb(n + shift, q)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6), st.integers(0, 20))
def test_binomial_basis(p, x):
    b = cb.to_binomial_basis(p)
    assert sum(c * math.comb(x, q) for q, c in enumerate(b)) == cb.poly_eval(p, x)
    assert all(isinstance(c, int) for c in b)


def test_poly_add_scale():
    assert cb.poly_add([1, 2], [0, 1, 3], Fraction(1, 2)) == [1, Fraction(5, 2), Fraction(3, 2)]
