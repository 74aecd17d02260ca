import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from circlaw import combinatorics as cb
from circlaw import cumulants as cu
from circlaw.errors import ComplexityError, InvalidArgument
from oracles import compressed_multiplier, trace_of_product


def trace_phi(mons, n):
    return trace_of_product([compressed_multiplier(a, b, n) for a, b in mons])


def trace_cumulant(mons, n):
    """Joint cumulant with each cyclic term taken as a trace of compressed multipliers."""
    k = len(mons)
    total = Fraction(0)
    for m in range(1, k + 1):
        for sigma in cb.surjections(k, m):
            merged = cu.merge(cu.as_monomials(mons), sigma, m)
            total += Fraction((-1) ** (m - 1), m) * trace_phi(merged, n)
    return total


def test_phi_examples():
    for n in (1, 5, 40):
        assert cu.phi_m([(1, 1)], n) == Fraction(n + 1, 2)
        assert cu.phi_m([(1, 0), (0, 1)], n) == Fraction(n - 1, 2)
        assert cu.phi_m([(1, 0)], n) == 0


def test_variance_of_trace_is_one():
    assert all(cu.upsilon_k([(1, 0), (0, 1)], n) == 1 for n in range(1, 60))


def test_mean_of_modulus_squared():
    assert cu.upsilon_k([(1, 1)], 9) == 5


def test_third_cumulant_decay():
    vals = [cu.upsilon_k([(1, 0), (1, 0), (0, 2)], n) for n in (10, 100, 1000)]
    assert vals == [Fraction(1, 5), Fraction(1, 50), Fraction(1, 500)]
    coeffs, n0 = cu.laurent_expansion([(1, 0), (1, 0), (0, 2)])
    assert coeffs == {-1: 2}
    assert cu.upsilon_k([(1, 0), (1, 0), (0, 2)], n0) == Fraction(2, n0)


mono = st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(lambda t: sum(t) > 0)


@given(st.lists(mono, min_size=1, max_size=4), st.integers(1, 9))
def test_phi_against_trace_oracle(mons, n):
    assert cu.phi_m(mons, n) == trace_phi(mons, n)
    assert cu.phi_m(mons, n, "direct") == cu.phi_m(mons, n)


@given(st.lists(mono, min_size=1, max_size=3), st.integers(1, 7))
def test_cumulant_against_trace_oracle(mons, n):
    assert cu.upsilon_k(mons, n) == trace_cumulant(mons, n)


@given(st.lists(mono, min_size=1, max_size=4))
def test_laurent_matches_exact_values(mons):
    coeffs, n0 = cu.laurent_expansion(mons)
    for n in (n0, n0 + 1, n0 + 7, 50):
        assert cu.upsilon_k(mons, n) == sum((c * Fraction(n) ** p for p, c in coeffs.items()),
                                            Fraction(0))


@given(st.lists(mono, min_size=1, max_size=4).filter(
    lambda m: sum(a for a, _ in m) == sum(b for _, b in m)))
def test_asymptotic_terms_match_laurent(mons):
    coeffs, _ = cu.laurent_expansion(mons)
    asy = cu.asymptotic_cumulant(mons)
    assert coeffs.get(1, 0) == asy.n_coefficient
    assert coeffs.get(0, 0) == asy.constant_term
    assert max(coeffs, default=-1) <= 1


@given(st.lists(mono, min_size=2, max_size=4), st.integers(1, 8), st.randoms())
def test_cumulant_symmetric(mons, n, rnd):
    perm = list(mons)
    rnd.shuffle(perm)
    assert cu.upsilon_k(mons, n) == cu.upsilon_k(perm, n)


def test_unbalanced_is_zero():
    assert cu.upsilon_k([(2, 0), (0, 1)], 10) == 0
    assert cu.laurent_expansion([(2, 0), (0, 1)]) == ({}, 1)


def test_fourth_cumulants_are_order_n_minus_two():
    mons = [(a, b) for a in range(3) for b in range(3) if a + b]
    for tup in itertools.combinations_with_replacement(mons, 4):
        if sum(a for a, _ in tup) != sum(b for _, b in tup):
            continue
        coeffs, _ = cu.laurent_expansion(tup)
        assert max(coeffs, default=-2) <= -2


def test_errors():
    with pytest.raises(InvalidArgument):
        cu.upsilon_k([(0, 0)], 3)
    with pytest.raises(InvalidArgument):
        cu.upsilon_k([(-1, 1)], 3)
    with pytest.raises(ComplexityError):
        cu.upsilon_k([(1, 0), (0, 1)] * 5, 3)
    with pytest.raises(InvalidArgument):
        cu.asymptotic_cumulant([(1, 0)])


def test_record():
    rec = cu.cumulant_record([(1, 0), (0, 1)], 12)
    assert rec["schema"] == 1 and rec["exact_value_as_fraction"] == "1"
    assert rec["asymptotic"] == {"n_coefficient": "0", "constant_term": "1"}


@pytest.mark.parametrize("mons", [[(1, 0), (1, 0), (0, 1), (0, 1)], [(1, 1)] * 4,
                                  [(2, 0), (0, 1), (0, 1), (1, 1)]])
def test_fourth_cumulant_against_trace_oracle(mons):
    for n in (6, 12):
        assert cu.upsilon_k(mons, n) == trace_cumulant(mons, n)
    assert cu.upsilon_k([(2, 0), (0, 1), (0, 1), (1, 1)], 24) == Fraction(4, 24 ** 2)
