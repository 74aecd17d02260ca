"""Set partitions, surjections and exact polynomial helpers."""

import functools
import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import ComplexityError

MAX_K = 8


def _guard(k):
    if k > MAX_K:
        raise ComplexityError(f"k = {k} exceeds the enumeration guard {MAX_K}")


def restricted_growth_strings(k, m=None):
    """All set partitions of ``range(k)`` as restricted-growth strings.

    With ``m`` given, only partitions into exactly ``m`` blocks.
    """
    if k == 0:
        if m in (None, 0):
            yield ()
        return
    a = [0] * k

    def rec(i, top):
        if i == k:
            if m is None or top + 1 == m:
                yield tuple(a)
            return
        limit = top + 1 if m is None else min(top + 1, m - 1)
        if m is not None and (m - 1 - top) > (k - i):
            return
        for v in range(limit + 1):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    a[0] = 0
    yield from rec(1, 0)


@functools.lru_cache(maxsize=None)
def surjections(k, m):
    """All surjections ``[k] -> [m]`` as tuples ``(sigma(0), ..., sigma(k-1))``.

    Built as set partitions into ``m`` blocks composed with block orderings,
    ``m! S(k, m)`` in total.
    """
    _guard(k)
    out = []
    perms = list(itertools.permutations(range(m)))
    for rgs in restricted_growth_strings(k, m):
        for p in perms:
            out.append(tuple(p[b] for b in rgs))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def surjection_matrices(k, m):
    """0/1 array of shape ``(count, k, m)`` with ``A[s, i, j] = [sigma_s(i) == j]``."""
    S = np.array(surjections(k, m), dtype=np.int64).reshape(-1, k)
    A = np.zeros((len(S), k, m), dtype=np.int64)
    idx = np.arange(k)
    for s, row in enumerate(S):
        A[s, idx, row] = 1
    A.setflags(write=False)
    return A


@functools.lru_cache(maxsize=None)
def stirling2(k, m):
    if k == m:
        return 1
    if m == 0 or m > k:
        return 0
    return m * stirling2(k - 1, m) + stirling2(k - 1, m - 1)


def surjection_count(k, m):
    return math.factorial(m) * stirling2(k, m)


def push_forward(sigma, values, m):
    """``(sigma v)_j = sum_{i: sigma(i) = j} v_i``."""
    out = [0] * m
    for i, j in enumerate(sigma):
        out[j] = out[j] + values[i]
    return out


# -- exact polynomials in one variable (coefficient lists, lowest degree first)

def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def poly_add(p, q, scale=1):
    out = list(p) + [0] * max(0, len(q) - len(p))
    for i, b in enumerate(q):
        out[i] += scale * b
    return out


def rising_poly(shift, length):
    """Coefficients in ``x`` of ``(x + shift + 1)(x + shift + 2)...(x + shift + length)``."""
    p = [1]
    for t in range(1, length + 1):
        p = poly_mul(p, [shift + t, 1])
    return p


def poly_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


@functools.lru_cache(maxsize=None)
def _binomial_basis(deg):
    """Rows ``x^p = sum_q S(p, q) q! C(x, q)``."""
    return tuple(tuple(stirling2(p, q) * math.factorial(q) for q in range(deg + 1))
                 for p in range(deg + 1))


def to_binomial_basis(p):
    """Coefficients ``b_q`` with ``p(x) = sum_q b_q C(x, q)`` (exact integers for integer ``p``)."""
    deg = len(p) - 1
    rows = _binomial_basis(deg)
    out = [0] * (deg + 1)
    for i, c in enumerate(p):
        if c:
            for q in range(i + 1):
                out[q] += c * rows[i][q]
    return out


def range_sum(p, lo, hi):
    """``sum_{x=lo}^{hi} p(x)`` in closed form via ``sum C(x, q) = C(hi+1, q+1) - C(lo, q+1)``.

    Valid for integer ``0 <= lo``; an empty range gives 0.
    """
    if hi < lo:
        return 0
    b = to_binomial_basis(p)
    return sum(c * (math.comb(hi + 1, q + 1) - math.comb(lo, q + 1)) for q, c in enumerate(b) if c)


def binom_poly(shift, q):
    """Coefficients in ``n`` of ``C(n + shift, q)`` (rational)."""
    p = [Fraction(1)]
    for t in range(q):
        p = poly_mul(p, [Fraction(shift - t), Fraction(1)])
    f = math.factorial(q)
    return [c / f for c in p]
