"""Exact joint cumulants of monomial statistics ``X(z^a zbar^b)`` for the
Ginibre ensemble at finite n, and their large-n expansion.

A cyclic product of m monomials contributes

    Phi_m = n^{-s} sum_{l=L0}^{L1} prod_j (l + eta_j + 1) ... (l + eta_j + alpha_j)

where ``gamma_j = beta_j - alpha_j``, ``eta_j`` are its prefix sums, ``s`` is the
common total degree and the range keeps every exponent ``l + eta_j`` inside
``[0, n-1]`` (the implicit ``eta = 0`` included). Joint cumulants are

    C_k = sum_m (-1)^{m-1}/m  sum_{sigma: [k] onto [m]} Phi_m(sigma f)

with ``sigma f`` multiplying together the monomials sent to the same slot.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import combinatorics as cb
from .errors import ComplexityError, InvalidArgument


class MonomialStat(NamedTuple):
    alpha: int
    beta: int


def as_monomials(items):
    out = []
    for it in items:
        a, b = (it.alpha, it.beta) if isinstance(it, MonomialStat) else it
        if int(a) != a or int(b) != b or a < 0 or b < 0:
            raise InvalidArgument(f"exponents must be nonnegative integers, got {(a, b)}")
        if a + b < 1:
            raise InvalidArgument("a monomial statistic needs alpha + beta >= 1")
        out.append(MonomialStat(int(a), int(b)))
    return tuple(out)


def _degrees(mons):
    return sum(m.alpha for m in mons), sum(m.beta for m in mons)


def flow(mons):
    """Prefix sums ``eta_j`` of ``gamma_j = beta_j - alpha_j``."""
    eta, acc = [], 0
    for m in mons:
        acc += m.beta - m.alpha
        eta.append(acc)
    return eta


def flow_range(mons, n):
    eta = flow(mons)
    lo = -min(0, min(eta))
    hi = n - 1 - max(0, max(eta))
    return eta, lo, hi


def _product_poly(mons, eta):
    p = [1]
    for m, e in zip(mons, eta):
        p = cb.poly_mul(p, cb.rising_poly(e, m.alpha))
    return p


def phi_m(monomials, n, method="closed"):
    """Exact ``Phi_m`` of a cyclic product of monomials.

    ``method="closed"`` sums the polynomial in ``l`` through the binomial basis;
    ``method="direct"`` loops over ``l``.
    """
    mons = as_monomials(monomials)
    if n < 1:
        raise InvalidArgument("n must be positive")
    s, sb = _degrees(mons)
    if s != sb or not mons:
        return Fraction(0)
    eta, lo, hi = flow_range(mons, n)
    if hi < lo:
        return Fraction(0)
    if method == "closed":
        total = cb.range_sum(_product_poly(mons, eta), lo, hi)
    elif method == "direct":
        total = 0
        for ell in range(lo, hi + 1):
            term = 1
            for m, e in zip(mons, eta):
                for t in range(1, m.alpha + 1):
                    term *= ell + e + t
            total += term
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    return Fraction(total, n ** s)


def phi_m_polynomial(monomials):
    """``(coeffs, n0)`` with ``n^s Phi_m(n) = sum_p coeffs[p] n^p`` for all ``n >= n0``."""
    mons = as_monomials(monomials)
    s, sb = _degrees(mons)
    if s != sb:
        return [Fraction(0)], 1
    eta = flow(mons)
    lo = -min(0, min(eta))
    c = max(0, max(eta))
    b = cb.to_binomial_basis(_product_poly(mons, eta))
    out = [Fraction(0)]
    for q, coef in enumerate(b):
        if coef:
            out = cb.poly_add(out, cb.binom_poly(-c, q + 1), coef)
            out[0] -= coef * math.comb(lo, q + 1)
    return out, max(1, c + lo)


def merge(monomials, sigma, m):
    """``sigma f``: multiply the monomials mapped to the same slot."""
    a = cb.push_forward(sigma, [x.alpha for x in monomials], m)
    b = cb.push_forward(sigma, [x.beta for x in monomials], m)
    return tuple(MonomialStat(x, y) for x, y in zip(a, b))


def _surjection_terms(mons):
    """``{merged tuple: signed weight}`` summing ``(-1)^{m-1}/m`` over surjections."""
    k = len(mons)
    if k > cb.MAX_K:
        raise ComplexityError(f"k = {k} exceeds the surjection guard {cb.MAX_K}")
    terms = {}
    for m in range(1, k + 1):
        w = Fraction((-1) ** (m - 1), m)
        for sigma in cb.surjections(k, m):
            key = merge(mons, sigma, m)
            terms[key] = terms.get(key, 0) + w
    return terms


def upsilon_k(monomials, n, method="closed"):
    """Exact joint cumulant ``C_k(X(f_1), ..., X(f_k))`` for Ginibre at size n."""
    mons = as_monomials(monomials)
    if not mons:
        raise InvalidArgument("need at least one monomial")
    s, sb = _degrees(mons)
    if s != sb:
        if len(mons) > cb.MAX_K:
            raise ComplexityError(f"k = {len(mons)} exceeds the surjection guard {cb.MAX_K}")
        return Fraction(0)
    return sum((w * phi_m(key, n, method) for key, w in _surjection_terms(mons).items()
                if w), Fraction(0))


def laurent_expansion(monomials):
    """Exact ``{p: c_p}`` with ``C_k(n) = sum_p c_p n^p`` for ``n >= n0``; returns ``(coeffs, n0)``."""
    mons = as_monomials(monomials)
    s, sb = _degrees(mons)
    if s != sb:
        return {}, 1
    total, n0 = [Fraction(0)], 1
    for key, w in _surjection_terms(mons).items():
        if w:
            p, valid = phi_m_polynomial(key)
            total = cb.poly_add(total, p, w)
            n0 = max(n0, valid)
    return {i - s: c for i, c in enumerate(total) if c}, n0


def phi_constant(monomials, s):
    """O(1) term of ``Phi_m`` as ``n -> infinity``:
    ``-(1 + eta_max) + 1/2 + (1/s) sum_j [eta_j alpha_j + alpha_j (alpha_j + 1) / 2]``."""
    eta = flow(monomials)
    eta_max = max(0, max(eta))
    acc = sum(e * m.alpha + Fraction(m.alpha * (m.alpha + 1), 2) for e, m in zip(eta, monomials))
    return -(1 + eta_max) + Fraction(1, 2) + acc / s


@dataclass(frozen=True)
class AsymptoticCumulant:
    n_coefficient: Fraction
    constant_term: Fraction

    def to_dict(self):
        return {"n_coefficient": str(self.n_coefficient), "constant_term": str(self.constant_term)}


def asymptotic_cumulant(monomials):
    """Leading terms ``C_k = a n + b + O(1/n)`` from the per-cycle expansion."""
    mons = as_monomials(monomials)
    s, sb = _degrees(mons)
    if s != sb or s < 1:
        raise InvalidArgument("asymptotic cumulant needs sum(alpha) == sum(beta) >= 1")
    const = Fraction(0)
    for key, w in _surjection_terms(mons).items():
        if w:
            const += w * phi_constant(key, s)
    a = Fraction(1, s + 1) if len(mons) == 1 else Fraction(0)
    return AsymptoticCumulant(a, const)


def cumulant_record(monomials, n):
    mons = as_monomials(monomials)
    val = upsilon_k(mons, n)
    rec = {"schema": 1, "exponents": [list(m) for m in mons], "n": n,
           "exact_value_as_fraction": str(val), "float": float(val)}
    s, sb = _degrees(mons)
    if s == sb:
        rec["asymptotic"] = asymptotic_cumulant(mons).to_dict()
    return rec
