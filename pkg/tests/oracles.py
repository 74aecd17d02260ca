"""Closed-form root formulas used as independent oracles for the eigensolver."""

import cmath

import numpy as np


def _cbrt(w):
    if w == 0:
        return 0j
    return cmath.exp(cmath.log(w) / 3)


def cubic_roots(a, b, c, d):
    """Roots of ``a x^3 + b x^2 + c x + d`` by Cardano's formula."""
    b, c, d = b / a, c / a, d / a
    # depressed cubic t^3 + p t + q with x = t - b/3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    disc = cmath.sqrt(q * q / 4 + p ** 3 / 27)
    C = _cbrt(-q / 2 + disc)
    if abs(C) < 1e-300:
        C = _cbrt(-q / 2 - disc)
    omega = complex(-0.5, np.sqrt(3) / 2)
    roots = []
    for k in range(3):
        Ck = C * omega ** k
        t = Ck - p / (3 * Ck) if abs(Ck) > 1e-300 else 0j
        roots.append(t - b / 3)
    return np.array(roots)


def quartic_roots(a, b, c, d, e):
    """Roots of ``a x^4 + b x^3 + c x^2 + d x + e`` by Ferrari's method."""
    b, c, d, e = b / a, c / a, d / a, e / a
    # depressed quartic y^4 + p y^2 + q y + r with x = y - b/4
    p = c - 3 * b * b / 8
    q = b ** 3 / 8 - b * c / 2 + d
    r = -3 * b ** 4 / 256 + b * b * c / 16 - b * d / 4 + e
    shift = -b / 4
    if abs(q) < 1e-14:
        # biquadratic
        out = []
        for u in (cmath.sqrt(p * p / 4 - r), -cmath.sqrt(p * p / 4 - r)):
            w = -p / 2 + u
            out += [cmath.sqrt(w), -cmath.sqrt(w)]
        return np.array(out) + shift
    # resolvent cubic 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0, take a nonzero root
    ms = cubic_roots(8, 8 * p, 2 * p * p - 8 * r, -q * q)
    m = ms[np.argmax(np.abs(ms))]
    s = cmath.sqrt(2 * m)
    out = []
    for sigma in (1, -1):
        inner = cmath.sqrt(-(2 * p + 2 * m + sigma * 2 * q / s))
        for tau in (1, -1):
            out.append((sigma * s + tau * inner) / 2)
    return np.array(out) + shift


def match_roots(x, y):
    """Largest distance after greedily pairing each of ``x`` with its nearest unused ``y``."""
    y = list(y)
    worst = 0.0
    for v in x:
        j = int(np.argmin([abs(v - w) for w in y]))
        worst = max(worst, abs(v - y[j]))
        y.pop(j)
    return worst


def charpoly(A):
    """Characteristic polynomial coefficients (leading first) by Faddeev-LeVerrier."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    coeffs = [1.0 + 0j]
    M = np.zeros_like(A)
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + coeffs[-1] * eye
        coeffs.append(-np.trace(A @ M) / k)
    return coeffs


def compressed_multiplier(a, b, n):
    """Exact matrix of ``P (z^a zbar^b) P`` on ``span{z^0..z^{n-1}}`` for the Ginibre
    kernel, in the monomial basis: column i maps ``z^i`` to ``z^{i+a-b}`` times
    ``c_l M(2(i+a))`` with ``c_l = n^l / l!`` and ``M(2j) = j! / n^j``."""
    from fractions import Fraction
    from math import factorial
    F = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        ell = i + a - b
        if 0 <= ell < n:
            F[ell][i] = Fraction(n ** ell * factorial(i + a), factorial(ell) * n ** (i + a))
    return F


def trace_of_product(mats):
    from fractions import Fraction
    n = len(mats[0])
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for M in mats:
        P = [[sum(P[i][k] * M[k][j] for k in range(n) if P[i][k] and M[k][j])
              for j in range(n)] for i in range(n)]
    return sum(P[i][i] for i in range(n))
