"""Schur functions, power-sum expansions and exact moments of power-sum
statistics ``p_j = sum_k z_k^j`` for rotation-invariant ensembles.
"""

import functools
import math
from fractions import Fraction

import numpy as np

from .errors import ComplexityError, ConsistencyError, InvalidArgument, NumericError
from .kernels import radial_moment, radial_moment_exact

MAX_DEGREE = 40


def partition(parts):
    """Normalize to a weakly decreasing tuple of positive ints."""
    p = tuple(int(x) for x in parts)
    if any(x < 0 for x in p):
        raise InvalidArgument(f"negative part in {parts}")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise InvalidArgument(f"parts must be weakly decreasing: {parts}")
    return tuple(x for x in p if x > 0)


def partitions(weight, max_part=None):
    """All partitions of ``weight`` in reverse lexicographic order."""
    if max_part is None:
        max_part = weight
    if weight == 0:
        yield ()
        return
    for first in range(min(weight, max_part), 0, -1):
        for rest in partitions(weight - first, first):
            yield (first,) + rest


def profile(a):
    """Trim trailing zeros of an exponent vector ``(a_1, a_2, ...)``."""
    a = [int(x) for x in a]
    if any(x < 0 for x in a):
        raise InvalidArgument("profile exponents must be nonnegative")
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def degree(a):
    return sum((j + 1) * x for j, x in enumerate(a))


def cycle_type(a):
    """Parts of the power-sum product ``prod_j p_j^{a_j}``, largest first."""
    return tuple(sorted((j + 1 for j, x in enumerate(a) for _ in range(x)), reverse=True))


# -- evaluation ------------------------------------------------------------

def _complete_homogeneous(points, kmax):
    """``h_0..h_kmax`` of the points by adding one variable at a time."""
    h = np.zeros(kmax + 1, dtype=complex)
    h[0] = 1.0
    for z in points:
        for k in range(1, kmax + 1):
            h[k] = h[k] + z * h[k - 1]
    return h


def _jacobi_trudi(lam, points):
    L = len(lam)
    if L == 0:
        return 1.0 + 0j
    h = _complete_homogeneous(points, lam[0] + L)

    def hk(k):
        return h[k] if 0 <= k < len(h) else 0.0

    M = np.array([[hk(lam[i] - i + j) for j in range(L)] for i in range(L)], dtype=complex)
    return complex(np.linalg.det(M))


def _bialternant(lam, points):
    n = len(points)
    lam_n = list(lam) + [0] * (n - len(lam))
    z = np.asarray(points, dtype=complex)
    num = np.array([[zi ** (lam_n[j] + n - 1 - j) for j in range(n)] for zi in z])
    vand = 1.0 + 0j
    for i in range(n):
        for j in range(i + 1, n):
            vand *= z[i] - z[j]
    return complex(np.linalg.det(num) / vand)


def schur_eval(lam, points, rel_gap=1e-4):
    """``s_lambda(z_1, ..., z_n)`` by the bialternant, or by Jacobi-Trudi when
    two points are closer than ``rel_gap`` times their scale."""
    lam = partition(lam)
    z = np.asarray(points, dtype=complex).ravel()
    n = len(z)
    if len(lam) > n:
        return 0j
    if n == 0:
        return 1.0 + 0j
    scale = max(1.0, float(np.max(np.abs(z))))
    gap = min((abs(z[i] - z[j]) for i in range(n) for j in range(i + 1, n)), default=np.inf)
    val = None
    if gap > rel_gap * scale:
        val = _bialternant(lam, z)
        if not np.isfinite(val):
            val = None
    if val is None:
        val = _jacobi_trudi(lam, z)
    if not np.isfinite(val):
        raise NumericError(f"Schur evaluation failed for {lam}")
    return val


# -- Murnaghan-Nakayama ------------------------------------------------------

def _add_strips(lam, r):
    """Partitions obtained by adding a border strip of size ``r`` to ``lam``,
    with sign ``(-1)^(height)``, via beta-numbers."""
    L = len(lam) + r
    parts = list(lam) + [0] * r
    beta = [parts[i] + (L - 1 - i) for i in range(L)]
    present = set(beta)
    out = []
    for i, b in enumerate(beta):
        nb = b + r
        if nb in present:
            continue
        height = sum(1 for x in beta if b < x < nb)
        new = sorted([x for x in beta if x != b] + [nb], reverse=True)
        mu = tuple(x - (L - 1 - idx) for idx, x in enumerate(new))
        out.append((partition(mu), -1 if height % 2 else 1))
    return out


@functools.lru_cache(maxsize=None)
def _expand(lam, cycles):
    """``s_lam * prod_{r in cycles} p_r`` as ``{partition: coefficient}``."""
    if not cycles:
        return {lam: 1}
    out = {}
    for mu, sign in _add_strips(lam, cycles[0]):
        for nu, c in _expand(mu, cycles[1:]).items():
            out[nu] = out.get(nu, 0) + sign * c
    return {k: v for k, v in out.items() if v}


def power_sums_to_schur(a):
    """Schur expansion ``{lambda: chi^lambda(mu)}`` of ``prod_j p_j^{a_j}``."""
    a = profile(a)
    d = degree(a)
    if d > MAX_DEGREE:
        raise ComplexityError(f"degree {d} exceeds the guard {MAX_DEGREE}")
    return dict(_expand((), cycle_type(a)))


def closed_form_inner(a, b):
    """``delta_ab prod_j j^{a_j} a_j!``."""
    a, b = profile(a), profile(b)
    if a != b:
        return 0
    return math.prod((j + 1) ** x * math.factorial(x) for j, x in enumerate(a))


def schur_inner(a, b):
    """Inner product of two power-sum products in the Schur-orthonormal pairing.

    Computed from the two expansions and from the closed form; a mismatch
    raises ConsistencyError.
    """
    ea, eb = power_sums_to_schur(a), power_sums_to_schur(b)
    via_expansion = sum(c * eb.get(lam, 0) for lam, c in ea.items())
    closed = closed_form_inner(a, b)
    if via_expansion != closed:
        raise ConsistencyError(f"inner product {via_expansion} != closed form {closed}")
    return closed


def gaussian_limit_moment(a, b):
    """``E prod (sqrt(j) Z_j)^{a_j} conj(sqrt(j) Z_j)^{b_j}`` for i.i.d. standard complex Z_j."""
    return closed_form_inner(a, b)


# -- ensemble moments -------------------------------------------------------

def _family(ensemble):
    return getattr(ensemble, "family", ensemble)


def expected_schur_pair(lam, pi, ensemble, n):
    """``log E[s_lam conj(s_pi)]`` at size n; ``-inf`` (the log of 0) when ``lam != pi``.

    ``E|s_lam|^2 = prod_{l=1..n} M(n, 2(lam_l + n - l)) / M(n, 2(n - l))``.
    """
    lam, pi = partition(lam), partition(pi)
    if len(lam) > n:
        raise InvalidArgument(f"partition {lam} has more than n = {n} parts")
    if lam != pi:
        return -math.inf
    fam = _family(ensemble)
    return sum(radial_moment(fam, n, 2 * (part + n - ell)) - radial_moment(fam, n, 2 * (n - ell))
               for ell, part in enumerate(lam, 1))


def expected_schur_pair_exact(lam, pi, ensemble, n):
    """Exact rational ``E[s_lam conj(s_pi)]``."""
    lam, pi = partition(lam), partition(pi)
    if len(lam) > n:
        raise InvalidArgument(f"partition {lam} has more than n = {n} parts")
    if lam != pi:
        return Fraction(0)
    fam = _family(ensemble)
    out = Fraction(1)
    for ell, part in enumerate(lam, 1):
        out *= radial_moment_exact(fam, n, 2 * (part + n - ell)) / \
            radial_moment_exact(fam, n, 2 * (n - ell))
    return out


def exact_joint_moment(a, b, ensemble, n):
    """Exact ``E_n[prod_j p_j^{a_j} conj(p_j)^{b_j}]`` via the Schur expansions.

    Partitions longer than n contribute nothing (``s_lam`` vanishes in n variables).
    """
    ea, eb = power_sums_to_schur(a), power_sums_to_schur(b)
    total = Fraction(0)
    for lam, c in ea.items():
        d = eb.get(lam, 0)
        if d and len(lam) <= n:
            total += c * d * expected_schur_pair_exact(lam, lam, ensemble, n)
    return total


def moment_record(a, b, ensemble, n):
    val = exact_joint_moment(a, b, ensemble, n)
    return {"schema": 1, "profile": [list(profile(a)), list(profile(b))],
            "ensemble": _family(ensemble), "n": n, "exact": str(val), "float": float(val),
            "gaussian_limit": gaussian_limit_moment(a, b)}


def profiles_of_degree(d):
    """All exponent profiles ``a`` with ``sum_j j a_j = d``."""
    out = []
    for lam in partitions(d):
        a = [0] * (lam[0] if lam else 0)
        for part in lam:
            a[part - 1] += 1
        out.append(tuple(a))
    return out
