"""Surjection functionals

    Lambda_k(phi, alpha) = sum_m (-1)^{m-1}/m  sum_{sigma: [k] onto [m]} phi_m(sigma alpha)

for the five families of ``phi`` whose values have closed forms, with exact
brute-force evaluation and a vectorized batch evaluator for sweeps.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import combinatorics as cb
from .errors import ComplexityError, HypothesisViolation, InvalidArgument

FAMILIES = ("linear", "quadratic", "combined", "alphabeta", "etamax")


@dataclass
class LemmaFunctional:
    """A family ``phi = (phi_1, ..., phi_k)``.

    combined:  ``phi_m(y) = const[m] + lin[m] . y + y^T quad[m] y``
    alphabeta: ``phi_m(y, w) = y^T bil[m] w`` (pairs ``(alpha_i, beta_i)``)
    custom:    ``phi_m(y)`` given by ``fn(m, y)``
    """

    family: str
    const: dict = field(default_factory=dict)
    lin: dict = field(default_factory=dict)
    quad: dict = field(default_factory=dict)
    bil: dict = field(default_factory=dict)
    fn: Optional[Callable] = None

    def __post_init__(self):
        if self.family not in FAMILIES + ("custom",):
            raise InvalidArgument(f"unknown lemma family {self.family!r}")
        if self.family == "custom" and self.fn is None:
            raise InvalidArgument("custom functional needs fn(m, y)")

    @property
    def paired(self):
        return self.family == "alphabeta"

    def _need(self, table, m):
        if m not in table:
            raise InvalidArgument(f"{self.family} functional has no coefficients for m = {m}")
        return table[m]

    def value(self, m, y):
        """Exact ``phi_m(y)``; for alphabeta ``y`` is a pair of vectors."""
        fam = self.family
        if fam == "linear":
            return sum(y)
        if fam == "quadratic":
            return sum(v * v for v in y)
        if fam == "combined":
            L, Q = self._need(self.lin, m), self._need(self.quad, m)
            out = self._need(self.const, m)
            out += sum(L[i] * y[i] for i in range(m))
            out += sum(Q[i][j] * y[i] * y[j] for i in range(m) for j in range(m))
            return out
        if fam == "alphabeta":
            P = self._need(self.bil, m)
            a, b = y
            return sum(P[i][j] * a[i] * b[j] for i in range(m) for j in range(m))
        if fam == "etamax":
            return max(itertools.accumulate(y))
        return self.fn(m, y)

    def batch(self, m, Y):
        """Vectorized ``phi_m`` over leading axes of an integer array (last axis = m,
        or ``(..., m, 2)`` for alphabeta)."""
        fam = self.family
        if fam == "linear":
            return Y.sum(-1)
        if fam == "quadratic":
            return (Y * Y).sum(-1)
        if fam == "combined":
            L = np.asarray(self._need(self.lin, m), dtype=np.int64)
            Q = np.asarray(self._need(self.quad, m), dtype=np.int64)
            return (int(self._need(self.const, m)) + Y @ L
                    + np.einsum("...i,ij,...j->...", Y, Q, Y))
        if fam == "alphabeta":
            P = np.asarray(self._need(self.bil, m), dtype=np.int64)
            return np.einsum("...i,ij,...j->...", Y[..., 0], P, Y[..., 1])
        if fam == "etamax":
            return np.cumsum(Y, axis=-1).max(-1)
        raise InvalidArgument("custom functionals have no batch evaluator")

    def integer_coefficients(self):
        tables = [self.const, self.lin, self.quad, self.bil]
        vals = []
        for t in tables:
            for v in t.values():
                vals.extend(np.ravel(np.asarray(v, dtype=object)).tolist())
        return all(isinstance(v, (int, np.integer)) for v in vals)


def linear():
    return LemmaFunctional("linear")


def quadratic():
    return LemmaFunctional("quadratic")


def etamax():
    return LemmaFunctional("etamax")


def _split(total, parts, rng):
    """``parts`` integers summing to ``total``, deterministic but uneven."""
    if parts == 0:
        return []
    v = [int(x) for x in rng.integers(-3, 4, parts - 1)]
    return v + [total - sum(v)]


def combined(b0, b1, b2, b11, k, seed=0):
    """A non-symmetric quadratic family meeting the proportionality hypotheses:
    coefficient sums ``b0``, ``m b1``, ``m b2`` and ``m (m-1) b11``."""
    rng = np.random.default_rng(seed)
    const, lin, quad = {}, {}, {}
    for m in range(1, k + 1):
        const[m] = b0
        lin[m] = _split(m * b1, m, rng)
        diag = _split(m * b2, m, rng)
        off = _split(m * (m - 1) * b11, m * (m - 1), rng)
        Q = [[0] * m for _ in range(m)]
        it = iter(off)
        for i in range(m):
            for j in range(m):
                Q[i][j] = diag[i] if i == j else next(it)
        quad[m] = Q
    return LemmaFunctional("combined", const=const, lin=lin, quad=quad)


def alphabeta(bp, bm, k, seed=0):
    """Bilinear family with diagonal sum ``m b+`` and off-diagonal sum ``m (m-1) b-``."""
    rng = np.random.default_rng(seed)
    bil = {}
    for m in range(1, k + 1):
        diag = _split(m * bp, m, rng)
        off = iter(_split(m * (m - 1) * bm, m * (m - 1), rng))
        bil[m] = [[diag[i] if i == j else next(off) for j in range(m)] for i in range(m)]
    return LemmaFunctional("alphabeta", bil=bil)


# -- evaluation ------------------------------------------------------------

def _check_k(k):
    if k < 1:
        raise InvalidArgument("k must be at least 1")
    if k > cb.MAX_K:
        raise ComplexityError(f"k = {k} exceeds the surjection guard {cb.MAX_K}")


def _normalize(phi, alpha, k):
    if phi.paired:
        a, b = (list(v) for v in alpha)
        if len(a) != len(b):
            raise InvalidArgument("alpha and beta must have equal length")
        kk = len(a)
    else:
        a, b = list(alpha), None
        kk = len(a)
    if k is not None and k != kk:
        raise InvalidArgument(f"k = {k} but {kk} entries given")
    _check_k(kk)
    return a, b, kk


def lambda_bruteforce(phi, alpha, k=None):
    """Exact ``Lambda_k(phi, alpha)`` by enumerating every surjection."""
    a, b, k = _normalize(phi, alpha, k)
    total = Fraction(0)
    for m in range(1, k + 1):
        acc = 0
        for sigma in cb.surjections(k, m):
            y = cb.push_forward(sigma, a, m)
            if b is not None:
                y = (y, cb.push_forward(sigma, b, m))
            acc += phi.value(m, y)
        total += Fraction((-1) ** (m - 1), m) * acc
    return total


def lambda_bruteforce_batch(phi, alphas, chunk=2048):
    """``Lambda_k`` for many integer inputs at once.

    ``alphas`` has shape ``(B, k)`` (or ``(B, k, 2)`` for alphabeta). Integer
    arithmetic throughout: the ``1/m`` weights are cleared with ``lcm(1..k)``.
    """
    X = np.asarray(alphas, dtype=np.int64)
    k = X.shape[1]
    _check_k(k)
    if not phi.integer_coefficients():
        raise InvalidArgument("batch evaluation needs integer coefficients")
    D = math.lcm(*range(1, k + 1))
    out = np.zeros(len(X), dtype=np.int64)
    for start in range(0, len(X), chunk):
        Xc = X[start:start + chunk]
        acc = np.zeros(len(Xc), dtype=np.int64)
        for m in range(1, k + 1):
            A = cb.surjection_matrices(k, m)
            if phi.paired:
                Y = np.einsum("bkc,skm->bsmc", Xc, A)
            else:
                Y = np.einsum("bk,skm->bsm", Xc, A)
            acc += (-1) ** (m - 1) * (D // m) * phi.batch(m, Y).sum(axis=1)
        out[start:start + chunk] = acc
    return [Fraction(int(v), D) for v in out]


# -- closed forms ----------------------------------------------------------

def _combined_params(phi, k):
    b0 = phi._need(phi.const, 1)
    b1 = sum(phi._need(phi.lin, 1))
    b2 = phi._need(phi.quad, 1)[0][0]
    b11 = Fraction(0)
    if k >= 2:
        Q2 = phi._need(phi.quad, 2)
        b11 = Fraction(Q2[0][1] + Q2[1][0], 2)
    for m in range(1, k + 1):
        Q = phi._need(phi.quad, m)
        diag = sum(Q[i][i] for i in range(m))
        off = sum(Q[i][j] for i in range(m) for j in range(m) if i != j)
        if phi._need(phi.const, m) != b0:
            raise HypothesisViolation(f"constant term at m={m} differs from m=1")
        if sum(phi._need(phi.lin, m)) != m * b1:
            raise HypothesisViolation(f"linear coefficient sum at m={m} is not m*b1")
        if diag != m * b2:
            raise HypothesisViolation(f"square coefficient sum at m={m} is not m*b2")
        if off != m * (m - 1) * b11:
            raise HypothesisViolation(f"cross coefficient sum at m={m} is not m(m-1)*b11")
    return b0, b1, b2, b11


def _alphabeta_params(phi, k):
    bp = phi._need(phi.bil, 1)[0][0]
    bm = Fraction(0)
    if k >= 2:
        P2 = phi._need(phi.bil, 2)
        bm = Fraction(P2[0][1] + P2[1][0], 2)
    for m in range(1, k + 1):
        P = phi._need(phi.bil, m)
        if sum(P[i][i] for i in range(m)) != m * bp:
            raise HypothesisViolation(f"diagonal sum at m={m} is not m*b+")
        if sum(P[i][j] for i in range(m) for j in range(m) if i != j) != m * (m - 1) * bm:
            raise HypothesisViolation(f"off-diagonal sum at m={m} is not m(m-1)*b-")
    return bp, bm


def lambda_closed_form(phi, alpha, k=None):
    """Closed-form value of ``Lambda_k``; raises HypothesisViolation outside the
    coefficient conditions under which it holds."""
    a, b, k = _normalize(phi, alpha, k)
    fam = phi.family
    if fam == "linear":
        return Fraction(a[0]) if k == 1 else Fraction(0)
    if fam == "quadratic":
        if k == 1:
            return Fraction(a[0] ** 2)
        return Fraction(2 * a[0] * a[1]) if k == 2 else Fraction(0)
    if fam == "combined":
        b0, b1, b2, b11 = _combined_params(phi, k)
        if k == 1:
            return Fraction(b0 + b1 * a[0] + b2 * a[0] ** 2)
        return Fraction(2 * (b2 - b11) * a[0] * a[1]) if k == 2 else Fraction(0)
    if fam == "alphabeta":
        bp, bm = _alphabeta_params(phi, k)
        if k == 1:
            return Fraction(bp * a[0] * b[0])
        return Fraction((bp - bm) * (a[0] * b[1] + a[1] * b[0])) if k == 2 else Fraction(0)
    if fam == "etamax":
        if sum(a) != 0:
            raise HypothesisViolation("prefix-maximum closed form needs entries summing to 0")
        return Fraction(-abs(a[0]), 2) if k == 2 else Fraction(0)
    raise HypothesisViolation("custom functionals have no closed form")


# -- sweeps ----------------------------------------------------------------

def _grid(k, lo, hi, width):
    vals = np.arange(lo, hi + 1, dtype=np.int64)
    return np.array(list(itertools.product(vals, repeat=k * width)), dtype=np.int64)


def default_functionals(k):
    """The functionals exercised by :func:`sweep` at size ``k``."""
    return {
        "linear": [linear()],
        "quadratic": [quadratic()],
        "combined": [combined(2, -1, 3, 1, k, seed=1), combined(-1, 2, 1, -2, k, seed=2)],
        "alphabeta": [alphabeta(2, 1, k, seed=3), alphabeta(-1, 3, k, seed=4)],
        "etamax": [etamax()],
    }


@dataclass
class SweepResult:
    lemma: str
    k: int
    cases: int
    mismatches: int
    exhaustive: bool
    first_mismatch: Optional[tuple] = None

    @property
    def passed(self):
        return self.mismatches == 0

    def to_dict(self):
        return {"lemma": self.lemma, "k": self.k, "cases": self.cases,
                "mismatches": self.mismatches, "exhaustive": self.exhaustive,
                "status": "pass" if self.passed else "fail",
                "first_mismatch": None if self.first_mismatch is None
                else [str(x) for x in self.first_mismatch]}


def sweep(max_k=5, lo=-3, hi=3, exhaustive_limit=200_000, samples=20_000, seed=0,
          lemmas=FAMILIES):
    """Compare brute force with closed forms on every integer input in
    ``[lo, hi]`` (random sample when the grid exceeds ``exhaustive_limit``)."""
    rng = np.random.default_rng(seed)
    results = []
    for k in range(1, max_k + 1):
        for name, phis in default_functionals(k).items():
            if name not in lemmas:
                continue
            width = 2 if name == "alphabeta" else 1
            size = (hi - lo + 1) ** (k * width)
            if size <= exhaustive_limit:
                X = _grid(k, lo, hi, width)
                exhaustive = True
            else:
                X = rng.integers(lo, hi + 1, (samples, k * width))
                exhaustive = False
            if name == "etamax":
                X = X[X.sum(axis=1) == 0]
            if width == 2:
                X = np.stack([X[:, :k], X[:, k:]], axis=-1)
            cases = mismatches = 0
            first = None
            for phi in phis:
                brute = lambda_bruteforce_batch(phi, X)
                for x, v in zip(X, brute):
                    arg = (x[:, 0].tolist(), x[:, 1].tolist()) if width == 2 else x.tolist()
                    closed = lambda_closed_form(phi, arg)
                    cases += 1
                    if closed != v:
                        mismatches += 1
                        if first is None:
                            first = (arg, v, closed)
            results.append(SweepResult(name, k, cases, mismatches, exhaustive, first))
    return results


# -- coefficient table of the per-cycle constant -------------------------------

def polynomial_part(alpha, beta, s):
    """``1/2 - 1 + (1/s) sum_j [eta_j alpha_j + alpha_j (alpha_j + 1)/2]``: the per-cycle
    O(1) term with the prefix maximum removed (``eta`` from ``gamma = beta - alpha``)."""
    acc, eta = Fraction(0), 0
    for a, b in zip(alpha, beta):
        eta += b - a
        acc += eta * a + Fraction(a * (a + 1), 2)
    return Fraction(-1, 2) + acc / s


def coefficient_table(m, s):
    """Sums of the coefficients of ``1, alpha_i, alpha_i^2, alpha_i alpha_j (i != j),
    alpha_i beta_i, alpha_i beta_j (i != j)`` in :func:`polynomial_part`,
    extracted by exact finite differences."""
    z = [0] * m

    def P(a, b):
        return polynomial_part(a, b, s)

    def e(i, c=1):
        v = [0] * m
        v[i] = c
        return v

    p0 = P(z, z)
    table = {"1": p0, "alpha_i": Fraction(0), "alpha_i^2": Fraction(0),
             "alpha_i alpha_j": Fraction(0), "alpha_i beta_i": Fraction(0),
             "alpha_i beta_j": Fraction(0)}
    for i in range(m):
        sq = (P(e(i, 2), z) - 2 * P(e(i), z) + p0) / 2
        table["alpha_i^2"] += sq
        table["alpha_i"] += P(e(i), z) - p0 - sq
        for j in range(m):
            mixed_ab = P(e(i), e(j)) - P(e(i), z) - P(z, e(j)) + p0
            if i == j:
                table["alpha_i beta_i"] += mixed_ab
            else:
                table["alpha_i beta_j"] += mixed_ab
                ai_aj = [0] * m
                ai_aj[i] += 1
                ai_aj[j] += 1
                table["alpha_i alpha_j"] += P(ai_aj, z) - P(e(i), z) - P(e(j), z) + p0
    table["alpha_i alpha_j"] /= 2  # each unordered pair visited twice
    return table


def expected_coefficient_table(m, s):
    s = Fraction(s)
    return {"1": Fraction(-1, 2), "alpha_i": m / (2 * s), "alpha_i^2": -m / (2 * s),
            "alpha_i alpha_j": -m * (m - 1) / (2 * s), "alpha_i beta_i": m / s,
            "alpha_i beta_j": m * (m - 1) / (2 * s)}
