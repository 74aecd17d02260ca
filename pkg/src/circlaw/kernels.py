"""Reference measures, radial moments and projection kernels of the
rotation-invariant ensembles.

Every ensemble is a pair (mu_n, n). For the determinantal families the
kernel is ``K_n(z, w) = sum_{l<n} c_l (z conj(w))^l`` with
``1 / c_l = M(n, 2l) = int |z|^{2l} dmu_n``.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from .errors import InvalidArgument, InvalidDimension, UnsupportedEnsemble

FAMILIES = ("ginibre", "bergman", "unitary", "iid_disk")
DETERMINANTAL = ("ginibre", "bergman", "unitary")


@dataclass(frozen=True)
class EnsembleSpec:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedEnsemble(f"unknown ensemble family {self.family!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidDimension(f"n must be a positive integer, got {self.n!r}")

    def to_dict(self):
        return {"family": self.family, "n": int(self.n)}


def _family(ensemble):
    return ensemble.family if isinstance(ensemble, EnsembleSpec) else ensemble


def _check_determinantal(family):
    if family not in DETERMINANTAL:
        raise UnsupportedEnsemble(f"{family!r} has no projection kernel")


def _half_order(k):
    if int(k) != k or k < 0 or k % 2:
        raise InvalidArgument(f"moment order must be a nonnegative even integer, got {k!r}")
    return int(k) // 2


def radial_moment(family, n, k):
    """``log M(n, k)`` for even ``k``."""
    family = _family(family)
    _check_determinantal(family)
    ell = _half_order(k)
    if family == "ginibre":
        return math.lgamma(ell + 1) - ell * math.log(n)
    if family == "bergman":
        return 0.0 - math.log(ell + 1)
    return 0.0


def radial_moment_exact(family, n, k):
    """``M(n, k)`` as an exact rational."""
    family = _family(family)
    _check_determinantal(family)
    ell = _half_order(k)
    if family == "ginibre":
        return Fraction(math.factorial(ell), n ** ell)
    if family == "bergman":
        return Fraction(1, ell + 1)
    return Fraction(1)


@dataclass(frozen=True)
class RadialMomentTable:
    family: str
    n: int
    log_values: tuple  # log M(n, 2l), l = 0..L

    @classmethod
    def build(cls, family, n, L):
        family = _family(family)
        return cls(family, n, tuple(radial_moment(family, n, 2 * ell) for ell in range(L + 1)))

    def to_json(self):
        return json.dumps({"schema": 1, "family": self.family, "n": self.n,
                           "log_M_even": list(self.log_values)})


class ProjectionKernel:
    """Rank-n projection kernel of a determinantal family."""

    def __init__(self, ensemble):
        self.ensemble = ensemble
        family, n = ensemble.family, ensemble.n
        _check_determinantal(family)
        self.family = family
        self.n = n
        self.log_c = -np.array([radial_moment(family, n, 2 * ell) for ell in range(n)])

    def log_features(self, z):
        """``(log|phi_l(z)|, l arg z)`` for ``phi_l(z) = sqrt(c_l) z^l``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        ell = np.arange(self.n)
        logabs = 0.5 * self.log_c[None, :] + special.xlogy(ell[None, :], np.abs(z)[:, None])
        return logabs, ell[None, :] * np.angle(z)[:, None]

    def unit_features(self, z):
        """Feature vectors normalized to unit length, shape ``(len(z), n)``."""
        logabs, phase = self.log_features(z)
        logabs = logabs - logabs.max(axis=1, keepdims=True)
        v = np.exp(logabs + 1j * phase)
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    def log_diag(self, z):
        """``log K_n(z, conj z)``."""
        logabs, _ = self.log_features(z)
        return special.logsumexp(2 * logabs, axis=1)

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        ell = np.arange(self.n)
        return np.sum(np.exp(self.log_c) * (z[..., None] * np.conj(w)[..., None]) ** ell, axis=-1)


def _reference_density(family, n, r):
    r = np.asarray(r, dtype=float)
    if family == "ginibre":
        return n / np.pi * np.exp(-n * r ** 2)
    if family in ("bergman", "iid_disk"):
        return np.where(r < 1.0, 1.0 / np.pi, 0.0)
    raise UnsupportedEnsemble(f"{family!r} has no planar density")


def kernel_diag_density(family, n, z):
    """One-point intensity per unit area, normalized to integrate to one."""
    family = _family(family)
    z = np.asarray(z, dtype=complex)
    if np.any(np.isnan(z)):
        raise InvalidArgument("NaN in evaluation points")
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if family == "iid_disk":
        out = np.where(np.abs(z) < 1.0, 1.0 / np.pi, 0.0)
    elif family == "ginibre":
        t = n * np.abs(z) ** 2
        ell = np.arange(n)
        terms = special.xlogy(ell[None, :], t[:, None]) - special.gammaln(ell + 1)[None, :]
        out = np.exp(special.logsumexp(terms, axis=1) - t) / np.pi
    elif family == "bergman":
        x = np.abs(z) ** 2
        ell = np.arange(n)
        terms = np.log(ell + 1.0)[None, :] + special.xlogy(ell[None, :], x[:, None])
        out = np.where(x < 1.0, np.exp(special.logsumexp(terms, axis=1)) / (n * np.pi), 0.0)
    else:
        raise UnsupportedEnsemble(f"{family!r} has no planar density")
    return float(out[0]) if scalar else out


def radial_support(family, n):
    """Outer radius of the quadrature interval for the mean density."""
    if family == "ginibre":
        return 1.0 + 5.0 / math.sqrt(n)
    return 1.0


def density_tail(family, n, R):
    """Mass of the mean density outside radius ``R`` (exact for Ginibre)."""
    if family == "ginibre":
        return float(np.mean(special.gammaincc(np.arange(1, n + 1), n * R * R)))
    return 0.0 if R >= 1.0 else float("nan")


def radial_integral(g, family, n, nodes=None):
    """``int_C g(|z|) rho(z) d^2 z`` for the mean density, by radial Gauss-Legendre.

    Returns ``(value, tail_mass)``; ``tail_mass`` bounds the neglected part
    when ``|g| <= 1`` outside the quadrature radius.
    """
    family = _family(family)
    R = radial_support(family, n)
    if nodes is None:
        nodes = max(256, n + 8)
    x, wts = np.polynomial.legendre.leggauss(nodes)
    r = 0.5 * R * (x + 1.0)
    wts = 0.5 * R * wts
    dens = kernel_diag_density(family, n, r.astype(complex))
    val = float(np.sum(wts * 2 * np.pi * r * dens * g(r)))
    return val, density_tail(family, n, R)


def density_mass(family, n, nodes=None):
    return radial_integral(lambda r: np.ones_like(r), family, n, nodes)


def check_moment_condition(family, m, n_list):
    """Exact ratios ``M(n, 2n + 2m) / M(n, 2n)`` for each ``n``."""
    family = _family(family)
    out = []
    for n in n_list:
        if 2 * n + 2 * m < 0:
            raise InvalidArgument(f"2n + 2m < 0 for n={n}, m={m}")
        out.append(radial_moment_exact(family, n, 2 * n + 2 * m)
                   / radial_moment_exact(family, n, 2 * n))
    return out
