"""Limiting variances and covariances of linear statistics.

For real ``f`` the limit splits into a bulk Dirichlet part on the unit disk
and a boundary part from the Fourier coefficients of ``f`` on the circle:

    Var = (1/4 pi) int_U |grad f|^2  +  (1/2) sum_k |k| |fhat(k)|^2
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapabilityError, InvalidArgument, TruncationFailure

FFT_SIZE = 4096
K_MAX = 1024
TAIL_TOL = 1e-10
QUAD_RTOL = 1e-8


@dataclass
class VariancePrediction:
    h1_part: float
    h_half_part: float
    total: float

    def to_dict(self):
        return {"h1_part": self.h1_part, "h_half_part": self.h_half_part, "total": self.total}


def _require_derivatives(f):
    if not f.has_derivatives:
        raise CapabilityError(f"{f.describe()} lacks Wirtinger derivative callbacks")


def _outer_radius(*fs):
    radii = [f.support_radius for f in fs if f.support_radius is not None]
    return min([1.0] + radii)


def disk_integral(g, radius=1.0, rtol=QUAD_RTOL, start=16, max_nodes=4096):
    """``int_{|z|<radius} g(z) d^2 z`` by tensor Gauss-Legendre in (r, theta).

    The order doubles until two successive values agree to ``rtol``.
    """
    prev = None
    nodes = start
    while nodes <= max_nodes:
        x, w = np.polynomial.legendre.leggauss(nodes)
        r = 0.5 * radius * (x + 1.0)
        wr = 0.5 * radius * w * r
        th = np.pi * (x + 1.0)
        wt = np.pi * w
        z = r[:, None] * np.exp(1j * th[None, :])
        val = np.sum(wr[:, None] * wt[None, :] * g(z))
        if prev is not None and abs(val - prev) <= rtol * max(abs(val), 1e-300) + 1e-15:
            return val
        prev = val
        nodes *= 2
    raise TruncationFailure(f"disk quadrature did not settle to {rtol} with {max_nodes} nodes")


def h1_disk_seminorm_sq(f, rtol=QUAD_RTOL):
    """``int_U |grad f|^2 d^2 z`` with ``|grad f|^2 = 2(|df|^2 + |dbar f|^2)``."""
    _require_derivatives(f)
    if f.is_constant:
        return 0.0

    def g(z):
        return 2.0 * (np.abs(f.d(z)) ** 2 + np.abs(f.dbar(z)) ** 2)

    return float(np.real(disk_integral(g, _outer_radius(f), rtol)))


def boundary_fourier(f, size=FFT_SIZE):
    """Coefficients ``fhat(k)`` for ``k = -size/2 .. size/2 - 1`` (as an fftshifted array)."""
    theta = 2 * np.pi * np.arange(size) / size
    vals = np.asarray(f.boundary(theta), dtype=complex)
    coef = np.fft.fftshift(np.fft.fft(vals) / size)
    k = np.arange(-size // 2, size // 2)
    return k, coef


def _truncated_fourier(f, K_max, size, tol):
    if K_max >= size // 2:
        raise InvalidArgument("K_max must be below half the transform size")
    k, c = boundary_fourier(f, size)
    scale = max(1.0, float(np.max(np.abs(c))))
    tail = np.abs(c[np.abs(k) >= K_max])
    if tail.size and tail.max() > tol * scale:
        raise TruncationFailure(
            f"Fourier tail {tail.max():.3g} above {tol:g} at |k| >= {K_max}")
    keep = np.abs(k) <= K_max
    return k[keep], c[keep]


def h_half_norm_sq(f, K_max=K_MAX, size=FFT_SIZE, tol=TAIL_TOL):
    """``sum_k |k| |fhat(k)|^2`` over ``|k| <= K_max``."""
    if f.support_radius is not None and f.support_radius < 1.0:
        return 0.0
    k, c = _truncated_fourier(f, K_max, size, tol)
    return float(np.sum(np.abs(k) * np.abs(c) ** 2))


def predict_variance(f):
    if not f.real_valued:
        raise InvalidArgument("predict_variance needs a real-valued test function")
    h1 = h1_disk_seminorm_sq(f) / (4 * np.pi)
    hh = 0.5 * h_half_norm_sq(f)
    return VariancePrediction(h1, hh, h1 + hh)


def predict_covariance(f, g, K_max=K_MAX, size=FFT_SIZE, tol=TAIL_TOL):
    """``(1/pi) int_U dbar f conj(dbar g) + sum_{k>0} k fhat(k) conj(ghat(k))``."""
    _require_derivatives(f)
    _require_derivatives(g)
    if f.is_constant or g.is_constant:
        return 0j
    bulk = disk_integral(lambda z: f.dbar(z) * np.conj(g.dbar(z)), _outer_radius(f, g)) / np.pi
    boundary = 0j
    if _outer_radius(f, g) >= 1.0:
        k, cf = _truncated_fourier(f, K_max, size, tol)
        _, cg = _truncated_fourier(g, K_max, size, tol)
        pos = k > 0
        boundary = np.sum(k[pos] * cf[pos] * np.conj(cg[pos]))
    return complex(bulk + boundary)


def _check_exponents(*e):
    for v in e:
        if int(v) != v or v < 0:
            raise InvalidArgument(f"exponents must be nonnegative integers, got {e}")


def monomial_cov_limit(a1, b1, a2, b2):
    """Limit of the joint cumulant of ``X(z^a1 zbar^b1)`` and ``X(z^a2 zbar^b2)``."""
    _check_exponents(a1, b1, a2, b2)
    s = a1 + a2
    if s != b1 + b2 or s == 0:
        return Fraction(0)
    return max(0, b1 - a1) + Fraction(a1 * b2, s)


def covariance_bulk_term(a1, b1, a2, b2):
    """Bulk term ``(1/pi) int_U dbar f conj(dbar g)`` for ``f = z^a1 zbar^b1``,
    ``g = z^b2 zbar^a2``; equals ``a2 b1 / s``."""
    _check_exponents(a1, b1, a2, b2)
    s = a1 + a2
    if s != b1 + b2 or s == 0:
        return Fraction(0)
    return Fraction(a2 * b1, s)


def covariance_boundary_term(a1, b1, a2, b2):
    """Boundary term ``sum_{k>0} k fhat(k) conj(ghat(k))`` for the same pair;
    equals ``max(0, a1 - b1)``."""
    _check_exponents(a1, b1, a2, b2)
    s = a1 + a2
    if s != b1 + b2 or s == 0:
        return Fraction(0)
    return Fraction(max(0, a1 - b1))


def analytic_variance(f):
    """``(1/pi) ||f'||^2_{L^2(U)} = sum_j j |c_j|^2`` for ``f = sum_j c_j z^j``."""
    if f.kind != "poly" or not f.is_analytic:
        raise InvalidArgument("analytic_variance needs a polynomial in z alone")
    return float(sum(a * abs(c) ** 2 for (a, _), c in f.terms.items()))


def gff_projection_norm_sq(f):
    """Squared H^1(C) norm of the harmonic-outside-the-disk extension, ``4 pi Var``."""
    return 4 * np.pi * predict_variance(f).total


def _check_harmonic(g):
    if g.kind != "poly" or not g.real_valued or any(a and b for a, b in g.terms):
        raise InvalidArgument("expected a real harmonic polynomial (span of Re z^k, Im z^k)")


def harmonic_h1_vs_hhalf_check(g1, g2):
    """``(<g1, g2>_{H^1(U)}, <g1, g2>_{H^1/2})`` for real harmonic polynomials."""
    _check_harmonic(g1)
    _check_harmonic(g2)
    h1 = disk_integral(lambda z: 4 * np.real(g1.dbar(z) * np.conj(g2.dbar(z))))
    k, c1 = _truncated_fourier(g1, K_MAX, FFT_SIZE, TAIL_TOL)
    _, c2 = _truncated_fourier(g2, K_MAX, FFT_SIZE, TAIL_TOL)
    hh = np.sum(np.abs(k) * c1 * np.conj(c2))
    return float(np.real(h1)), float(np.real(hh))
