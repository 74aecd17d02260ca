# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: Householder Hessenberg reduction, shifted complex QR
on a Hessenberg matrix, and logarithmic-potential sums over grids.

Every routine has a pure-Python twin in ``_pycore`` with the same signature.
"""

from libc.math cimport sqrt, log, hypot

import numpy as np


cdef inline double cabs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double cabs1(double complex z) noexcept nogil:
    return hypot(z.real, z.imag)


cdef inline double complex cconj(double complex z) noexcept nogil:
    return z.real - 1j * z.imag


def hessenberg_inplace(double complex[:, ::1] A):
    """Reduce ``A`` to upper Hessenberg form in place by Householder reflections."""
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double tail, xnorm, anorm, tau
    cdef double complex alpha, phase, beta, s
    cdef double complex[::1] v = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] w = np.zeros(n, dtype=np.complex128)
    with nogil:
        for k in range(n - 2):
            tail = 0.0
            for i in range(k + 2, n):
                tail = tail + cabs2(A[i, k])
            if tail == 0.0:
                continue
            alpha = A[k + 1, k]
            anorm = cabs1(alpha)
            xnorm = sqrt(anorm * anorm + tail)
            if anorm > 0.0:
                phase = alpha / anorm
            else:
                phase = 1.0
            beta = -phase * xnorm
            v[k + 1] = alpha - beta
            for i in range(k + 2, n):
                v[i] = A[i, k]
            tau = 2.0 / (cabs2(v[k + 1]) + tail)
            # left update, row-major: w_j = sum_i conj(v_i) A[i, j]
            for j in range(k, n):
                w[j] = 0.0
            for i in range(k + 1, n):
                s = cconj(v[i])
                for j in range(k, n):
                    w[j] = w[j] + s * A[i, j]
            for i in range(k + 1, n):
                s = tau * v[i]
                for j in range(k, n):
                    A[i, j] = A[i, j] - s * w[j]
            for i in range(n):
                s = 0.0
                for j in range(k + 1, n):
                    s = s + A[i, j] * v[j]
                s = s * tau
                for j in range(k + 1, n):
                    A[i, j] = A[i, j] - s * cconj(v[j])
            A[k + 1, k] = beta
            for i in range(k + 2, n):
                A[i, k] = 0.0
    return np.asarray(A)


cdef inline double complex csqrt(double complex z) noexcept nogil:
    cdef double x = z.real
    cdef double y = z.imag
    cdef double m = hypot(x, y)
    cdef double re, im
    if m == 0.0:
        return 0.0
    if x >= 0.0:
        re = sqrt(0.5 * (m + x))
        im = y / (2.0 * re)
    else:
        im = sqrt(0.5 * (m - x))
        if y < 0.0:
            im = -im
        re = y / (2.0 * im)
    return re + 1j * im


cdef inline double complex wilkinson(double complex a, double complex b,
                                     double complex c, double complex d) noexcept nogil:
    # eigenvalue of [[a, b], [c, d]] closest to d
    cdef double complex half = 0.5 * (a - d)
    cdef double complex root = csqrt(half * half + b * c)
    if (half.real * root.real + half.imag * root.imag) < 0.0:
        root = -root
    if cabs2(half + root) == 0.0:
        return d
    # d - bc / (half + root) avoids cancellation
    return d - b * c / (half + root)


def hessenberg_qr(double complex[:, ::1] H, double tol, long max_sweeps,
                  double complex[::1] out):
    """Single-shift complex QR with deflation on an upper Hessenberg ``H``.

    ``H`` is overwritten. Eigenvalues are written to ``out`` from the bottom
    up; returns ``(sweeps, hi)`` where entries ``out[hi+1:]`` are final. The
    iteration converged iff ``hi == -1``.
    """
    cdef Py_ssize_t n = H.shape[0]
    cdef Py_ssize_t hi = n - 1
    cdef Py_ssize_t lo, k, j, i, jmax
    cdef long sweeps = 0
    cdef long its = 0
    cdef double scale, hmax, r, ax
    cdef double complex sigma, x, y, a, b, c2, d, half, disc, l1, l2
    cdef double[::1] cs = np.zeros(max(n, 1), dtype=np.float64)
    cdef double complex[::1] sn = np.zeros(max(n, 1), dtype=np.complex128)

    hmax = 0.0
    for i in range(n):
        for j in range(n):
            ax = cabs1(H[i, j])
            if ax > hmax:
                hmax = ax
    with nogil:
        while hi >= 0:
            if hi == 0:
                out[0] = H[0, 0]
                hi = -1
                break
            # locate the bottom of the unreduced block
            lo = 0
            k = hi
            while k > 0:
                scale = cabs1(H[k - 1, k - 1]) + cabs1(H[k, k])
                if scale == 0.0:
                    scale = hmax
                if cabs1(H[k, k - 1]) <= tol * scale:
                    H[k, k - 1] = 0.0
                    lo = k
                    break
                k = k - 1
            if lo == hi:
                out[hi] = H[hi, hi]
                hi = hi - 1
                its = 0
                continue
            if lo == hi - 1:
                a = H[hi - 1, hi - 1]
                b = H[hi - 1, hi]
                c2 = H[hi, hi - 1]
                d = H[hi, hi]
                half = 0.5 * (a - d)
                disc = csqrt(half * half + b * c2)
                l1 = 0.5 * (a + d) + disc
                l2 = 0.5 * (a + d) - disc
                out[hi - 1] = l1
                out[hi] = l2
                hi = hi - 2
                its = 0
                continue
            if sweeps >= max_sweeps:
                break
            sweeps = sweeps + 1
            its = its + 1
            if its % 11 == 10:
                sigma = H[hi, hi] + 1.5 * cabs1(H[hi, hi - 1]) + 0.5j * cabs1(H[hi - 1, hi - 2])
            else:
                sigma = wilkinson(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
            for k in range(lo, hi + 1):
                H[k, k] = H[k, k] - sigma
            # H - sigma I = Q R via Givens rotations
            for k in range(lo, hi):
                x = H[k, k]
                y = H[k + 1, k]
                ax = cabs1(x)
                r = hypot(ax, cabs1(y))
                if r == 0.0:
                    cs[k] = 1.0
                    sn[k] = 0.0
                    continue
                if ax == 0.0:
                    cs[k] = 0.0
                    sn[k] = 1.0
                else:
                    cs[k] = ax / r
                    sn[k] = (x / ax) * cconj(y) / r
                for j in range(k, hi + 1):
                    a = H[k, j]
                    b = H[k + 1, j]
                    H[k, j] = cs[k] * a + sn[k] * b
                    H[k + 1, j] = -cconj(sn[k]) * a + cs[k] * b
            # R Q
            for k in range(lo, hi):
                jmax = k + 1
                for i in range(lo, jmax + 1):
                    a = H[i, k]
                    b = H[i, k + 1]
                    H[i, k] = a * cs[k] + b * cconj(sn[k])
                    H[i, k + 1] = -a * sn[k] + b * cs[k]
            for k in range(lo, hi + 1):
                H[k, k] = H[k, k] + sigma
    return sweeps, hi


def log_abs_charpoly(double[::1] x, double[::1] y, double complex[::1] z,
                     double[::1] out):
    """``out[i] = sum_k log|x_i + i y_i - z_k|``."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t i, k
    cdef double acc, dx, dy
    with nogil:
        for i in range(m):
            acc = 0.0
            for k in range(n):
                dx = x[i] - z[k].real
                dy = y[i] - z[k].imag
                acc = acc + log(dx * dx + dy * dy)
            out[i] = 0.5 * acc
    return np.asarray(out)


def log_potential_pairing(double[::1] x, double[::1] y, double[::1] w,
                          double complex[::1] z):
    """``sum_i w_i sum_k log|x_i + i y_i - z_k|``; zero weights are skipped."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t i, k
    cdef double acc, total, dx, dy
    total = 0.0
    with nogil:
        for i in range(m):
            if w[i] == 0.0:
                continue
            acc = 0.0
            for k in range(n):
                dx = x[i] - z[k].real
                dy = y[i] - z[k].imag
                acc = acc + log(dx * dx + dy * dy)
            total = total + w[i] * acc
    return 0.5 * total
