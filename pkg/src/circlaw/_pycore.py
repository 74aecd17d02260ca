"""Pure-Python fallbacks for the compiled kernels in ``_core.pyx``.

Same algorithms and signatures; inner loops are replaced by numpy slice
operations, so results agree with the compiled kernels to rounding.
"""

import cmath
import math

import numpy as np


def hessenberg_inplace(A):
    n = A.shape[0]
    for k in range(n - 2):
        col = A[k + 1:, k]
        tail = float(np.vdot(col[1:], col[1:]).real)
        if tail == 0.0:
            continue
        alpha = col[0]
        anorm = abs(alpha)
        xnorm = math.sqrt(anorm * anorm + tail)
        phase = alpha / anorm if anorm > 0.0 else 1.0
        beta = -phase * xnorm
        v = col.copy()
        v[0] = alpha - beta
        tau = 2.0 / (abs(v[0]) ** 2 + tail)
        A[k + 1:, k:] -= np.outer(v, tau * (v.conj() @ A[k + 1:, k:]))
        A[:, k + 1:] -= np.outer(tau * (A[:, k + 1:] @ v), v.conj())
        A[k + 1, k] = beta
        A[k + 2:, k] = 0.0
    return A


def _wilkinson(a, b, c, d):
    half = 0.5 * (a - d)
    root = cmath.sqrt(half * half + b * c)
    if (half.real * root.real + half.imag * root.imag) < 0.0:
        root = -root
    if half + root == 0:
        return d
    return d - b * c / (half + root)


def hessenberg_qr(H, tol, max_sweeps, out):
    n = H.shape[0]
    hi = n - 1
    sweeps = 0
    its = 0
    hmax = float(np.abs(H).max()) if n else 0.0
    cs = np.zeros(max(n, 1))
    sn = np.zeros(max(n, 1), dtype=complex)
    while hi >= 0:
        if hi == 0:
            out[0] = H[0, 0]
            hi = -1
            break
        lo = 0
        k = hi
        while k > 0:
            scale = abs(H[k - 1, k - 1]) + abs(H[k, k])
            if scale == 0.0:
                scale = hmax
            if abs(H[k, k - 1]) <= tol * scale:
                H[k, k - 1] = 0.0
                lo = k
                break
            k -= 1
        if lo == hi:
            out[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
            c, d = H[hi, hi - 1], H[hi, hi]
            half = 0.5 * (a - d)
            disc = cmath.sqrt(half * half + b * c)
            out[hi - 1] = 0.5 * (a + d) + disc
            out[hi] = 0.5 * (a + d) - disc
            hi -= 2
            its = 0
            continue
        if sweeps >= max_sweeps:
            break
        sweeps += 1
        its += 1
        if its % 11 == 10:
            sigma = H[hi, hi] + 1.5 * abs(H[hi, hi - 1]) + 0.5j * abs(H[hi - 1, hi - 2])
        else:
            sigma = _wilkinson(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        idx = np.arange(lo, hi + 1)
        H[idx, idx] -= sigma
        for k in range(lo, hi):
            x = H[k, k]
            y = H[k + 1, k]
            ax = abs(x)
            r = math.hypot(ax, abs(y))
            if r == 0.0:
                cs[k], sn[k] = 1.0, 0.0
                continue
            if ax == 0.0:
                cs[k], sn[k] = 0.0, 1.0
            else:
                cs[k] = ax / r
                sn[k] = (x / ax) * y.conjugate() / r
            a = H[k, k:hi + 1].copy()
            b = H[k + 1, k:hi + 1]
            H[k, k:hi + 1] = cs[k] * a + sn[k] * b
            H[k + 1, k:hi + 1] = -sn[k].conjugate() * a + cs[k] * b
        for k in range(lo, hi):
            a = H[lo:k + 2, k].copy()
            b = H[lo:k + 2, k + 1]
            H[lo:k + 2, k] = a * cs[k] + b * sn[k].conjugate()
            H[lo:k + 2, k + 1] = -a * sn[k] + b * cs[k]
        H[idx, idx] += sigma
    return sweeps, hi


def log_abs_charpoly(x, y, z, out):
    pts = np.asarray(x) + 1j * np.asarray(y)
    # chunked to bound memory at grid sizes of 256^2 and beyond
    step = max(1, 2_000_000 // max(len(z), 1))
    for start in range(0, len(pts), step):
        d = pts[start:start + step, None] - np.asarray(z)[None, :]
        out[start:start + step] = 0.5 * np.log(d.real ** 2 + d.imag ** 2).sum(axis=1)
    return out


def log_potential_pairing(x, y, w, z):
    w = np.asarray(w)
    keep = w != 0.0
    vals = np.empty(int(keep.sum()))
    log_abs_charpoly(np.asarray(x)[keep], np.asarray(y)[keep], z, vals)
    return float(np.dot(w[keep], vals))
