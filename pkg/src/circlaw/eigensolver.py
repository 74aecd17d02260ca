"""Dense complex eigenvalues: Householder Hessenberg reduction followed by
single-shift QR with Wilkinson shifts and deflation.

The inner loops live in the compiled ``_core`` extension when available
(see :mod:`circlaw.backend`).
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import InvalidArgument, NonConvergence

DEFAULT_TOL = 1e-12


@dataclass
class EigResult:
    eigenvalues: np.ndarray
    iterations: int
    converged: bool


def _as_square(A):
    A = np.array(A, dtype=np.complex128, order="C", copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidArgument("matrix has non-finite entries")
    return A


def hessenberg_reduce(A, kernel=None):
    """Return an upper Hessenberg matrix unitarily similar to ``A``."""
    H = _as_square(A)
    backend.get(kernel).hessenberg_inplace(H)
    return H


def qr_eigenvalues(H, tol=DEFAULT_TOL, max_sweeps=None, kernel=None):
    """Eigenvalues of an upper Hessenberg matrix by shifted QR.

    Raises :class:`NonConvergence` with the deflated part of the spectrum
    when ``max_sweeps`` (default ``30 n``) is exhausted.
    """
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    H = _as_square(H)
    n = H.shape[0]
    if n and np.any(np.tril(H, -2) != 0):
        raise InvalidArgument("matrix is not upper Hessenberg")
    if max_sweeps is None:
        max_sweeps = 30 * max(n, 1)
    out = np.zeros(n, dtype=np.complex128)
    sweeps, hi = backend.get(kernel).hessenberg_qr(H, float(tol), int(max_sweeps), out)
    if hi >= 0:
        raise NonConvergence(
            f"QR did not converge in {sweeps} sweeps; {hi + 1} of {n} eigenvalues unresolved",
            partial=out[hi + 1:].copy(), sweeps=sweeps, remaining=hi + 1,
        )
    return EigResult(out, int(sweeps), True)


def eigvals(A, tol=DEFAULT_TOL, max_sweeps=None, kernel=None):
    """All eigenvalues of a dense complex matrix."""
    return qr_eigenvalues(hessenberg_reduce(A, kernel), tol, max_sweeps, kernel).eigenvalues


def dump_matrix_csv(A, path):
    """Write a complex matrix as CSV rows of ``re,im`` pairs (debugging aid)."""
    A = np.asarray(A, dtype=complex)
    with open(path, "w") as fh:
        fh.write(f"# complex matrix {A.shape[0]}x{A.shape[1]}; columns alternate re,im\n")
        for row in A:
            fh.write(",".join(f"{z.real!r},{z.imag!r}" for z in row) + "\n")
