"""Samplers for the Ginibre, truncated Bergman, Haar-unitary and i.i.d.
uniform-disk point processes.

All samplers are pure functions of ``(ensemble, seed)``.
"""

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import eigensolver, seeding
from .errors import EnvelopeFailure, InvalidDimension, NonConvergence, SamplerFailure, UnsupportedEnsemble
from .kernels import EnsembleSpec, ProjectionKernel

__all__ = [
    "EnsembleSpec", "PointSample", "ModuliSample", "sample_ginibre_matrix",
    "sample_ginibre_eigs", "sample_moduli", "sample_spp", "sample_iid_disk",
    "sample_haar_unitary_eigs", "sample", "sample_batch",
]

# shape above which moduli use the library gamma sampler instead of summed exponentials
GAMMA_SUM_MAX_SHAPE = 33


@dataclass
class PointSample:
    points: np.ndarray
    ensemble: EnsembleSpec
    seed: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex)
        if len(self.points) != self.ensemble.n:
            raise SamplerFailure(f"expected {self.ensemble.n} points, got {len(self.points)}")


@dataclass
class ModuliSample:
    radii: np.ndarray
    ensemble: EnsembleSpec
    seed: int


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidDimension(f"n must be a positive integer, got {n!r}")


def _complex_normal(rng, shape, variance):
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_ginibre_matrix(n, seed):
    """n x n matrix of i.i.d. complex Gaussians with ``E|a_ij|^2 = 1/n``."""
    _check_n(n)
    return _complex_normal(seeding.generator(seed), (n, n), 1.0 / n)


def sample_ginibre_eigs(n, seed):
    A = sample_ginibre_matrix(n, seed)
    res = eigensolver.qr_eigenvalues(eigensolver.hessenberg_reduce(A))
    return PointSample(res.eigenvalues, EnsembleSpec("ginibre", n), seed,
                       {"sweeps": res.iterations})


def _squared_moduli(family, n, rng):
    k = np.arange(n)
    if family == "ginibre":
        out = np.empty(n)
        small = k[k + 1 < GAMMA_SUM_MAX_SHAPE]
        for j in small:
            out[j] = rng.standard_exponential(j + 1).sum() / n
        big = k[k + 1 >= GAMMA_SUM_MAX_SHAPE]
        if big.size:
            out[big] = rng.gamma(big + 1.0, 1.0 / n)
        return out
    if family == "bergman":
        return rng.random(n) ** (1.0 / (k + 1.0))
    raise UnsupportedEnsemble(f"independent-radii law not available for {family!r}")


def sample_moduli(ensemble, seed):
    """Independent radii ``R_0..R_{n-1}`` whose multiset has the law of ``{|z_k|}``.

    Ginibre: ``R_k^2 ~ Gamma(k+1, rate n)``; Bergman: ``R_k^2 ~ Beta(k+1, 1)``.
    """
    sq = _squared_moduli(ensemble.family, ensemble.n, seeding.generator(seed))
    return ModuliSample(np.sqrt(sq), ensemble, seed)


def _proposal(family, n, rng, size):
    """Draws from the normalized diagonal ``K(z, z) dmu / n``."""
    ell = rng.integers(0, n, size)
    if family == "ginibre":
        r2 = rng.gamma(ell + 1.0, 1.0 / n)
    elif family == "bergman":
        r2 = rng.random(size) ** (1.0 / (ell + 1.0))
    else:
        raise UnsupportedEnsemble(f"no SPP proposal for {family!r}")
    theta = rng.uniform(0.0, 2 * np.pi, size)
    return np.sqrt(r2) * np.exp(1j * theta)


def sample_spp(kernel, n, seed, max_proposals=200_000):
    """Sequential sampler for a rank-n projection determinantal process.

    Each point is proposed from ``K(z, z) dmu / n`` and accepted with
    probability ``K_i(z, z) / K(z, z)``, where ``K_i`` projects out the
    feature vectors of the points already placed (``K_i <= K``, so the
    envelope constant is 1 at every level).
    """
    _check_n(n)
    if kernel.n != n:
        raise InvalidDimension(f"kernel rank {kernel.n} != n = {n}")
    family = kernel.family
    rng = seeding.generator(seed)
    basis = np.zeros((n, n), dtype=complex)
    points = np.empty(n, dtype=complex)
    proposals = 0
    for i in range(n):
        expected = n / (n - i)
        batch = int(min(4096, max(8, math.ceil(2 * expected))))
        tried = 0
        while True:
            cand = _proposal(family, n, rng, batch)
            u = kernel.unit_features(cand)
            if i:
                proj = u @ basis[:i].conj().T
                accept_p = 1.0 - np.sum(np.abs(proj) ** 2, axis=1)
            else:
                accept_p = np.ones(batch)
            hits = np.flatnonzero(rng.random(batch) < accept_p)
            tried += batch
            if hits.size:
                j = hits[0]
                tried -= batch - j - 1
                break
            if tried >= max_proposals:
                raise EnvelopeFailure(
                    f"level {i}: no acceptance in {tried} proposals "
                    f"(expected rate {1 / expected:.3g})", level=i, proposals=tried)
        proposals += tried
        points[i] = cand[j]
        v = u[j]
        if i:
            v = v - basis[:i].T @ (basis[:i].conj() @ v)
            v = v - basis[:i].T @ (basis[:i].conj() @ v)
        basis[i] = v / np.linalg.norm(v)
    return PointSample(points, kernel.ensemble, seed, {"proposals": proposals})


def sample_iid_disk(n, seed):
    _check_n(n)
    rng = seeding.generator(seed)
    r = np.sqrt(rng.random(n))
    theta = rng.uniform(0.0, 2 * np.pi, n)
    return PointSample(r * np.exp(1j * theta), EnsembleSpec("iid_disk", n), seed)


def haar_unitary(n, seed):
    """Haar-distributed unitary: QR of a Gaussian matrix with ``diag(R) > 0`` enforced."""
    _check_n(n)
    Z = _complex_normal(seeding.generator(seed), (n, n), 1.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    if np.any(np.abs(d) == 0):
        raise SamplerFailure("orthonormalization breakdown: singular triangular factor")
    return Q * (d / np.abs(d))[None, :]


def sample_haar_unitary_eigs(n, seed):
    U = haar_unitary(n, seed)
    res = eigensolver.qr_eigenvalues(eigensolver.hessenberg_reduce(U))
    return PointSample(res.eigenvalues, EnsembleSpec("unitary", n), seed,
                       {"sweeps": res.iterations})


@functools.lru_cache(maxsize=16)
def _kernel(spec):
    return ProjectionKernel(spec)


def sample(spec, seed):
    """One configuration of ``spec``; Bergman goes through the SPP sampler."""
    if spec.family == "ginibre":
        return sample_ginibre_eigs(spec.n, seed)
    if spec.family == "bergman":
        return sample_spp(_kernel(spec), spec.n, seed)
    if spec.family == "unitary":
        return sample_haar_unitary_eigs(spec.n, seed)
    if spec.family == "iid_disk":
        return sample_iid_disk(spec.n, seed)
    raise UnsupportedEnsemble(spec.family)


def _chunk(spec, seed, replicas):
    out = np.empty((len(replicas), spec.n), dtype=complex)
    failed = []
    for row, r in enumerate(replicas):
        try:
            out[row] = sample(spec, seeding.derive(seed, r)).points
        except (NonConvergence, EnvelopeFailure):
            out[row] = np.nan
            failed.append(int(r))
    return out, failed


def sample_batch(spec, replicas, seed, threads=1, max_fail_fraction=0.01):
    """``(replicas, n)`` array; row ``r`` is ``sample(spec, derive(seed, r))``.

    Rows are assembled in replica order, so the result does not depend on
    ``threads``. Failed replicas are NaN rows; more than
    ``max_fail_fraction`` failures abort.
    """
    return _sample_batch_cached(spec, int(replicas), int(seed), int(threads),
                                float(max_fail_fraction)).copy()


@functools.lru_cache(maxsize=8)
def _sample_batch_cached(spec, replicas, seed, threads, max_fail_fraction):
    idx = np.arange(replicas)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        parts = np.array_split(idx, threads)
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda p: _chunk(spec, seed, p), parts))
    else:
        results = [_chunk(spec, seed, idx)]
    out = np.concatenate([r[0] for r in results], axis=0)
    failed = [f for r in results for f in r[1]]
    if len(failed) > max_fail_fraction * replicas:
        raise SamplerFailure(f"{len(failed)} of {replicas} replicas failed: {failed[:10]}")
    out.setflags(write=False)
    return out


def sample_moduli_batch(spec, replicas, seed):
    return np.stack([sample_moduli(spec, seeding.derive(seed, r)).radii for r in range(replicas)])
